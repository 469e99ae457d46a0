#include "echomark/bits.hpp"

#include "echomark/error.hpp"

namespace echomark {

std::string bits_to_hex(std::span<const std::uint8_t> bits)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve((bits.size() + 3) / 4);
    for (std::size_t i = 0; i < bits.size(); i += 4) {
        int nibble = 0;
        for (std::size_t j = 0; j < 4; ++j)
            nibble = (nibble << 1) | (i + j < bits.size() && bits[i + j] ? 1 : 0);
        out.push_back(digits[nibble]);
    }
    return out;
}

Bits bits_from_hex(std::string_view hex, std::size_t length)
{
    if (hex.size() * 4 < length)
        throw Error("hex string too short for " + std::to_string(length) + " bits");
    Bits bits(length);
    for (std::size_t i = 0; i < length; ++i) {
        const char c = hex[i / 4];
        int v;
        if (c >= '0' && c <= '9')
            v = c - '0';
        else if (c >= 'a' && c <= 'f')
            v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F')
            v = c - 'A' + 10;
        else
            throw Error(std::string("invalid hex digit '") + c + "'");
        bits[i] = static_cast<std::uint8_t>((v >> (3 - i % 4)) & 1);
    }
    return bits;
}

std::vector<double> bipolar(std::span<const std::uint8_t> bits)
{
    std::vector<double> out(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        out[i] = bits[i] ? 1.0 : -1.0;
    return out;
}

bool is_binary(std::span<const std::uint8_t> bits) noexcept
{
    for (auto b : bits)
        if (b > 1)
            return false;
    return true;
}

} // namespace echomark
