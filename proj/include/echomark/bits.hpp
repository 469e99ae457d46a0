#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace echomark {

/// Binary sequence, one element per bit, each 0 or 1.
using Bits = std::vector<std::uint8_t>;

/// MSB-first hex; the final digit is zero padded when the length is not a
/// multiple of four.
std::string bits_to_hex(std::span<const std::uint8_t> bits);

/// Inverse of bits_to_hex. `length` selects how many leading bits to keep;
/// the hex string must hold at least that many.
Bits bits_from_hex(std::string_view hex, std::size_t length);

/// Maps bits to the +/-1 template 2p - 1.
std::vector<double> bipolar(std::span<const std::uint8_t> bits);

bool is_binary(std::span<const std::uint8_t> bits) noexcept;

} // namespace echomark
