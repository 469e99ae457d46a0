#include "echomark/payload.hpp"

#include "echomark/dsp.hpp"
#include "echomark/embed.hpp"
#include "echomark/error.hpp"

#include <algorithm>
#include <string>

namespace echomark {

void validate(const PayloadConfig& config)
{
    if (config.delta0 < 1 || config.delta1 < 1)
        throw Error("payload lags must be at least one sample");
    if (config.delta0 == config.delta1)
        throw Error("payload lags must differ");
    if (config.delta0 > 125 || config.delta1 > 125)
        throw Error("payload lags must not exceed 125 samples");
    if (!(config.alpha >= 0.0 && config.alpha < 1.0))
        throw Error("payload amplitude must lie in [0, 1)");
    if (config.window < 4 * static_cast<std::size_t>(std::max(config.delta0, config.delta1)))
        throw Error("payload window must be at least four times the larger lag");
}

std::size_t payload_capacity(std::size_t samples, const PayloadConfig& config)
{
    return samples / config.window;
}

double payload_bits_per_second(int sample_rate, const PayloadConfig& config)
{
    return static_cast<double>(sample_rate) / static_cast<double>(config.window);
}

std::vector<double> payload_mix_curve(std::span<const std::uint8_t> bits, std::size_t samples,
                                      std::size_t window)
{
    std::vector<double> m(samples, 0.0);
    if (bits.empty())
        return m;
    const double w = static_cast<double>(window);
    const double first_centre = 0.5 * w;
    const double last_centre = (static_cast<double>(bits.size()) - 0.5) * w;
    for (std::size_t n = 0; n < samples; ++n) {
        const double t = static_cast<double>(n);
        if (t <= first_centre) {
            m[n] = bits.front();
        } else if (t >= last_centre) {
            m[n] = bits.back();
        } else {
            const double pos = t / w - 0.5;
            const auto k = static_cast<std::size_t>(pos);
            const double frac = pos - static_cast<double>(k);
            m[n] = (1.0 - frac) * bits[k] + frac * bits[k + 1];
        }
    }
    return m;
}

AudioClip encode_payload(const AudioClip& clip, std::span<const std::uint8_t> bits,
                         const PayloadConfig& config)
{
    validate(config);
    if (!is_binary(bits))
        throw Error("payload must contain only 0/1");
    const std::size_t capacity = payload_capacity(clip.size(), config);
    if (bits.size() > capacity)
        throw Error("payload of " + std::to_string(bits.size()) + " bits exceeds capacity " +
                    std::to_string(capacity));
    const auto x0 = embed_single_echo(clip, {config.delta0, config.alpha});
    const auto x1 = embed_single_echo(clip, {config.delta1, config.alpha});
    const auto m = payload_mix_curve(bits, clip.size(), config.window);
    std::vector<double> out(clip.size());
    for (std::size_t n = 0; n < out.size(); ++n)
        out[n] = (1.0 - m[n]) * x0[n] + m[n] * x1[n];
    return AudioClip(std::move(out), clip.sample_rate());
}

Bits decode_payload(const AudioClip& clip, const PayloadConfig& config, std::size_t n_bits)
{
    validate(config);
    if (n_bits * config.window > clip.size())
        throw Error("clip holds fewer than " + std::to_string(n_bits) + " payload windows");
    Bits bits(n_bits);
    const auto d0 = static_cast<std::size_t>(config.delta0);
    const auto d1 = static_cast<std::size_t>(config.delta1);
    for (std::size_t k = 0; k < n_bits; ++k) {
        const auto c = real_cepstrum(clip.view().subspan(k * config.window, config.window));
        bits[k] = c[d0] > c[d1] ? 0 : 1;
    }
    return bits;
}

} // namespace echomark
