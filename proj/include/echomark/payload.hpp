#pragma once

#include "echomark/audio.hpp"
#include "echomark/bits.hpp"

namespace echomark {

/// Windowed two-lag echo codec: each window of `window` samples carries one
/// bit, 0 as an echo at delta0 and 1 as an echo at delta1.
struct PayloadConfig {
    int delta0 = 50;
    int delta1 = 75;
    double alpha = 0.4;
    std::size_t window = 1024;
};

void validate(const PayloadConfig& config);

/// floor(samples / window).
std::size_t payload_capacity(std::size_t samples, const PayloadConfig& config);

double payload_bits_per_second(int sample_rate, const PayloadConfig& config);

/// Mixing weight of the delta1 version at every sample: linear between
/// window centres, holding the first/last bit beyond them.
std::vector<double> payload_mix_curve(std::span<const std::uint8_t> bits, std::size_t samples,
                                      std::size_t window);

AudioClip encode_payload(const AudioClip& clip, std::span<const std::uint8_t> bits,
                         const PayloadConfig& config);

/// Bit k is 0 iff c[delta0] > c[delta1] on window k's cepstrum.
Bits decode_payload(const AudioClip& clip, const PayloadConfig& config, std::size_t n_bits);

} // namespace echomark
