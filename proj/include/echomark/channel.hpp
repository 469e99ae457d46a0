#pragma once

// Simulated degradation channels standing in for a generative model's
// transformation of watermarked audio.

#include "echomark/audio.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace echomark {

enum class ChannelKind {
    identity,
    attenuate_echo,   // scales the embedding amplitude; applied at embed time
    additive_noise,   // white noise at snr_db relative to the clip RMS
    resample_factor,  // pitch/speed change by `factor`; echo lag becomes lag / factor
    random_resample,  // with `probability`, resample by a factor uniform in [low, high]
    mixture,          // adds `interferers` equal-weight noise clips at snr_db
    composite,        // children applied in order
};

struct ChannelSpec {
    ChannelKind kind = ChannelKind::identity;
    double ratio = 1.0;
    double snr_db = 0.0;
    double factor = 1.0;
    double probability = 0.0;
    double low = 0.75;
    double high = 1.25;
    int interferers = 0;
    std::vector<ChannelSpec> children;
    std::uint64_t seed = 0;

    static ChannelSpec identity();
    static ChannelSpec attenuate_echo(double ratio);
    static ChannelSpec additive_noise(double snr_db, std::uint64_t seed = 0);
    static ChannelSpec resample_factor(double factor);
    static ChannelSpec random_resample(double probability, double low = 0.75, double high = 1.25,
                                       std::uint64_t seed = 0);
    static ChannelSpec mixture(int interferers, double snr_db, std::uint64_t seed = 0);
    static ChannelSpec composite(std::vector<ChannelSpec> children);
};

void validate(const ChannelSpec& spec);

/// Product of every attenuate_echo ratio in the channel.
double echo_scale(const ChannelSpec& spec);

/// Applies the signal-domain stages. attenuate_echo stages pass the clip
/// through; harness pipelines honour them via echo_scale when embedding.
/// `salt` decorrelates the random stages between experiment cells.
AudioClip apply_channel(const AudioClip& clip, const ChannelSpec& spec, std::uint64_t salt = 0);

/// Resamples by 1/factor and keeps the original nominal rate, so content
/// is shifted up in pitch by `factor` and every lag shrinks by `factor`.
AudioClip pitch_shift_by_resampling(const AudioClip& clip, double factor);

/// Human-readable one-line description, e.g. "composite(attenuate(0.5),noise(20dB))".
std::string describe(const ChannelSpec& spec);

} // namespace echomark
