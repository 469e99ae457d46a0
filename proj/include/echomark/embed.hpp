#pragma once

#include "echomark/audio.hpp"
#include "echomark/bits.hpp"

#include <variant>
#include <vector>

namespace echomark {

/// Single echo: lag in samples and amplitude.
struct EchoKey {
    int delta = 75;
    double alpha = 0.4;
};

/// Time-spread echo: a +/-1 pattern placed at lag `delta`.
struct SpreadKey {
    Bits pattern;
    double alpha = 0.01;
    int delta = 75;

    std::size_t length() const noexcept { return pattern.size(); }
};

using WatermarkKey = std::variant<EchoKey, SpreadKey>;

/// `classical` keeps the direct path (h[0] = 1); `literal` omits it and
/// convolves the carrier with the scaled pattern alone.
enum class SpreadKernelForm { classical, literal };

void validate(const EchoKey& key);
void validate(const SpreadKey& key);

/// [1, 0 x (delta - 1), alpha]
std::vector<double> build_echo_kernel(const EchoKey& key);

/// Length delta + L with h[delta + k] += alpha * (2 p[k] - 1).
std::vector<double> build_echo_kernel(const SpreadKey& key,
                                      SpreadKernelForm form = SpreadKernelForm::classical);

/// out[n] = x[n] + alpha * x[n - delta], zero history, same length as input.
AudioClip embed_single_echo(const AudioClip& clip, const EchoKey& key);

/// Convolves with the spread kernel and truncates to the input length.
AudioClip embed_spread(const AudioClip& clip, const SpreadKey& key,
                       SpreadKernelForm form = SpreadKernelForm::classical);

AudioClip embed(const AudioClip& clip, const WatermarkKey& key);

/// Copy of `key` with alpha multiplied by `ratio`.
WatermarkKey scale_alpha(const WatermarkKey& key, double ratio);

int key_delta(const WatermarkKey& key) noexcept;

} // namespace echomark
