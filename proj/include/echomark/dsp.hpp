#pragma once

// Spectral primitives shared by embedding and detection.

#include "echomark/audio.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace echomark {

/// Magnitudes below this are floored before taking the logarithm.
inline constexpr double kSpectralFloor = 1e-12;

/// Real cepstrum indexed by quefrency (lag in samples). Its length equals the
/// analysis length; values[k] == values[N - k] up to rounding.
struct Cepstrum {
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    double operator[](std::size_t k) const noexcept { return values[k]; }
};

/// ifft(log(max(|fft(x)|, floor))) over the exact input length, no window.
Cepstrum real_cepstrum(std::span<const double> x);
Cepstrum real_cepstrum(const AudioClip& clip);

/// Full linear convolution (length n + k - 1) computed by FFT overlap-add.
std::vector<double> convolve(std::span<const double> x, std::span<const double> kernel);
AudioClip convolve(const AudioClip& clip, std::span<const double> kernel);

/// Sliding dot product out[n] = sum_k values[n + k] * templ[k] for
/// n in [0, N - L].
std::vector<double> cross_correlate(std::span<const double> values, std::span<const double> templ);

/// Same as cross_correlate but only for lags n in [first, last] (clamped to
/// N - L). Direct evaluation; intended for detection bands.
std::vector<double> cross_correlate_range(std::span<const double> values,
                                          std::span<const double> templ, std::size_t first,
                                          std::size_t last);

/// c[n] - 0.5 c[n-1] - 0.5 c[n+1]; missing neighbours count as zero.
std::vector<double> enhance_correlation(std::span<const double> cstar);

} // namespace echomark
