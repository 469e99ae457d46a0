#pragma once

// Signal generators and statistical oracles shared by the unit and
// acceptance tests. Nothing here calls into the library's own DSP paths
// except where noted.

#include "echomark/audio.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace echomark::testing {

inline constexpr int kRate = 44100;

AudioClip white_noise(double seconds, std::uint64_t seed, int rate = kRate);
AudioClip white_noise_samples(std::size_t n, std::uint64_t seed, int rate = kRate);

/// Synthetic music excerpt: bass, chords and melody built from harmonic
/// tones with vibrato and decaying envelopes, a drum kit and a diffuse room
/// tail. Peak normalised to 0.8.
AudioClip synth_music(double seconds, std::uint64_t seed, int rate = kRate);

AudioClip sinusoid(double freq, double seconds, int rate, double amplitude = 0.5,
                   double phase = 0.0);

std::vector<double> direct_convolution(std::span<const double> x, std::span<const double> h);

/// Two-sample Kolmogorov-Smirnov test; asymptotic p-value.
double ks_pvalue(std::vector<double> a, std::vector<double> b);

/// P(T > F) + 0.5 P(T = F) by enumerating every pair.
double pairwise_auc(std::span<const double> t, std::span<const double> f);

/// Standard normal CDF.
double normal_cdf(double x);

/// Fresh directory under the system temp path, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);

} // namespace echomark::testing
