#pragma once

#include "echomark/audio.hpp"
#include "echomark/dsp.hpp"
#include "echomark/embed.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace echomark {

/// Inclusive lag range [first, last].
struct LagBand {
    std::size_t first = 25;
    std::size_t last = 125;
};

inline constexpr LagBand kSingleEchoBand{25, 125};
inline constexpr std::size_t kSpreadBandStart = 3;
inline constexpr std::size_t kSpreadExclusion = 3;
inline constexpr double kDegenerateSigma = 1e-12;

/// `standard` is (v[i] - mu) / sigma. `literal_ratio` is mu / sigma, kept
/// only for comparison against the printed formula.
enum class ZScoreForm { standard, literal_ratio };

struct ZScore {
    double value = 0.0;
    bool degenerate = false;
};

/// z of values[i] against the mean and population standard deviation of
/// values[j], j in band, |j - i| > halfwidth.
ZScore exclusion_zscore(std::span<const double> values, std::size_t i, LagBand band,
                        std::size_t halfwidth, ZScoreForm form = ZScoreForm::standard);

enum class ProfileSource { cepstrum, spread_correlation, spread_correlation_enhanced };

const char* to_string(ProfileSource source) noexcept;

struct ZScoreProfile {
    std::vector<double> z;          // z[k] belongs to lag band.first + k
    std::vector<bool> degenerate;
    LagBand band;
    std::size_t exclusion_halfwidth = 0;
    ProfileSource source = ProfileSource::cepstrum;

    double at(std::size_t lag) const { return z.at(lag - band.first); }
    bool degenerate_at(std::size_t lag) const { return degenerate.at(lag - band.first); }
};

/// z at every lag of the band, using running sums over the band.
ZScoreProfile zscore_profile(std::span<const double> values, LagBand band, std::size_t halfwidth,
                             ProfileSource source, ZScoreForm form = ZScoreForm::standard);

struct DetectionReport {
    ZScoreProfile profile;
    std::size_t argmax_lag = 0;
    std::optional<double> z_at_key;
    bool degenerate = false;        // every lag in the band was degenerate
    bool key_degenerate = false;
    std::string clip_id;
    std::string key_id;
    double duration_seconds = 0.0;
};

/// Whole-clip cepstrum scanned over `band`; the key lag is optional.
DetectionReport detect_single_echo(const AudioClip& clip, LagBand band = kSingleEchoBand,
                                   std::optional<std::size_t> key_lag = std::nullopt,
                                   ZScoreForm form = ZScoreForm::standard);

struct SpreadDetectOptions {
    bool enhanced = false;
    ZScoreForm form = ZScoreForm::standard;
    std::size_t band_start = kSpreadBandStart;
    std::size_t exclusion = kSpreadExclusion;
};

/// Cepstrum correlated with 2p - 1 over [3, L + delta], z with +/-3 exclusion.
DetectionReport detect_spread(const AudioClip& clip, const SpreadKey& key,
                              SpreadDetectOptions options = {});

/// Spread detection on a precomputed cepstrum (lets one cepstrum be scored
/// against many templates).
DetectionReport detect_spread(const Cepstrum& cepstrum, const SpreadKey& key,
                              SpreadDetectOptions options = {}, double duration_seconds = 0.0);

DetectionReport detect_single_echo(const Cepstrum& cepstrum, LagBand band,
                                   std::optional<std::size_t> key_lag,
                                   ZScoreForm form = ZScoreForm::standard,
                                   double duration_seconds = 0.0);

/// Dispatches on the key type; single echoes use `band` and report z at the
/// key lag.
DetectionReport detect(const AudioClip& clip, const WatermarkKey& key,
                       LagBand band = kSingleEchoBand, bool enhanced = false);

} // namespace echomark
