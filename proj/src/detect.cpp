#include "echomark/detect.hpp"

#include "echomark/dsp.hpp"
#include "echomark/error.hpp"

#include <cmath>
#include <string>

namespace echomark {

namespace {

void check_band(std::size_t size, LagBand band)
{
    if (band.first >= band.last)
        throw Error("lag band must satisfy first < last");
    if (band.last >= size)
        throw Error("lag band exceeds the analysed sequence");
}

ZScore finish(double value, double mean, double variance, ZScoreForm form)
{
    const double sigma = std::sqrt(std::max(variance, 0.0));
    if (sigma < kDegenerateSigma)
        return {0.0, true};
    return {form == ZScoreForm::standard ? (value - mean) / sigma : mean / sigma, false};
}

} // namespace

const char* to_string(ProfileSource source) noexcept
{
    switch (source) {
    case ProfileSource::cepstrum:
        return "cepstrum";
    case ProfileSource::spread_correlation:
        return "spread_correlation";
    case ProfileSource::spread_correlation_enhanced:
        return "spread_correlation_enhanced";
    }
    return "unknown";
}

ZScore exclusion_zscore(std::span<const double> values, std::size_t i, LagBand band,
                        std::size_t halfwidth, ZScoreForm form)
{
    check_band(values.size(), band);
    if (i < band.first || i > band.last)
        throw Error("lag outside the z-score band");

    auto kept = [&](std::size_t j) { return (j > i ? j - i : i - j) > halfwidth; };
    std::size_t count = 0;
    double sum = 0.0;
    for (std::size_t j = band.first; j <= band.last; ++j)
        if (kept(j)) {
            sum += values[j];
            ++count;
        }
    if (count < 2)
        throw Error("fewer than two samples remain after exclusion");
    const double mean = sum / static_cast<double>(count);
    double ss = 0.0;
    for (std::size_t j = band.first; j <= band.last; ++j)
        if (kept(j))
            ss += (values[j] - mean) * (values[j] - mean);
    return finish(values[i], mean, ss / static_cast<double>(count), form);
}

ZScoreProfile zscore_profile(std::span<const double> values, LagBand band, std::size_t halfwidth,
                             ProfileSource source, ZScoreForm form)
{
    check_band(values.size(), band);
    const std::size_t width = band.last - band.first + 1;
    if (width < 2 * halfwidth + 3)
        throw Error("band too narrow for the exclusion window");

    // Centre on the band mean so the running sums do not lose precision
    // for sequences sitting on a large offset.
    double centre = 0.0;
    for (std::size_t j = band.first; j <= band.last; ++j)
        centre += values[j];
    centre /= static_cast<double>(width);

    std::vector<double> d(width);
    double total = 0.0;
    double total_sq = 0.0;
    for (std::size_t k = 0; k < width; ++k) {
        d[k] = values[band.first + k] - centre;
        total += d[k];
        total_sq += d[k] * d[k];
    }
    // Prefix sums for the excluded windows.
    std::vector<double> ps(width + 1, 0.0), pq(width + 1, 0.0);
    for (std::size_t k = 0; k < width; ++k) {
        ps[k + 1] = ps[k] + d[k];
        pq[k + 1] = pq[k] + d[k] * d[k];
    }

    ZScoreProfile profile;
    profile.band = band;
    profile.exclusion_halfwidth = halfwidth;
    profile.source = source;
    profile.z.resize(width);
    profile.degenerate.resize(width);
    for (std::size_t k = 0; k < width; ++k) {
        const std::size_t lo = k > halfwidth ? k - halfwidth : 0;
        const std::size_t hi = std::min(width - 1, k + halfwidth);
        const double count = static_cast<double>(width - (hi - lo + 1));
        const double s = total - (ps[hi + 1] - ps[lo]);
        const double q = total_sq - (pq[hi + 1] - pq[lo]);
        const double mean = s / count;
        const double variance = q / count - mean * mean;
        const ZScore z = form == ZScoreForm::standard
            ? finish(d[k], mean, variance, form)
            : finish(0.0, mean + centre, variance, form);
        profile.z[k] = z.value;
        profile.degenerate[k] = z.degenerate;
    }
    return profile;
}

namespace {

DetectionReport make_report(ZScoreProfile profile, std::optional<std::size_t> key_lag,
                            double duration)
{
    DetectionReport r;
    r.duration_seconds = duration;
    bool found = false;
    double best = 0.0;
    for (std::size_t k = 0; k < profile.z.size(); ++k) {
        if (profile.degenerate[k])
            continue;
        if (!found || profile.z[k] > best) {
            best = profile.z[k];
            r.argmax_lag = profile.band.first + k;
            found = true;
        }
    }
    if (!found) {
        r.degenerate = true;
        r.argmax_lag = profile.band.first;
    }
    if (key_lag) {
        if (*key_lag < profile.band.first || *key_lag > profile.band.last)
            throw Error("key lag " + std::to_string(*key_lag) + " lies outside the scan band");
        r.key_degenerate = profile.degenerate_at(*key_lag);
        r.z_at_key = profile.at(*key_lag);
    }
    r.profile = std::move(profile);
    return r;
}

} // namespace

DetectionReport detect_single_echo(const Cepstrum& cepstrum, LagBand band,
                                   std::optional<std::size_t> key_lag, ZScoreForm form,
                                   double duration_seconds)
{
    auto profile = zscore_profile(cepstrum.values, band, 0, ProfileSource::cepstrum, form);
    return make_report(std::move(profile), key_lag, duration_seconds);
}

DetectionReport detect_single_echo(const AudioClip& clip, LagBand band,
                                   std::optional<std::size_t> key_lag, ZScoreForm form)
{
    if (clip.size() <= 2 * band.last)
        throw Error("clip too short: single-echo detection over lags up to " +
                    std::to_string(band.last) + " needs more than " +
                    std::to_string(2 * band.last) + " samples");
    return detect_single_echo(real_cepstrum(clip), band, key_lag, form, clip.duration_seconds());
}

DetectionReport detect_spread(const Cepstrum& c, const SpreadKey& key, SpreadDetectOptions options,
                              double duration_seconds)
{
    validate(key);
    const std::size_t length = key.length();
    const auto delta = static_cast<std::size_t>(key.delta);
    if (c.size() <= length + delta + 1)
        throw Error("clip too short: spread detection needs more than " +
                    std::to_string(length + delta + 1) + " samples");
    const auto templ = bipolar(key.pattern);

    // The cepstrum is N-periodic; extending it periodically lets clips
    // shorter than 2L + delta still cover the whole band. One extra lag feeds
    // the enhancement's right neighbour at the band edge.
    const std::size_t last = length + delta + 1;
    std::vector<double> periodic(last + length);
    for (std::size_t i = 0; i < periodic.size(); ++i)
        periodic[i] = c.values[i % c.size()];
    auto cstar = cross_correlate_range(periodic, templ, 0, last);
    ProfileSource source = ProfileSource::spread_correlation;
    if (options.enhanced) {
        cstar = enhance_correlation(cstar);
        source = ProfileSource::spread_correlation_enhanced;
    }
    const LagBand band{options.band_start, length + delta};
    auto profile = zscore_profile(cstar, band, options.exclusion, source, options.form);
    return make_report(std::move(profile), delta, duration_seconds);
}

DetectionReport detect_spread(const AudioClip& clip, const SpreadKey& key,
                              SpreadDetectOptions options)
{
    validate(key);
    if (clip.size() <= key.length() + static_cast<std::size_t>(key.delta) + 1)
        throw Error("clip too short: spread detection needs more than " +
                    std::to_string(key.length() + static_cast<std::size_t>(key.delta) + 1) +
                    " samples");
    return detect_spread(real_cepstrum(clip), key, options, clip.duration_seconds());
}

DetectionReport detect(const AudioClip& clip, const WatermarkKey& key, LagBand band, bool enhanced)
{
    if (const auto* single = std::get_if<EchoKey>(&key))
        return detect_single_echo(clip, band, static_cast<std::size_t>(single->delta));
    SpreadDetectOptions options;
    options.enhanced = enhanced;
    return detect_spread(clip, std::get<SpreadKey>(key), options);
}

} // namespace echomark
