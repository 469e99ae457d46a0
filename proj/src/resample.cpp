#include "echomark/audio.hpp"

#include "echomark/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace echomark {

namespace {

// Windowed-sinc prototype, tabulated in units of the lower of the two rates.
constexpr int kHalfTaps = 64;         // 128 taps per phase
constexpr int kPhases = 2048;         // table resolution per unit lag
constexpr double kCutoff = 0.45;      // cycles per sample at the lower rate
constexpr double kKaiserBeta = 12.0;

double bessel_i0(double x)
{
    double sum = 1.0;
    double term = 1.0;
    const double q = x * x / 4.0;
    for (int k = 1; k < 64; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < sum * 1e-17)
            break;
    }
    return sum;
}

class SincTable {
public:
    SincTable() : values_(static_cast<std::size_t>(kHalfTaps) * kPhases + 2, 0.0)
    {
        const double norm = bessel_i0(kKaiserBeta);
        for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
            const double u = static_cast<double>(i) / kPhases;
            const double r = u / kHalfTaps;
            if (r > 1.0)
                break;
            const double w = bessel_i0(kKaiserBeta * std::sqrt(1.0 - r * r)) / norm;
            const double x = 2.0 * kCutoff * u;
            const double sinc = x == 0.0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
            values_[i] = 2.0 * kCutoff * sinc * w;
        }
    }

    double operator()(double u) const
    {
        const double pos = std::abs(u) * kPhases;
        const auto idx = static_cast<std::size_t>(pos);
        if (idx + 1 >= values_.size())
            return 0.0;
        const double frac = pos - static_cast<double>(idx);
        return values_[idx] + frac * (values_[idx + 1] - values_[idx]);
    }

private:
    std::vector<double> values_;
};

const SincTable& sinc_table()
{
    static const SincTable table;
    return table;
}

} // namespace

std::vector<double> resample_ratio(std::span<const double> in, double ratio, std::size_t out_len)
{
    if (!(ratio > 0.0) || !std::isfinite(ratio))
        throw Error("resample ratio must be positive");
    const SincTable& g = sinc_table();
    const double scale = std::min(1.0, ratio);
    const double reach = kHalfTaps / scale;
    const auto n_in = static_cast<std::ptrdiff_t>(in.size());

    std::vector<double> out(out_len, 0.0);
    for (std::size_t m = 0; m < out_len; ++m) {
        const double t = static_cast<double>(m) / ratio;
        const auto first = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(std::ceil(t - reach)));
        const auto last = std::min<std::ptrdiff_t>(n_in - 1, static_cast<std::ptrdiff_t>(std::floor(t + reach)));
        double acc = 0.0;
        for (std::ptrdiff_t n = first; n <= last; ++n)
            acc += in[static_cast<std::size_t>(n)] * g(scale * (t - static_cast<double>(n)));
        out[m] = scale * acc;
    }
    return out;
}

AudioClip resample(const AudioClip& clip, int target_rate)
{
    if (target_rate <= 0)
        throw Error("target sample rate must be positive");
    if (target_rate == clip.sample_rate())
        return clip;
    const double ratio = static_cast<double>(target_rate) / clip.sample_rate();
    const auto out_len = static_cast<std::size_t>(
        std::llround(static_cast<double>(clip.size()) * target_rate / clip.sample_rate()));
    if (out_len == 0)
        throw Error("resampled clip would be empty");
    return AudioClip(resample_ratio(clip.view(), ratio, out_len), target_rate);
}

} // namespace echomark
