#include "echomark/dsp.hpp"

#include "echomark/error.hpp"
#include "fft.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace echomark {

Cepstrum real_cepstrum(std::span<const double> x)
{
    const std::size_t n = x.size();
    if (n < 2)
        throw Error("cepstrum needs at least two samples");
    const std::size_t bins = n / 2 + 1;

    auto time = fft::alloc_real(n);
    auto spec = fft::alloc_complex(bins);
    std::copy(x.begin(), x.end(), time.get());
    fft::forward(n, time.get(), spec.get());

    for (std::size_t k = 0; k < bins; ++k) {
        const double mag = std::hypot(spec[k][0], spec[k][1]);
        spec[k][0] = std::log(std::max(mag, kSpectralFloor));
        spec[k][1] = 0.0;
    }
    fft::inverse(n, spec.get(), time.get());

    Cepstrum c;
    c.values.resize(n);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k)
        c.values[k] = time[k] * scale;
    return c;
}

Cepstrum real_cepstrum(const AudioClip& clip)
{
    return real_cepstrum(clip.view());
}

std::vector<double> convolve(std::span<const double> x, std::span<const double> kernel)
{
    if (kernel.empty())
        throw Error("convolution kernel must not be empty");
    if (x.empty())
        return {};
    const std::size_t out_len = x.size() + kernel.size() - 1;

    // One block if everything fits in a modest transform, overlap-add otherwise.
    std::size_t fft_len = fft::good_size(out_len);
    if (fft_len > std::max<std::size_t>(8 * kernel.size(), 1 << 14))
        fft_len = fft::good_size(std::max<std::size_t>(8 * kernel.size(), 1 << 14));
    const std::size_t block = fft_len - kernel.size() + 1;
    const std::size_t bins = fft_len / 2 + 1;

    auto time = fft::alloc_real(fft_len);
    auto kspec = fft::alloc_complex(bins);
    auto xspec = fft::alloc_complex(bins);

    std::fill_n(time.get(), fft_len, 0.0);
    std::copy(kernel.begin(), kernel.end(), time.get());
    fft::forward(fft_len, time.get(), kspec.get());

    std::vector<double> out(out_len, 0.0);
    const double scale = 1.0 / static_cast<double>(fft_len);
    for (std::size_t start = 0; start < x.size(); start += block) {
        const std::size_t len = std::min(block, x.size() - start);
        std::fill_n(time.get(), fft_len, 0.0);
        std::copy_n(x.begin() + static_cast<std::ptrdiff_t>(start), len, time.get());
        fft::forward(fft_len, time.get(), xspec.get());
        for (std::size_t k = 0; k < bins; ++k) {
            const double re = xspec[k][0] * kspec[k][0] - xspec[k][1] * kspec[k][1];
            const double im = xspec[k][0] * kspec[k][1] + xspec[k][1] * kspec[k][0];
            xspec[k][0] = re;
            xspec[k][1] = im;
        }
        fft::inverse(fft_len, xspec.get(), time.get());
        const std::size_t produced = std::min(len + kernel.size() - 1, out_len - start);
        for (std::size_t i = 0; i < produced; ++i)
            out[start + i] += time[i] * scale;
    }
    return out;
}

AudioClip convolve(const AudioClip& clip, std::span<const double> kernel)
{
    return AudioClip(convolve(clip.view(), kernel), clip.sample_rate());
}

std::vector<double> cross_correlate(std::span<const double> values, std::span<const double> templ)
{
    if (templ.empty())
        throw Error("correlation template must not be empty");
    if (templ.size() > values.size())
        throw Error("correlation template is longer than the sequence");
    const std::size_t lags = values.size() - templ.size() + 1;
    if (lags * templ.size() <= (std::size_t{1} << 22))
        return cross_correlate_range(values, templ, 0, lags - 1);

    // Correlation as convolution with the reversed template.
    std::vector<double> reversed(templ.rbegin(), templ.rend());
    const auto full = convolve(values, reversed);
    const std::size_t offset = templ.size() - 1;
    return std::vector<double>(full.begin() + static_cast<std::ptrdiff_t>(offset),
                               full.begin() + static_cast<std::ptrdiff_t>(offset + lags));
}

std::vector<double> cross_correlate_range(std::span<const double> values,
                                          std::span<const double> templ, std::size_t first,
                                          std::size_t last)
{
    if (templ.empty())
        throw Error("correlation template must not be empty");
    if (templ.size() > values.size())
        throw Error("correlation template is longer than the sequence");
    last = std::min(last, values.size() - templ.size());
    if (first > last)
        throw Error("empty correlation range");
    std::vector<double> out(last - first + 1);
    for (std::size_t n = first; n <= last; ++n) {
        const double* v = values.data() + n;
        double acc = 0.0;
        for (std::size_t k = 0; k < templ.size(); ++k)
            acc += v[k] * templ[k];
        out[n - first] = acc;
    }
    return out;
}

std::vector<double> enhance_correlation(std::span<const double> cstar)
{
    const std::size_t n = cstar.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double left = i > 0 ? cstar[i - 1] : 0.0;
        const double right = i + 1 < n ? cstar[i + 1] : 0.0;
        out[i] = cstar[i] - 0.5 * left - 0.5 * right;
    }
    return out;
}

} // namespace echomark
