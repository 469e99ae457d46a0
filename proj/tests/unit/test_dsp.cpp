#include "doctest.h"

#include "echomark/dsp.hpp"
#include "echomark/error.hpp"
#include "echomark/random.hpp"
#include "test_support.hpp"

#include <cmath>
#include <numeric>

using namespace echomark;
namespace t = echomark::testing;

TEST_CASE("unit impulse has an all-zero cepstrum")
{
    std::vector<double> x(1024, 0.0);
    x[0] = 1.0;
    const auto c = real_cepstrum(x);
    REQUIRE(c.size() == 1024);
    for (double v : c.values)
        CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("single echo kernel against its power series")
{
    // log|1 + a e^{-jwd}| = sum_k (-1)^{k+1} a^k/k cos(kwd): a/2 at d and N-d, -a^2/4 at 2d
    const double a = 0.4;
    std::vector<double> h(4096, 0.0);
    h[0] = 1.0;
    h[50] = a;
    const auto c = real_cepstrum(h);
    CHECK(std::abs(c[50] - a / 2) < 1e-6);
    CHECK(std::abs(c[4046] - a / 2) < 1e-6);
    CHECK(std::abs(c[100] - (-a * a / 4)) < 1e-6);
    CHECK(std::abs(c[150] - a * a * a / 6) < 1e-6);
    CHECK(std::abs(c[0]) < 1e-12);
    CHECK(std::abs(c[75]) < 1e-12);
}

TEST_CASE("odd lengths work without padding")
{
    std::vector<double> h(999, 0.0);
    h[0] = 1.0;
    h[30] = 0.5;
    const auto c = real_cepstrum(h);
    REQUIRE(c.size() == 999);
    CHECK(std::abs(c[30] - 0.25) < 1e-9);
    CHECK(std::abs(c[999 - 30] - 0.25) < 1e-9);
}

TEST_CASE("cepstrum of a circular convolution is the sum of cepstra")
{
    const std::size_t n = 2048;
    const auto x = t::white_noise_samples(n, 5).samples();
    std::vector<double> h(n, 0.0);
    h[0] = 1.0;
    h[7] = 0.3;
    h[19] = -0.2;
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k : {0u, 7u, 19u})
            y[(i + k) % n] += x[i] * h[k];
    const auto cx = real_cepstrum(x);
    const auto ch = real_cepstrum(h);
    const auto cy = real_cepstrum(y);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        worst = std::max(worst, std::abs(cy[i] - cx[i] - ch[i]));
    CHECK(worst < 1e-8);
}

TEST_CASE("silence hits the spectral floor instead of producing infinities")
{
    const auto c = real_cepstrum(std::vector<double>(256, 0.0));
    CHECK(std::abs(c[0] - std::log(kSpectralFloor)) < 1e-9);
    for (std::size_t i = 1; i < 256; ++i)
        CHECK(std::abs(c[i]) < 1e-9);
    CHECK_THROWS_AS(real_cepstrum(std::vector<double>{}), Error);
}

TEST_CASE("convolution basics")
{
    const auto x = t::white_noise_samples(300, 1).samples();
    const std::vector<double> one{1.0};
    const auto same = convolve(x, one);
    REQUIRE(same.size() == x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(std::abs(same[i] - x[i]) < 1e-12);

    std::vector<double> impulse(50, 0.0);
    impulse[0] = 1.0;
    const std::vector<double> k{0.5, -1.0, 0.25};
    const auto r = convolve(impulse, k);
    REQUIRE(r.size() == 52);
    CHECK(std::abs(r[0] - 0.5) < 1e-12);
    CHECK(std::abs(r[1] + 1.0) < 1e-12);
    CHECK(std::abs(r[2] - 0.25) < 1e-12);
    CHECK(std::abs(r[3]) < 1e-12);
}

TEST_CASE("FFT convolution matches direct summation")
{
    for (std::size_t kernel_len : {1100u, 17u, 5000u}) {
        const auto x = t::white_noise_samples(10000, kernel_len).samples();
        const auto h = t::white_noise_samples(kernel_len, kernel_len + 1).samples();
        const auto fast = convolve(x, h);
        const auto slow = t::direct_convolution(x, h);
        REQUIRE(fast.size() == slow.size());
        double worst = 0.0;
        for (std::size_t i = 0; i < fast.size(); ++i)
            worst = std::max(worst, std::abs(fast[i] - slow[i]));
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("clip convolution keeps the rate and the full tail")
{
    const auto clip = t::white_noise_samples(1000, 3);
    const std::vector<double> k{1.0, 0.0, 0.5};
    const auto out = convolve(clip, k);
    CHECK(out.size() == clip.size() + 2);
    CHECK(out.sample_rate() == clip.sample_rate());
    CHECK(out[2] == doctest::Approx(clip[2] + 0.5 * clip[0]));
}

TEST_CASE("cross-correlation peaks where the template sits")
{
    const std::size_t L = 1024;
    Rng rng(9);
    std::vector<double> templ(L);
    for (auto& v : templ)
        v = rng.bit() ? 1.0 : -1.0;
    std::vector<double> c(4096, 0.0);
    std::copy(templ.begin(), templ.end(), c.begin() + 75);
    const auto cs = cross_correlate(c, templ);
    REQUIRE(cs.size() == 4096 - L + 1);
    CHECK(std::abs(cs[75] - static_cast<double>(L)) < 1e-9);
    CHECK(std::max_element(cs.begin(), cs.end()) - cs.begin() == 75);

    const auto zeros = cross_correlate(std::vector<double>(2000, 0.0), templ);
    for (double v : zeros)
        CHECK(v == 0.0);
}

TEST_CASE("direct and FFT correlation paths agree")
{
    const auto values = t::white_noise_samples(20000, 4).samples();
    const auto templ = t::white_noise_samples(1024, 5).samples();
    const auto fast = cross_correlate(values, templ);   // large enough for the FFT path
    const auto direct = cross_correlate_range(values, templ, 0, values.size());
    REQUIRE(fast.size() == direct.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < fast.size(); ++i)
        worst = std::max(worst, std::abs(fast[i] - direct[i]));
    CHECK(worst < 1e-9);

    const auto part = cross_correlate_range(values, templ, 100, 110);
    REQUIRE(part.size() == 11);
    CHECK(part[0] == doctest::Approx(direct[100]));
}

TEST_CASE("random sign template against random signs: mean 0, spread sqrt(L)")
{
    const std::size_t L = 1024;
    Rng rng(21);
    std::vector<double> templ(L), values(L + 20000);
    for (auto& v : templ)
        v = rng.bit() ? 1.0 : -1.0;
    for (auto& v : values)
        v = rng.bit() ? 1.0 : -1.0;
    const auto cs = cross_correlate(values, templ);
    const double mean = std::accumulate(cs.begin(), cs.end(), 0.0) / static_cast<double>(cs.size());
    double var = 0.0;
    for (double v : cs)
        var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / static_cast<double>(cs.size()));
    CHECK(std::abs(mean) < 0.15 * std::sqrt(static_cast<double>(L)));
    CHECK(std::abs(sd / std::sqrt(static_cast<double>(L)) - 1.0) < 0.15);
}

TEST_CASE("peak enhancement")
{
    std::vector<double> impulse(200, 0.0);
    impulse[75] = 1.0;
    const auto e = enhance_correlation(impulse);
    CHECK(e[75] == 1.0);
    CHECK(e[74] == -0.5);
    CHECK(e[76] == -0.5);
    CHECK(e[10] == 0.0);

    const auto flat = enhance_correlation(std::vector<double>(50, 3.0));
    for (std::size_t i = 1; i + 1 < flat.size(); ++i)
        CHECK(flat[i] == 0.0);

    const auto r = t::white_noise_samples(500, 8).samples();
    const auto er = enhance_correlation(r);
    for (std::size_t i = 1; i + 1 < r.size(); ++i)
        CHECK(er[i] == doctest::Approx(r[i] - 0.5 * r[i - 1] - 0.5 * r[i + 1]));
}
