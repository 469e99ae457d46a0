#include "doctest.h"

#include "echomark/audio.hpp"
#include "echomark/detect.hpp"
#include "echomark/embed.hpp"
#include "echomark/error.hpp"
#include "test_support.hpp"

#include <cmath>
#include <numbers>

using namespace echomark;
namespace t = echomark::testing;

TEST_CASE("equal rates return the input unchanged")
{
    const auto clip = t::white_noise_samples(1000, 1);
    CHECK(resample(clip, t::kRate).samples() == clip.samples());
}

TEST_CASE("1 kHz tone from 48 kHz to 44.1 kHz")
{
    const auto tone = t::sinusoid(1000.0, 1.0, 48000);
    const auto out = resample(tone, 44100);
    REQUIRE(out.size() == 44100);
    CHECK(out.sample_rate() == 44100);
    const auto target = t::sinusoid(1000.0, 1.0, 44100);
    double worst = 0.0;
    for (std::size_t i = 100; i + 100 < out.size(); ++i)
        worst = std::max(worst, std::abs(out[i] - target[i]));
    CHECK(worst <= 1e-3);
}

TEST_CASE("upsampling then downsampling a band-limited tone")
{
    const auto tone = t::sinusoid(440.0, 0.5, 22050, 0.3);
    const auto up = resample(tone, 44100);
    CHECK(up.size() == 2 * tone.size());
    const auto back = resample(up, 22050);
    REQUIRE(back.size() == tone.size());
    double worst = 0.0;
    for (std::size_t i = 100; i + 100 < back.size(); ++i)
        worst = std::max(worst, std::abs(back[i] - tone[i]));
    CHECK(worst <= 1e-3);
}

TEST_CASE("content above the new Nyquist is suppressed")
{
    // 20 kHz at 44.1 kHz lies above the 0.45 * 22.05 kHz cutoff
    const auto tone = t::sinusoid(20000.0, 0.5, 44100);
    const auto out = resample(tone, 22050);
    double peak = 0.0;
    for (std::size_t i = 200; i + 200 < out.size(); ++i)
        peak = std::max(peak, std::abs(out[i]));
    CHECK(peak < 0.01);
}

TEST_CASE("output length follows the rate ratio")
{
    const auto clip = t::white_noise_samples(1001, 2);
    CHECK(resample(clip, 48000).size() == static_cast<std::size_t>(std::llround(1001.0 * 48000 / 44100)));
    CHECK(resample(clip, 8000).size() == static_cast<std::size_t>(std::llround(1001.0 * 8000 / 44100)));
    CHECK_THROWS_AS(resample(clip, 0), Error);
    CHECK_THROWS_AS(resample_ratio(clip.view(), -1.0, 10), Error);
}

TEST_CASE("echo lag scales when the resampled clip is reinterpreted at the old rate")
{
    const auto marked = embed_single_echo(t::white_noise(10.0, 11), EchoKey{100, 0.4});
    // 44.1 kHz -> 55.125 kHz, then played back as 44.1 kHz
    const auto stretched = resample(marked, 55125).with_rate(44100);
    const auto report = detect_single_echo(stretched, LagBand{25, 170});
    CHECK(report.argmax_lag == 125);
}
