#include "doctest.h"

#include "echomark/channel.hpp"
#include "echomark/detect.hpp"
#include "echomark/embed.hpp"
#include "echomark/error.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace echomark;
namespace t = echomark::testing;

namespace {

AudioClip unit_rms(AudioClip clip)
{
    const double r = clip.rms();
    auto v = clip.samples();
    for (auto& s : v)
        s /= r;
    return AudioClip(std::move(v), clip.sample_rate());
}

} // namespace

TEST_CASE("identity and attenuation pass the signal through")
{
    const auto clip = t::white_noise_samples(5000, 1);
    CHECK(apply_channel(clip, ChannelSpec::identity()).samples() == clip.samples());
    CHECK(apply_channel(clip, ChannelSpec::attenuate_echo(0.5)).samples() == clip.samples());
}

TEST_CASE("noise is scaled to the requested SNR")
{
    const auto clip = unit_rms(t::white_noise(2.0, 2));
    const auto noisy = apply_channel(clip, ChannelSpec::additive_noise(20.0), 9);
    double ss = 0.0;
    for (std::size_t i = 0; i < clip.size(); ++i)
        ss += (noisy[i] - clip[i]) * (noisy[i] - clip[i]);
    const double added = std::sqrt(ss / static_cast<double>(clip.size()));
    CHECK(std::abs(added - 0.1) <= 0.001);
}

TEST_CASE("random stages are reproducible per salt")
{
    const auto clip = t::white_noise_samples(3000, 3);
    const auto spec = ChannelSpec::additive_noise(10.0, 4);
    CHECK(apply_channel(clip, spec, 1).samples() == apply_channel(clip, spec, 1).samples());
    CHECK(apply_channel(clip, spec, 1).samples() != apply_channel(clip, spec, 2).samples());
    CHECK(apply_channel(clip, spec, 1).samples() !=
          apply_channel(clip, ChannelSpec::additive_noise(10.0, 5), 1).samples());
}

TEST_CASE("identity is neutral inside a composite")
{
    const auto clip = t::white_noise_samples(4000, 5);
    for (const auto& x : {ChannelSpec::additive_noise(15.0, 2), ChannelSpec::mixture(2, 0.0, 1),
                          ChannelSpec::random_resample(0.7, 0.8, 1.2, 3), ChannelSpec::resample_factor(1.1)}) {
        const auto direct = apply_channel(clip, x, 11);
        CHECK(apply_channel(clip, ChannelSpec::composite({ChannelSpec::identity(), x}), 11).samples() ==
              direct.samples());
        CHECK(apply_channel(clip, ChannelSpec::composite({x, ChannelSpec::identity()}), 11).samples() ==
              direct.samples());
    }
}

TEST_CASE("echo scale multiplies attenuation stages")
{
    CHECK(echo_scale(ChannelSpec::identity()) == 1.0);
    CHECK(echo_scale(ChannelSpec::composite({ChannelSpec::attenuate_echo(0.5), ChannelSpec::additive_noise(20),
                                             ChannelSpec::attenuate_echo(0.5)})) == 0.25);
}

TEST_CASE("pitch shift moves the echo to lag / factor")
{
    const auto marked = embed_single_echo(t::white_noise(10.0, 6), EchoKey{100, 0.4});
    const auto shifted = apply_channel(marked, ChannelSpec::resample_factor(1.25));
    CHECK(shifted.sample_rate() == marked.sample_rate());
    CHECK(shifted.size() == static_cast<std::size_t>(std::llround(marked.size() / 1.25)));
    CHECK(detect_single_echo(shifted, LagBand{25, 170}).argmax_lag == 80);
    const auto slowed = pitch_shift_by_resampling(marked, 0.8);
    CHECK(detect_single_echo(slowed, LagBand{25, 170}).argmax_lag == 125);
}

TEST_CASE("random resampling fires with its probability")
{
    const auto clip = t::white_noise_samples(2000, 7);
    CHECK(apply_channel(clip, ChannelSpec::random_resample(0.0), 3).samples() == clip.samples());
    CHECK(apply_channel(clip, ChannelSpec::random_resample(1.0, 0.9, 0.95), 3).size() > clip.size());
    int changed = 0;
    for (std::uint64_t salt = 0; salt < 200; ++salt)
        changed += apply_channel(clip, ChannelSpec::random_resample(0.5, 0.8, 0.9), salt).size() != clip.size();
    CHECK(changed > 70);
    CHECK(changed < 130);
}

TEST_CASE("mixture interference sits at the requested level")
{
    const auto clip = unit_rms(t::white_noise(1.0, 8));
    const auto mixed = apply_channel(clip, ChannelSpec::mixture(2, 0.0, 1), 5);
    double ss = 0.0;
    for (std::size_t i = 0; i < clip.size(); ++i)
        ss += (mixed[i] - clip[i]) * (mixed[i] - clip[i]);
    CHECK(std::sqrt(ss / static_cast<double>(clip.size())) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("validation")
{
    const auto clip = t::white_noise_samples(100, 1);
    CHECK_THROWS_AS(apply_channel(clip, ChannelSpec::resample_factor(3.0)), Error);
    CHECK_THROWS_AS(apply_channel(clip, ChannelSpec::additive_noise(INFINITY)), Error);
    CHECK_THROWS_AS(apply_channel(clip, ChannelSpec::random_resample(1.5)), Error);
    CHECK_THROWS_AS(apply_channel(clip, ChannelSpec::mixture(0, 0.0)), Error);
    CHECK_THROWS_AS(validate(ChannelSpec::attenuate_echo(-1.0)), Error);
}

TEST_CASE("descriptions")
{
    CHECK(describe(ChannelSpec::composite({ChannelSpec::attenuate_echo(0.5), ChannelSpec::additive_noise(20)})) ==
          "composite(attenuate(0.5),noise(20dB))");
}
