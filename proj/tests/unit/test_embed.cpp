#include "doctest.h"

#include "echomark/dsp.hpp"
#include "echomark/embed.hpp"
#include "echomark/error.hpp"
#include "echomark/patterns.hpp"
#include "test_support.hpp"

#include <algorithm>

using namespace echomark;
namespace t = echomark::testing;

namespace {

AudioClip impulse(std::size_t n)
{
    std::vector<double> v(n, 0.0);
    v[0] = 1.0;
    return AudioClip(std::move(v), t::kRate);
}

} // namespace

TEST_CASE("kernels")
{
    CHECK(build_echo_kernel(EchoKey{2, 0.4}) == std::vector<double>{1.0, 0.0, 0.4});
    CHECK(build_echo_kernel(SpreadKey{{1, 0}, 0.01, 1}) == std::vector<double>{1.0, 0.01, -0.01});
    CHECK(build_echo_kernel(SpreadKey{{1, 0}, 0.01, 1}, SpreadKernelForm::literal) ==
          std::vector<double>{0.0, 0.01, -0.01});
}

TEST_CASE("single echo impulse response")
{
    const auto out = embed_single_echo(impulse(200), EchoKey{50, 0.4});
    REQUIRE(out.size() == 200);
    for (std::size_t i = 0; i < 200; ++i)
        CHECK(out[i] == (i == 0 ? 1.0 : i == 50 ? 0.4 : 0.0));
}

TEST_CASE("zero amplitude is the identity")
{
    const auto clip = t::white_noise_samples(3000, 2);
    CHECK(embed_single_echo(clip, EchoKey{75, 0.0}).samples() == clip.samples());
    const auto spread = embed_spread(clip, SpreadKey{generate_pattern(1024, 1), 0.0, 75});
    for (std::size_t i = 0; i < clip.size(); ++i)
        CHECK(std::abs(spread[i] - clip[i]) < 1e-12);
}

TEST_CASE("echo uses zero history and keeps the clip length")
{
    const auto clip = t::white_noise_samples(500, 3);
    const auto out = embed_single_echo(clip, EchoKey{10, 0.5});
    REQUIRE(out.size() == clip.size());
    for (std::size_t i = 0; i < 10; ++i)
        CHECK(out[i] == clip[i]);
    for (std::size_t i = 10; i < clip.size(); ++i)
        CHECK(out[i] == doctest::Approx(clip[i] + 0.5 * clip[i - 10]));
}

TEST_CASE("single echo shows up at alpha / 2 in the cepstrum")
{
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto out = embed_single_echo(t::white_noise(10.0, seed), EchoKey{75, 0.4});
        const auto c = real_cepstrum(out);
        const auto first = c.values.begin() + 25;
        const auto top = std::max_element(first, c.values.begin() + 126);
        CHECK(top - c.values.begin() == 75);
        CHECK(std::abs(c[75] - 0.2) < 0.05);
    }
}

TEST_CASE("spread impulse response")
{
    const Bits p = generate_pattern(64, 7);
    const auto out = embed_spread(impulse(400), SpreadKey{p, 0.01, 75});
    CHECK(out[0] == doctest::Approx(1.0));
    for (std::size_t i = 1; i < 400; ++i) {
        const double expected = (i >= 75 && i < 75 + 64) ? (p[i - 75] ? 0.01 : -0.01) : 0.0;
        CHECK(std::abs(out[i] - expected) < 1e-12);
    }
}

TEST_CASE("convolving an impulse with any kernel yields the kernel")
{
    const SpreadKey spread{generate_pattern(32, 3), 0.02, 5};
    const EchoKey single{40, 0.3};
    for (const WatermarkKey& key : {WatermarkKey{spread}, WatermarkKey{single}}) {
        const auto kernel = std::visit([](const auto& k) { return build_echo_kernel(k); }, key);
        const auto out = convolve(impulse(kernel.size()).view(), kernel);
        for (std::size_t i = 0; i < kernel.size(); ++i)
            CHECK(std::abs(out[i] - kernel[i]) < 1e-12);
    }
}

TEST_CASE("preconditions")
{
    CHECK_THROWS_WITH_AS(embed_single_echo(t::white_noise_samples(50, 1), EchoKey{75, 0.4}),
                         doctest::Contains("clip too short"), Error);
    CHECK_THROWS_AS(embed_spread(t::white_noise_samples(1000, 1), SpreadKey{generate_pattern(1024, 1)}),
                    Error);
    CHECK_THROWS_AS(validate(EchoKey{0, 0.4}), Error);
    CHECK_THROWS_AS(validate(EchoKey{75, 1.0}), Error);
    CHECK_THROWS_AS(validate(EchoKey{75, -0.1}), Error);
    CHECK_THROWS_AS(validate(SpreadKey{{1, 2, 0}}), Error);
    CHECK_THROWS_AS(validate(SpreadKey{{1}}), Error);
}

TEST_CASE("key helpers")
{
    const WatermarkKey single = EchoKey{50, 0.4};
    const WatermarkKey spread = SpreadKey{generate_pattern(16, 1), 0.01, 60};
    CHECK(key_delta(single) == 50);
    CHECK(key_delta(spread) == 60);
    CHECK(std::get<EchoKey>(scale_alpha(single, 0.5)).alpha == doctest::Approx(0.2));
    CHECK(std::get<SpreadKey>(scale_alpha(spread, 0.1)).alpha == doctest::Approx(0.001));
    const auto clip = t::white_noise_samples(2000, 4);
    CHECK(embed(clip, single).samples() == embed_single_echo(clip, std::get<EchoKey>(single)).samples());
}
