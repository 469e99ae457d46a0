#include "echomark/embed.hpp"

#include "echomark/dsp.hpp"
#include "echomark/error.hpp"

#include <string>

namespace echomark {

void validate(const EchoKey& key)
{
    if (key.delta < 1)
        throw Error("echo lag must be at least one sample");
    if (!(key.alpha >= 0.0 && key.alpha < 1.0))
        throw Error("echo amplitude must lie in [0, 1)");
}

void validate(const SpreadKey& key)
{
    if (key.pattern.size() < 2)
        throw Error("spread pattern needs at least two bits");
    if (!is_binary(key.pattern))
        throw Error("spread pattern must contain only 0/1");
    if (key.delta < 1)
        throw Error("spread lag must be at least one sample");
    if (!(key.alpha >= 0.0 && key.alpha < 1.0))
        throw Error("spread amplitude must lie in [0, 1)");
}

std::vector<double> build_echo_kernel(const EchoKey& key)
{
    validate(key);
    std::vector<double> h(static_cast<std::size_t>(key.delta) + 1, 0.0);
    h.front() = 1.0;
    h.back() = key.alpha;
    return h;
}

std::vector<double> build_echo_kernel(const SpreadKey& key, SpreadKernelForm form)
{
    validate(key);
    const auto delta = static_cast<std::size_t>(key.delta);
    std::vector<double> h(delta + key.pattern.size(), 0.0);
    if (form == SpreadKernelForm::classical)
        h[0] = 1.0;
    for (std::size_t k = 0; k < key.pattern.size(); ++k)
        h[delta + k] += key.alpha * (key.pattern[k] ? 1.0 : -1.0);
    return h;
}

AudioClip embed_single_echo(const AudioClip& clip, const EchoKey& key)
{
    validate(key);
    const auto delta = static_cast<std::size_t>(key.delta);
    if (delta >= clip.size())
        throw Error("clip too short: echo lag " + std::to_string(key.delta) +
                    " needs more than " + std::to_string(clip.size()) + " samples");
    const auto& x = clip.samples();
    std::vector<double> out(x);
    for (std::size_t n = delta; n < x.size(); ++n)
        out[n] += key.alpha * x[n - delta];
    return AudioClip(std::move(out), clip.sample_rate());
}

AudioClip embed_spread(const AudioClip& clip, const SpreadKey& key, SpreadKernelForm form)
{
    const auto h = build_echo_kernel(key, form);
    if (h.size() >= clip.size())
        throw Error("clip too short: spread kernel of " + std::to_string(h.size()) +
                    " samples needs a longer clip than " + std::to_string(clip.size()));
    auto full = convolve(clip.view(), h);
    full.resize(clip.size());
    return AudioClip(std::move(full), clip.sample_rate());
}

AudioClip embed(const AudioClip& clip, const WatermarkKey& key)
{
    return std::visit(
        [&](const auto& k) -> AudioClip {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, EchoKey>)
                return embed_single_echo(clip, k);
            else
                return embed_spread(clip, k);
        },
        key);
}

WatermarkKey scale_alpha(const WatermarkKey& key, double ratio)
{
    return std::visit(
        [&](auto k) -> WatermarkKey {
            k.alpha *= ratio;
            return k;
        },
        key);
}

int key_delta(const WatermarkKey& key) noexcept
{
    return std::visit([](const auto& k) { return k.delta; }, key);
}

} // namespace echomark
