#include "echomark/channel.hpp"

#include "echomark/error.hpp"
#include "echomark/random.hpp"

#include <cmath>
#include <sstream>

namespace echomark {

ChannelSpec ChannelSpec::identity()
{
    return {};
}

ChannelSpec ChannelSpec::attenuate_echo(double ratio)
{
    ChannelSpec s;
    s.kind = ChannelKind::attenuate_echo;
    s.ratio = ratio;
    return s;
}

ChannelSpec ChannelSpec::additive_noise(double snr_db, std::uint64_t seed)
{
    ChannelSpec s;
    s.kind = ChannelKind::additive_noise;
    s.snr_db = snr_db;
    s.seed = seed;
    return s;
}

ChannelSpec ChannelSpec::resample_factor(double factor)
{
    ChannelSpec s;
    s.kind = ChannelKind::resample_factor;
    s.factor = factor;
    return s;
}

ChannelSpec ChannelSpec::random_resample(double probability, double low, double high,
                                         std::uint64_t seed)
{
    ChannelSpec s;
    s.kind = ChannelKind::random_resample;
    s.probability = probability;
    s.low = low;
    s.high = high;
    s.seed = seed;
    return s;
}

ChannelSpec ChannelSpec::mixture(int interferers, double snr_db, std::uint64_t seed)
{
    ChannelSpec s;
    s.kind = ChannelKind::mixture;
    s.interferers = interferers;
    s.snr_db = snr_db;
    s.seed = seed;
    return s;
}

ChannelSpec ChannelSpec::composite(std::vector<ChannelSpec> children)
{
    ChannelSpec s;
    s.kind = ChannelKind::composite;
    s.children = std::move(children);
    return s;
}

namespace {

void check_factor(double f)
{
    if (!(f >= 0.5 && f <= 2.0))
        throw Error("resample factor must lie in [0.5, 2]");
}

std::vector<double> noise_at_snr(const AudioClip& clip, double snr_db, Rng& rng)
{
    auto noise = rng.normal_vector(clip.size());
    double energy = 0.0;
    for (double v : noise)
        energy += v * v;
    const double noise_rms = std::sqrt(energy / static_cast<double>(noise.size()));
    const double target = clip.rms() / std::pow(10.0, snr_db / 20.0);
    const double gain = noise_rms > 0.0 ? target / noise_rms : 0.0;
    for (auto& v : noise)
        v *= gain;
    return noise;
}

} // namespace

void validate(const ChannelSpec& spec)
{
    switch (spec.kind) {
    case ChannelKind::identity:
        break;
    case ChannelKind::attenuate_echo:
        if (!(spec.ratio >= 0.0) || !std::isfinite(spec.ratio))
            throw Error("echo attenuation ratio must be finite and non-negative");
        break;
    case ChannelKind::additive_noise:
        if (!std::isfinite(spec.snr_db))
            throw Error("SNR must be finite");
        break;
    case ChannelKind::resample_factor:
        check_factor(spec.factor);
        break;
    case ChannelKind::random_resample:
        if (!(spec.probability >= 0.0 && spec.probability <= 1.0))
            throw Error("resample probability must lie in [0, 1]");
        check_factor(spec.low);
        check_factor(spec.high);
        if (spec.low > spec.high)
            throw Error("resample factor interval is empty");
        break;
    case ChannelKind::mixture:
        if (spec.interferers < 1)
            throw Error("mixture needs at least one interferer");
        if (!std::isfinite(spec.snr_db))
            throw Error("SNR must be finite");
        break;
    case ChannelKind::composite:
        for (const auto& child : spec.children)
            validate(child);
        break;
    }
}

double echo_scale(const ChannelSpec& spec)
{
    if (spec.kind == ChannelKind::attenuate_echo)
        return spec.ratio;
    double scale = 1.0;
    if (spec.kind == ChannelKind::composite)
        for (const auto& child : spec.children)
            scale *= echo_scale(child);
    return scale;
}

AudioClip pitch_shift_by_resampling(const AudioClip& clip, double factor)
{
    check_factor(factor);
    if (factor == 1.0)
        return clip;
    const auto out_len =
        static_cast<std::size_t>(std::llround(static_cast<double>(clip.size()) / factor));
    return AudioClip(resample_ratio(clip.view(), 1.0 / factor, std::max<std::size_t>(out_len, 1)),
                     clip.sample_rate());
}

AudioClip apply_channel(const AudioClip& clip, const ChannelSpec& spec, std::uint64_t salt)
{
    validate(spec);
    switch (spec.kind) {
    case ChannelKind::identity:
    case ChannelKind::attenuate_echo:
        return clip;
    case ChannelKind::additive_noise: {
        Rng rng(derive_seed({spec.seed, salt, 1}));
        auto noise = noise_at_snr(clip, spec.snr_db, rng);
        for (std::size_t n = 0; n < noise.size(); ++n)
            noise[n] += clip[n];
        return AudioClip(std::move(noise), clip.sample_rate());
    }
    case ChannelKind::resample_factor:
        return pitch_shift_by_resampling(clip, spec.factor);
    case ChannelKind::random_resample: {
        Rng rng(derive_seed({spec.seed, salt, 2}));
        const bool shift = rng.uniform() < spec.probability;
        const double factor = rng.uniform(spec.low, spec.high);
        return shift ? pitch_shift_by_resampling(clip, factor) : clip;
    }
    case ChannelKind::mixture: {
        Rng rng(derive_seed({spec.seed, salt, 3}));
        std::vector<double> interference(clip.size(), 0.0);
        const double weight = 1.0 / spec.interferers;
        for (int i = 0; i < spec.interferers; ++i) {
            const auto noise = rng.normal_vector(clip.size());
            for (std::size_t n = 0; n < noise.size(); ++n)
                interference[n] += weight * noise[n];
        }
        const AudioClip interferer(std::move(interference), clip.sample_rate());
        const double target = clip.rms() / std::pow(10.0, spec.snr_db / 20.0);
        const double gain = interferer.rms() > 0.0 ? target / interferer.rms() : 0.0;
        const AudioClip parts[] = {clip, interferer};
        const double weights[] = {1.0, gain};
        return mix(parts, weights);
    }
    case ChannelKind::composite: {
        AudioClip out = clip;
        // Stages share the cell salt; give repeated stages distinct seeds.
        for (const auto& child : spec.children)
            out = apply_channel(out, child, salt);
        return out;
    }
    }
    return clip;
}

std::string describe(const ChannelSpec& spec)
{
    std::ostringstream os;
    switch (spec.kind) {
    case ChannelKind::identity:
        os << "identity";
        break;
    case ChannelKind::attenuate_echo:
        os << "attenuate(" << spec.ratio << ")";
        break;
    case ChannelKind::additive_noise:
        os << "noise(" << spec.snr_db << "dB)";
        break;
    case ChannelKind::resample_factor:
        os << "resample(" << spec.factor << ")";
        break;
    case ChannelKind::random_resample:
        os << "random_resample(p=" << spec.probability << "," << spec.low << ".." << spec.high << ")";
        break;
    case ChannelKind::mixture:
        os << "mixture(" << spec.interferers << "x," << spec.snr_db << "dB)";
        break;
    case ChannelKind::composite:
        os << "composite(";
        for (std::size_t i = 0; i < spec.children.size(); ++i)
            os << (i ? "," : "") << describe(spec.children[i]);
        os << ")";
        break;
    }
    return os.str();
}

} // namespace echomark
