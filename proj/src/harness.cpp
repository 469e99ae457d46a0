#include "echomark/harness.hpp"

#include "echomark/error.hpp"
#include "echomark/parallel.hpp"
#include "echomark/patterns.hpp"
#include "echomark/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace echomark {

namespace {

std::size_t duration_samples(const AudioClip& clip, double seconds)
{
    return static_cast<std::size_t>(std::llround(seconds * clip.sample_rate()));
}

std::size_t segment_offset(const AudioClip& clip, std::size_t length, std::uint64_t seed)
{
    const std::size_t room = clip.size() - length;
    return room == 0 ? 0 : static_cast<std::size_t>(Rng(seed).below(room + 1));
}

void check_corpus(std::span<const NamedClip> corpus, double seconds)
{
    if (!(seconds > 0.0))
        throw Error("segment duration must be positive");
    for (const auto& c : corpus)
        if (c.clip.size() < duration_samples(c.clip, seconds))
            throw Error("corpus clip '" + c.id + "' is shorter than " + std::to_string(seconds) +
                        " s");
}

} // namespace

std::vector<SweepRow> run_duration_sweep(std::span<const NamedClip> corpus, const WatermarkKey& key,
                                         const SweepConfig& config)
{
    validate(config.channel);
    for (double d : config.durations)
        check_corpus(corpus, d);
    const WatermarkKey scaled = scale_alpha(key, echo_scale(config.channel));
    const std::string channel_name = describe(config.channel);
    const std::size_t conditions = config.include_clean ? 2 : 1;

    struct Segment {
        std::size_t clip, duration, index;
    };
    std::vector<Segment> segments;
    for (std::size_t c = 0; c < corpus.size(); ++c)
        for (std::size_t d = 0; d < config.durations.size(); ++d)
            for (std::size_t s = 0; s < config.segments_per_clip; ++s)
                segments.push_back({c, d, s});

    std::vector<SweepRow> rows(segments.size() * conditions);
    parallel_for(segments.size(), config.jobs, [&](std::size_t i) {
        const Segment& seg = segments[i];
        const NamedClip& source = corpus[seg.clip];
        const double seconds = config.durations[seg.duration];
        const std::size_t length = duration_samples(source.clip, seconds);
        const std::uint64_t cell_seed = derive_seed({config.seed, seg.clip, seg.duration, seg.index});
        const std::size_t offset = segment_offset(source.clip, length, cell_seed);
        const AudioClip segment = source.clip.slice(offset, length);

        for (std::size_t cond = 0; cond < conditions; ++cond) {
            const bool embedded = cond == 0;
            const AudioClip carrier = embedded ? embed(segment, scaled) : segment;
            const AudioClip observed = apply_channel(carrier, config.channel, cell_seed);
            const DetectionReport report = detect(observed, key, config.band, config.enhanced);

            SweepRow& row = rows[i * conditions + cond];
            row.cell = i * conditions + cond;
            row.clip_id = source.id;
            row.duration = seconds;
            row.segment = seg.index;
            row.offset = offset;
            row.embedded = embedded;
            row.key_id = config.key_id;
            row.channel = channel_name;
            row.key_lag = key_delta(key);
            row.argmax_lag = report.argmax_lag;
            row.z_at_key = report.z_at_key.value_or(0.0);
            row.degenerate = report.degenerate || report.key_degenerate;
        }
    });
    return rows;
}

BitflipResult run_bitflip_curve(std::span<const NamedClip> corpus, const SpreadKey& key,
                                const BitflipConfig& config)
{
    validate(key);
    validate(config.channel);
    check_corpus(corpus, config.duration);
    for (std::size_t k : config.flips)
        if (k > key.length())
            throw Error("flip count exceeds the pattern length");

    const WatermarkKey scaled = scale_alpha(key, echo_scale(config.channel));
    SpreadDetectOptions options;
    options.enhanced = config.enhanced;

    const std::size_t cells = corpus.size() * config.segments_per_clip;
    std::vector<double> truth(cells), clean(cells);
    std::vector<std::vector<double>> perturbed(config.flips.size(), std::vector<double>(cells));

    parallel_for(cells, config.jobs, [&](std::size_t i) {
        const std::size_t clip_index = i / config.segments_per_clip;
        const std::size_t seg_index = i % config.segments_per_clip;
        const NamedClip& source = corpus[clip_index];
        const std::size_t length = duration_samples(source.clip, config.duration);
        const std::uint64_t cell_seed = derive_seed({config.seed, clip_index, seg_index});
        const AudioClip segment =
            source.clip.slice(segment_offset(source.clip, length, cell_seed), length);

        const AudioClip marked = apply_channel(embed(segment, scaled), config.channel, cell_seed);
        const AudioClip plain = apply_channel(segment, config.channel, cell_seed);
        const Cepstrum marked_c = real_cepstrum(marked);
        const Cepstrum plain_c = real_cepstrum(plain);

        truth[i] = *detect_spread(marked_c, key, options).z_at_key;
        clean[i] = *detect_spread(plain_c, key, options).z_at_key;
        for (std::size_t f = 0; f < config.flips.size(); ++f) {
            SpreadKey wrong = key;
            wrong.pattern = flip_bits(key.pattern, config.flips[f],
                                      derive_seed({config.seed, clip_index, seg_index, config.flips[f], 7}));
            perturbed[f][i] = *detect_spread(marked_c, wrong, options).z_at_key;
        }
    });

    BitflipResult result;
    result.true_scores = std::move(truth);
    result.clean_scores = std::move(clean);
    for (std::size_t f = 0; f < config.flips.size(); ++f) {
        BitflipPoint point;
        point.flips = config.flips[f];
        point.false_scores = std::move(perturbed[f]);
        point.roc = roc(result.true_scores, point.false_scores);
        result.curve.push_back(std::move(point));
    }
    result.vs_clean = roc(result.true_scores, result.clean_scores);
    return result;
}

std::vector<TaggingRow> run_tagging_experiment(std::span<const TaggedClip> manifest,
                                               std::span<const HoldoutClip> holdout,
                                               const TaggingConfig& config)
{
    validate(config.channel);
    std::map<std::string, EchoKey> group_keys;
    for (const auto& entry : manifest) {
        validate(entry.key);
        auto [it, inserted] = group_keys.emplace(entry.group, entry.key);
        if (!inserted && (it->second.delta != entry.key.delta || it->second.alpha != entry.key.alpha))
            throw Error("group '" + entry.group + "' is tagged with more than one key");
    }
    std::set<int> lags;
    for (const auto& [group, key] : group_keys) {
        if (static_cast<std::size_t>(key.delta) < config.band.first ||
            static_cast<std::size_t>(key.delta) > config.band.last)
            throw Error("tagging lag " + std::to_string(key.delta) + " is outside the scan band");
        lags.insert(key.delta);
    }
    for (const auto& h : holdout)
        if (!group_keys.contains(h.group))
            throw Error("held-out clip '" + h.clip.id + "' names unknown group '" + h.group + "'");

    const double scale = echo_scale(config.channel);
    std::vector<std::vector<TaggingRow>> per_clip(holdout.size());
    parallel_for(holdout.size(), config.jobs, [&](std::size_t i) {
        const HoldoutClip& h = holdout[i];
        EchoKey key = group_keys.at(h.group);
        const int own = key.delta;
        key.alpha *= scale;
        const AudioClip observed =
            apply_channel(embed_single_echo(h.clip.clip, key), config.channel,
                          derive_seed({config.seed, i}));
        const DetectionReport report = detect_single_echo(observed, config.band);
        for (int lag : lags)
            per_clip[i].push_back({h.clip.id, h.group, own, lag,
                                   report.profile.at(static_cast<std::size_t>(lag)),
                                   report.argmax_lag});
    });

    std::vector<TaggingRow> rows;
    for (auto& block : per_clip)
        rows.insert(rows.end(), block.begin(), block.end());
    return rows;
}

double median(std::vector<double> values)
{
    if (values.empty())
        throw Error("median of an empty set");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1)
        return upper;
    const double lower =
        *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

std::vector<double> z_scores(std::span<const SweepRow> rows, bool embedded, double duration)
{
    std::vector<double> out;
    for (const auto& r : rows)
        if (r.embedded == embedded && (duration <= 0.0 || r.duration == duration))
            out.push_back(r.z_at_key);
    return out;
}

RocResult embedded_vs_clean(std::span<const SweepRow> rows, double duration)
{
    return roc(z_scores(rows, true, duration), z_scores(rows, false, duration));
}

} // namespace echomark
