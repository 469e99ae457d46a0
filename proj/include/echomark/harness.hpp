#pragma once

// Desk-scale evaluation protocol: random-segment duration sweeps, bit-flip
// ROC curves and per-group tagging experiments, each run through a
// simulated degradation channel.

#include "echomark/audio.hpp"
#include "echomark/channel.hpp"
#include "echomark/detect.hpp"
#include "echomark/embed.hpp"
#include "echomark/roc.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace echomark {

struct NamedClip {
    std::string id;
    AudioClip clip;
};

/// One experiment cell: a segment, embedded or clean, after the channel.
struct SweepRow {
    std::size_t cell = 0;
    std::string clip_id;
    double duration = 0.0;
    std::size_t segment = 0;
    std::size_t offset = 0;
    bool embedded = false;
    std::string key_id;
    std::string channel;
    int key_lag = 0;
    std::size_t argmax_lag = 0;
    double z_at_key = 0.0;
    bool degenerate = false;
};

struct SweepConfig {
    std::vector<double> durations{5.0, 10.0, 30.0, 60.0};
    std::size_t segments_per_clip = 1;
    ChannelSpec channel;
    std::uint64_t seed = 0;
    bool include_clean = true;
    LagBand band = kSingleEchoBand;
    bool enhanced = false;
    std::string key_id = "key";
    unsigned jobs = 1;
};

/// Rows are ordered by (clip, duration, segment, embedded-before-clean)
/// independent of `jobs`.
std::vector<SweepRow> run_duration_sweep(std::span<const NamedClip> corpus, const WatermarkKey& key,
                                         const SweepConfig& config);

struct BitflipConfig {
    double duration = 30.0;
    std::size_t segments_per_clip = 1;
    std::vector<std::size_t> flips{0, 128, 256, 384, 512};
    ChannelSpec channel;
    std::uint64_t seed = 0;
    bool enhanced = false;
    unsigned jobs = 1;
};

struct BitflipPoint {
    std::size_t flips = 0;
    std::vector<double> false_scores;
    RocResult roc;
};

struct BitflipResult {
    std::vector<double> true_scores;    // z with the embedded pattern
    std::vector<double> clean_scores;   // same pattern on unembedded segments
    std::vector<BitflipPoint> curve;    // true vs perturbed pattern, per flip count
    RocResult vs_clean;
};

BitflipResult run_bitflip_curve(std::span<const NamedClip> corpus, const SpreadKey& key,
                                const BitflipConfig& config);

struct TaggedClip {
    std::string clip_id;
    std::string group;
    EchoKey key;
};

struct HoldoutClip {
    NamedClip clip;
    std::string group;
};

struct TaggingConfig {
    ChannelSpec channel;
    LagBand band = kSingleEchoBand;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
};

struct TaggingRow {
    std::string clip_id;
    std::string group;
    int own_delta = 0;
    int tested_delta = 0;
    double z = 0.0;
    std::size_t argmax_lag = 0;
};

/// Each group's key comes from its manifest entries (one key per group).
/// A held-out clip stands in for model output by carrying its group's echo
/// through the channel; it is then scored at every lag in the key set.
std::vector<TaggingRow> run_tagging_experiment(std::span<const TaggedClip> manifest,
                                               std::span<const HoldoutClip> holdout,
                                               const TaggingConfig& config);

double median(std::vector<double> values);

/// Embedded-vs-clean ROC over rows with the given duration (all when <= 0).
RocResult embedded_vs_clean(std::span<const SweepRow> rows, double duration = 0.0);

std::vector<double> z_scores(std::span<const SweepRow> rows, bool embedded, double duration = 0.0);

} // namespace echomark
