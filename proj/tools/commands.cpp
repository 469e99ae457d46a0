#include "commands.hpp"

#include "echomark/embed.hpp"
#include "echomark/error.hpp"
#include "echomark/formats.hpp"
#include "echomark/harness.hpp"
#include "echomark/parallel.hpp"
#include "echomark/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>

#include <fnmatch.h>

namespace echomark::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

SampleFormat parse_output_format(const std::string& name, SampleFormat source)
{
    if (name == "float32")
        return SampleFormat::float32;
    if (name == "pcm16")
        return SampleFormat::pcm16;
    if (name == "source")
        return source == SampleFormat::pcm16 ? SampleFormat::pcm16 : SampleFormat::float32;
    throw Error("unknown output format \"" + name + "\" (float32, pcm16 or source)");
}

NamedKey resolve_key(const KeyRef& ref)
{
    if (ref.delta) {
        EchoKey key{*ref.delta, ref.alpha};
        validate(key);
        return {"inline", key};
    }
    if (ref.key_file.empty())
        throw Error("no key given (use --key-file or --delta)");
    if (!fs::exists(ref.key_file))
        throw Error("key file not found: " + ref.key_file.string());
    return find_key(read_key_file(ref.key_file), ref.key_id);
}

fs::path write_temporary(const fs::path& path, const std::string& text)
{
    const fs::path tmp = path.string() + ".partial";
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f)
        throw Error("cannot write " + path.string());
    f << text;
    f.close();
    if (!f) {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw Error("write failed: " + path.string());
    }
    return tmp;
}

// Writes through a sibling temporary so a failed run leaves no partial file.
void write_text_atomically(const fs::path& path, const std::string& text)
{
    fs::rename(write_temporary(path, text), path);
}

fs::path resolve_relative(const fs::path& base, const fs::path& p)
{
    return p.is_absolute() ? p : base / p;
}

std::string replace_all(std::string s, const std::string& from, const std::string& to)
{
    for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size())
        s.replace(pos, from.size(), to);
    return s;
}

} // namespace

AudioClip load_canonical(const fs::path& path, int sample_rate)
{
    AudioClip clip = load_audio(path);
    return clip.sample_rate() == sample_rate ? clip : resample(clip, sample_rate);
}

LagBand parse_band(const std::string& text)
{
    const auto sep = text.find_first_of(":,");
    if (sep == std::string::npos)
        throw Error("band must look like FIRST:LAST");
    try {
        const auto first = std::stoul(text.substr(0, sep));
        const auto last = std::stoul(text.substr(sep + 1));
        if (first >= last)
            throw Error("band must satisfy FIRST < LAST");
        return {first, last};
    } catch (const std::logic_error&) {
        throw Error("band must look like FIRST:LAST");
    }
}

std::vector<fs::path> expand_glob(const fs::path& pattern)
{
    const std::string name = pattern.filename().string();
    if (name.find_first_of("*?[") == std::string::npos)
        return {pattern};
    const fs::path dir = pattern.has_parent_path() ? pattern.parent_path() : fs::path(".");
    std::vector<fs::path> out;
    if (!fs::is_directory(dir))
        return out;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() &&
            fnmatch(name.c_str(), entry.path().filename().c_str(), 0) == 0)
            out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    return out;
}

int cmd_gen_patterns(const GenPatternsOptions& opts, const GlobalOptions& global, std::ostream& out,
                     std::ostream& err)
{
    try {
        if (opts.count < 2)
            throw Error("--count must be at least 2 to spread pairwise distances");
        if (opts.out.empty())
            throw Error("--out is required");
        SpreadCriteria criteria;
        criteria.max_gap = opts.max_gap;
        criteria.min_distance = opts.min_distance;
        criteria.max_attempts = opts.max_attempts;
        const PatternSet set = generate_pattern_set(opts.count, opts.length, global.seed, criteria);
        if (!set.criteria_met) {
            std::error_code ec;
            fs::remove(opts.out, ec);
            err << "error: no pattern set met the distance criteria after " << set.attempts
                << " attempts\n";
            return kExitFailure;
        }
        write_text_atomically(opts.out, pattern_set_to_json(set).dump(2) + "\n");
        if (!opts.key_out.empty()) {
            std::vector<NamedKey> keys;
            for (std::size_t i = 0; i < set.patterns.size(); ++i)
                keys.push_back({"pattern" + std::to_string(i),
                                SpreadKey{set.patterns[i], opts.alpha, opts.delta}});
            write_text_atomically(opts.key_out, key_file_to_json(keys).dump(2) + "\n");
        }
        out << "wrote " << set.patterns.size() << " patterns of length " << set.length << " to "
            << opts.out.string() << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

int cmd_embed(const EmbedOptions& opts, const GlobalOptions& global, std::ostream& out,
              std::ostream& err)
{
    try {
        if (fs::exists(opts.out) && fs::exists(opts.in) && fs::equivalent(opts.in, opts.out))
            throw Error("refusing to overwrite the input file");
        const NamedKey key = resolve_key(opts.key);
        const LoadedAudio loaded = load_audio_with_info(opts.in);
        AudioClip clip = loaded.clip;
        if (opts.resample && clip.sample_rate() != global.sample_rate)
            clip = resample(clip, global.sample_rate);
        const AudioClip marked = embed(clip, key.key);
        const SampleFormat format = parse_output_format(opts.format, loaded.info.format);
        const std::size_t clipped = save_audio(marked, opts.out, format);
        if (clipped > 0)
            err << "warning: " << clipped << " samples clipped while writing " << opts.out.string()
                << "\n";
        out << "embedded key " << key.id << " into " << opts.out.string() << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

namespace {

struct TagJob {
    fs::path input;
    fs::path output;
    std::string key_id;
};

struct TagOutcome {
    bool processed = false;
    bool skipped = false;
    std::string error;
    std::size_t clipped = 0;
};

} // namespace

int cmd_tag_dataset(const fs::path& manifest_path, const GlobalOptions& global, std::ostream& out,
                    std::ostream& err)
{
    std::vector<TagJob> jobs;
    std::vector<NamedKey> keys;
    bool overwrite = false;
    std::string format_name = "float32";
    fs::path output_dir;
    try {
        const json m = read_json_file(manifest_path);
        if (m.value("format", "") != "echomark-manifest" || m.value("version", 0) != kSchemaVersion)
            throw Error("expected a document with format \"echomark-manifest\" version 1");
        const fs::path base = manifest_path.parent_path();
        const fs::path input_dir = resolve_relative(base, m.value("input_dir", "."));
        output_dir = resolve_relative(base, m.value("output_dir", "."));
        overwrite = m.value("overwrite", false);
        format_name = m.value("output_format", "float32");
        parse_output_format(format_name, SampleFormat::float32);

        const auto entries = m.value("entries", json::array());
        if (!entries.empty())
            keys = read_key_file(resolve_relative(base, m.at("key_file").get<std::string>()));

        std::map<fs::path, std::size_t> outputs;
        std::set<fs::path> inputs;
        for (std::size_t e = 0; e < entries.size(); ++e) {
            const auto& entry = entries[e];
            const std::string key_id = entry.at("key").get<std::string>();
            find_key(keys, key_id);
            const std::string rule = entry.value("output", "{stem}_{key}.wav");
            const auto files = expand_glob(input_dir / entry.at("input").get<std::string>());
            if (files.empty())
                err << "warning: manifest entry " << e << " matched no files\n";
            for (std::size_t i = 0; i < files.size(); ++i) {
                std::string name = replace_all(rule, "{stem}", files[i].stem().string());
                name = replace_all(name, "{name}", files[i].filename().string());
                name = replace_all(name, "{key}", key_id);
                name = replace_all(name, "{index}", std::to_string(i));
                const fs::path target = (output_dir / name).lexically_normal();
                if (auto [it, fresh] = outputs.emplace(target, jobs.size()); !fresh)
                    throw Error("manifest conflict: " + target.string() +
                                " is produced by more than one input");
                inputs.insert(fs::weakly_canonical(files[i]));
                jobs.push_back({files[i], target, key_id});
            }
        }
        for (const auto& job : jobs)
            if (inputs.contains(fs::weakly_canonical(job.output)))
                throw Error("manifest conflict: output " + job.output.string() +
                            " would overwrite an input file");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }

    std::vector<TagOutcome> outcomes(jobs.size());
    parallel_for(jobs.size(), global.jobs, [&](std::size_t i) {
        const TagJob& job = jobs[i];
        TagOutcome& result = outcomes[i];
        try {
            if (!overwrite && fs::exists(job.output)) {
                result.skipped = true;
                return;
            }
            const LoadedAudio loaded = load_audio_with_info(job.input);
            AudioClip clip = loaded.clip;
            if (clip.sample_rate() != global.sample_rate)
                clip = resample(clip, global.sample_rate);
            const AudioClip marked = embed(clip, find_key(keys, job.key_id).key);
            fs::create_directories(job.output.parent_path());
            result.clipped =
                save_audio(marked, job.output, parse_output_format(format_name, loaded.info.format));
            result.processed = true;
        } catch (const std::exception& e) {
            result.error = e.what();
        }
    });

    json summary;
    summary["format"] = "echomark-tag-summary";
    summary["version"] = kSchemaVersion;
    std::size_t processed = 0, skipped = 0, failed = 0, clipped = 0;
    json lock;
    lock["format"] = "echomark-lock";
    lock["version"] = kSchemaVersion;
    lock["entries"] = json::array();
    summary["failures"] = json::array();
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const auto& r = outcomes[i];
        processed += r.processed;
        skipped += r.skipped;
        clipped += r.clipped;
        if (!r.error.empty()) {
            ++failed;
            summary["failures"].push_back({{"input", jobs[i].input.string()}, {"error", r.error}});
            err << "error: " << jobs[i].input.string() << ": " << r.error << "\n";
        }
        if (r.processed) {
            json entry = key_to_json(find_key(keys, jobs[i].key_id));
            entry["key_id"] = entry["id"];
            entry.erase("id");
            entry["input"] = jobs[i].input.string();
            entry["output"] = jobs[i].output.string();
            entry["clipped_samples"] = r.clipped;
            lock["entries"].push_back(entry);
        }
    }
    summary["processed"] = processed;
    summary["skipped"] = skipped;
    summary["failed"] = failed;
    summary["clipped_samples"] = clipped;
    if (processed > 0) {
        try {
            fs::create_directories(output_dir);
            write_text_atomically(output_dir / "echomark.lock.json", lock.dump(2) + "\n");
            summary["lockfile"] = (output_dir / "echomark.lock.json").string();
        } catch (const std::exception& e) {
            err << "error: " << e.what() << "\n";
            ++failed;
        }
    }
    out << summary.dump(2) << "\n";
    return failed == 0 ? kExitOk : kExitFailure;
}

int cmd_detect(const DetectOptions& opts, const GlobalOptions& global, std::ostream& out,
               std::ostream& err)
{
    try {
        if (opts.format != "json" && opts.format != "csv")
            throw Error("--format must be json or csv");
        std::optional<NamedKey> key;
        if (opts.key.delta || !opts.key.key_file.empty())
            key = resolve_key(opts.key);

        std::string mode = opts.mode;
        if (mode.empty())
            mode = key && std::holds_alternative<SpreadKey>(key->key) ? "spread" : "single";
        if (mode != "single" && mode != "spread")
            throw Error("--mode must be single or spread");

        const AudioClip clip = load_canonical(opts.in, global.sample_rate);
        DetectionReport report;
        if (mode == "single") {
            std::optional<std::size_t> lag;
            if (key) {
                const auto* single = std::get_if<EchoKey>(&key->key);
                if (!single)
                    throw Error("single mode needs a single-echo key");
                lag = static_cast<std::size_t>(single->delta);
            }
            report = detect_single_echo(clip, opts.band.value_or(kSingleEchoBand), lag);
        } else {
            if (!key || !std::holds_alternative<SpreadKey>(key->key))
                throw Error("spread mode needs a spread key");
            SpreadDetectOptions options;
            options.enhanced = opts.enhanced;
            if (opts.band)
                options.band_start = opts.band->first;
            report = detect_spread(clip, std::get<SpreadKey>(key->key), options);
        }
        report.clip_id = opts.in.filename().string();
        report.key_id = key ? key->id : "";

        if (opts.format == "json")
            out << report_to_json(report, opts.profile).dump(2) << "\n";
        else
            out << report_csv_header() << "\n" << report_csv_row(report) << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

int cmd_payload(const PayloadOptions& opts, const GlobalOptions& global, std::ostream& out,
                std::ostream& err)
{
    try {
        validate(opts.config);
        const LoadedAudio loaded = load_audio_with_info(opts.in);
        AudioClip clip = loaded.clip;
        if (clip.sample_rate() != global.sample_rate)
            clip = resample(clip, global.sample_rate);
        if (opts.action == "encode") {
            if (opts.out.empty())
                throw Error("--out is required for encode");
            if (fs::exists(opts.out) && fs::equivalent(opts.in, opts.out))
                throw Error("refusing to overwrite the input file");
            const std::size_t n = opts.n_bits.value_or(opts.bits_hex.size() * 4);
            const Bits bits = bits_from_hex(opts.bits_hex, n);
            const AudioClip marked = encode_payload(clip, bits, opts.config);
            const std::size_t clipped =
                save_audio(marked, opts.out, parse_output_format(opts.format, loaded.info.format));
            if (clipped > 0)
                err << "warning: " << clipped << " samples clipped\n";
            out << "encoded " << n << " bits ("
                << format_number(payload_bits_per_second(clip.sample_rate(), opts.config))
                << " bits/s capacity)\n";
            return kExitOk;
        }
        if (opts.action == "decode") {
            const std::size_t n = opts.n_bits.value_or(payload_capacity(clip.size(), opts.config));
            out << bits_to_hex(decode_payload(clip, opts.config, n)) << "\n";
            return kExitOk;
        }
        throw Error("payload action must be encode or decode");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

} // namespace echomark::cli

namespace echomark::cli {

namespace {

struct EvaluateConfig {
    fs::path corpus;
    fs::path key_file;
    std::string key_id;
    ChannelSpec channel;
    std::vector<double> durations{5.0, 10.0, 30.0, 60.0};
    std::size_t segments = 1;
    std::uint64_t seed = 0;
    LagBand band = kSingleEchoBand;
    bool enhanced = false;
    bool include_clean = true;
    std::vector<std::size_t> flips;
    double flip_duration = 30.0;
    fs::path results_csv;
    fs::path summary_json;
};

// Collects every problem instead of stopping at the first.
EvaluateConfig parse_evaluate_config(const json& j, const fs::path& base, std::uint64_t default_seed,
                                     std::vector<std::string>& problems)
{
    EvaluateConfig c;
    c.seed = default_seed;
    auto guard = [&](const char* field, auto&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            problems.push_back(std::string(field) + ": " + e.what());
        }
    };
    if (!j.is_object()) {
        problems.push_back("config must be a JSON object");
        return c;
    }
    if (j.value("format", "") != "echomark-experiment")
        problems.push_back("format: expected \"echomark-experiment\"");
    if (j.value("version", 0) != kSchemaVersion)
        problems.push_back("version: expected 1");

    static const std::set<std::string> known{
        "format", "version", "corpus", "key_file", "key", "channel", "durations", "segments",
        "seed", "band", "enhanced", "include_clean", "flips", "flip_duration", "results_csv", "summary_json"};
    for (const auto& [name, value] : j.items())
        if (!known.contains(name))
            problems.push_back(name + ": unknown field");

    if (!j.contains("corpus"))
        problems.push_back("corpus: required");
    else
        guard("corpus", [&] { c.corpus = resolve_relative(base, j.at("corpus").get<std::string>()); });
    if (!j.contains("key_file"))
        problems.push_back("key_file: required");
    else
        guard("key_file",
              [&] { c.key_file = resolve_relative(base, j.at("key_file").get<std::string>()); });
    guard("key", [&] { c.key_id = j.value("key", std::string{}); });
    if (j.contains("channel"))
        guard("channel", [&] {
            c.channel = channel_from_json(j.at("channel"));
            validate(c.channel);
        });
    if (j.contains("durations"))
        guard("durations", [&] {
            c.durations = j.at("durations").get<std::vector<double>>();
            if (c.durations.empty())
                throw Error("must not be empty");
            for (double d : c.durations)
                if (!(d > 0.0) || !std::isfinite(d))
                    throw Error("every duration must be positive");
        });
    guard("segments", [&] {
        const long long n = j.value("segments", 1LL);
        if (n < 1)
            throw Error("must be at least 1");
        c.segments = static_cast<std::size_t>(n);
    });
    guard("seed", [&] { c.seed = j.value("seed", default_seed); });
    if (j.contains("band"))
        guard("band", [&] {
            const auto v = j.at("band").get<std::vector<std::size_t>>();
            if (v.size() != 2 || v[0] >= v[1])
                throw Error("expected [first, last] with first < last");
            c.band = {v[0], v[1]};
        });
    guard("enhanced", [&] { c.enhanced = j.value("enhanced", false); });
    guard("include_clean", [&] { c.include_clean = j.value("include_clean", true); });
    if (j.contains("flips"))
        guard("flips", [&] { c.flips = j.at("flips").get<std::vector<std::size_t>>(); });
    guard("flip_duration", [&] {
        c.flip_duration = j.value("flip_duration", 30.0);
        if (!(c.flip_duration > 0.0))
            throw Error("must be positive");
    });
    guard("results_csv", [&] {
        c.results_csv = resolve_relative(base, j.value("results_csv", std::string("results.csv")));
    });
    guard("summary_json", [&] {
        c.summary_json = resolve_relative(base, j.value("summary_json", std::string("summary.json")));
    });
    return c;
}

double quantile(std::vector<double> v, double q)
{
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

bool non_decreasing(const std::vector<double>& v)
{
    return std::is_sorted(v.begin(), v.end());
}

} // namespace

int cmd_evaluate(const fs::path& config_path, const GlobalOptions& global, std::ostream& out,
                 std::ostream& err)
{
    std::vector<std::string> problems;
    EvaluateConfig config;
    try {
        config = parse_evaluate_config(read_json_file(config_path), config_path.parent_path(),
                                       global.seed, problems);
    } catch (const std::exception& e) {
        problems.push_back(e.what());
    }

    NamedKey key;
    std::vector<NamedClip> corpus;
    if (problems.empty()) {
        try {
            key = find_key(read_key_file(config.key_file), config.key_id);
        } catch (const std::exception& e) {
            problems.push_back(std::string("key_file: ") + e.what());
        }
        if (!config.flips.empty() && problems.empty() &&
            !std::holds_alternative<SpreadKey>(key.key))
            problems.push_back("flips: bit-flip curves need a spread key");
        const auto files = expand_glob(config.corpus);
        if (files.empty())
            problems.push_back("corpus: no files match " + config.corpus.string());
        for (const auto& f : files) {
            try {
                corpus.push_back({f.filename().string(), load_canonical(f, global.sample_rate)});
            } catch (const std::exception& e) {
                problems.push_back("corpus: " + f.string() + ": " + e.what());
            }
        }
        const double longest = *std::max_element(config.durations.begin(), config.durations.end());
        for (const auto& c : corpus)
            if (c.clip.duration_seconds() < longest ||
                (!config.flips.empty() && c.clip.duration_seconds() < config.flip_duration))
                problems.push_back("corpus: " + c.id + " is shorter than the longest segment");
    }
    if (!problems.empty()) {
        err << "error: invalid experiment config " << config_path.string() << "\n";
        for (const auto& p : problems)
            err << "  - " << p << "\n";
        return kExitFailure;
    }

    try {
        SweepConfig sweep;
        sweep.durations = config.durations;
        sweep.segments_per_clip = config.segments;
        sweep.channel = config.channel;
        sweep.seed = config.seed;
        sweep.band = config.band;
        sweep.enhanced = config.enhanced;
        sweep.include_clean = config.include_clean;
        sweep.key_id = key.id;
        sweep.jobs = global.jobs;
        const auto rows = run_duration_sweep(corpus, key.key, sweep);

        std::ostringstream csv;
        csv << sweep_csv_header() << "\n";
        for (const auto& row : rows)
            csv << sweep_csv_row(row) << "\n";

        json summary;
        summary["format"] = "echomark-summary";
        summary["version"] = kSchemaVersion;
        summary["key_id"] = key.id;
        summary["channel"] = describe(config.channel);
        summary["seed"] = config.seed;
        summary["clips"] = corpus.size();
        summary["segments_per_clip"] = config.segments;
        summary["durations"] = json::array();
        std::vector<double> medians;
        std::vector<double> null_abs;
        for (double d : config.durations) {
            const auto marked = z_scores(rows, true, d);
            const auto clean = z_scores(rows, false, d);
            std::size_t hits = 0;
            for (const auto& r : rows)
                if (r.embedded && r.duration == d &&
                    r.argmax_lag == static_cast<std::size_t>(r.key_lag))
                    ++hits;
            for (double z : clean)
                null_abs.push_back(std::abs(z));
            const double med = median(marked);
            medians.push_back(med);
            json cell = {
                {"duration", d},
                {"cells", marked.size()},
                {"median_z_embedded", med},
                {"detection_rate", static_cast<double>(hits) / static_cast<double>(marked.size())},
            };
            if (!clean.empty()) {
                cell["median_z_clean"] = median(clean);
                cell["auroc_vs_clean"] = embedded_vs_clean(rows, d).auroc;
            }
            summary["durations"].push_back(cell);
        }
        summary["median_z_non_decreasing"] = non_decreasing(medians);
        if (!null_abs.empty())
            summary["null"] = {{"cells", null_abs.size()},
                               {"p95_abs_z", quantile(null_abs, 0.95)},
                               {"max_abs_z", *std::max_element(null_abs.begin(), null_abs.end())}};

        if (!config.flips.empty()) {
            BitflipConfig bf;
            bf.duration = config.flip_duration;
            bf.segments_per_clip = config.segments;
            bf.flips = config.flips;
            bf.channel = config.channel;
            bf.seed = config.seed;
            bf.enhanced = config.enhanced;
            bf.jobs = global.jobs;
            const auto curve = run_bitflip_curve(corpus, std::get<SpreadKey>(key.key), bf);
            std::vector<double> aurocs;
            for (const auto& p : curve.curve)
                aurocs.push_back(p.roc.auroc);
            summary["bitflip"] = {{"duration", config.flip_duration},
                                  {"flips", config.flips},
                                  {"auroc", aurocs},
                                  {"auroc_non_decreasing", non_decreasing(aurocs)},
                                  {"auroc_vs_clean", curve.vs_clean.auroc}};
        }

        const fs::path csv_tmp = write_temporary(config.results_csv, csv.str());
        fs::path summary_tmp;
        try {
            summary_tmp = write_temporary(config.summary_json, summary.dump(2) + "\n");
        } catch (...) {
            fs::remove(csv_tmp);
            throw;
        }
        fs::rename(csv_tmp, config.results_csv);
        fs::rename(summary_tmp, config.summary_json);
        out << "wrote " << rows.size() << " rows to " << config.results_csv.string() << " and "
            << config.summary_json.string() << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

} // namespace echomark::cli
