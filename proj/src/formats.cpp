#include "echomark/formats.hpp"

#include "echomark/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace echomark {

using nlohmann::json;

namespace {

void check_header(const json& j, const char* format)
{
    if (!j.is_object() || j.value("format", "") != format)
        throw Error(std::string("expected a document with format \"") + format + "\"");
    if (j.value("version", 0) != kSchemaVersion)
        throw Error(std::string("unsupported ") + format + " version");
}

std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

std::string format_number(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

json key_to_json(const NamedKey& named)
{
    json j;
    j["id"] = named.id;
    if (const auto* single = std::get_if<EchoKey>(&named.key)) {
        j["type"] = "single";
        j["delta"] = single->delta;
        j["alpha"] = single->alpha;
    } else {
        const auto& spread = std::get<SpreadKey>(named.key);
        j["type"] = "spread";
        j["delta"] = spread.delta;
        j["alpha"] = spread.alpha;
        j["length"] = spread.length();
        j["bits"] = bits_to_hex(spread.pattern);
    }
    return j;
}

NamedKey key_from_json(const json& j)
{
    try {
        NamedKey named;
        named.id = j.value("id", "");
        const std::string type = j.at("type").get<std::string>();
        if (type == "single") {
            EchoKey key{j.at("delta").get<int>(), j.at("alpha").get<double>()};
            validate(key);
            named.key = key;
        } else if (type == "spread") {
            SpreadKey key;
            key.delta = j.value("delta", 75);
            key.alpha = j.value("alpha", 0.01);
            key.pattern = bits_from_hex(j.at("bits").get<std::string>(),
                                        j.at("length").get<std::size_t>());
            validate(key);
            named.key = std::move(key);
        } else {
            throw Error("unknown key type \"" + type + "\"");
        }
        return named;
    } catch (const json::exception& e) {
        throw Error(std::string("malformed key: ") + e.what());
    }
}

json key_file_to_json(const std::vector<NamedKey>& keys)
{
    json j;
    j["format"] = kKeyFileFormat;
    j["version"] = kSchemaVersion;
    j["keys"] = json::array();
    for (const auto& k : keys)
        j["keys"].push_back(key_to_json(k));
    return j;
}

std::vector<NamedKey> key_file_from_json(const json& j)
{
    check_header(j, kKeyFileFormat);
    if (!j.contains("keys") || !j["keys"].is_array())
        throw Error("key file has no \"keys\" array");
    std::vector<NamedKey> keys;
    for (const auto& entry : j["keys"]) {
        keys.push_back(key_from_json(entry));
        for (std::size_t i = 0; i + 1 < keys.size(); ++i)
            if (keys[i].id == keys.back().id)
                throw Error("duplicate key id \"" + keys.back().id + "\"");
    }
    return keys;
}

std::vector<NamedKey> read_key_file(const std::filesystem::path& path)
{
    return key_file_from_json(read_json_file(path));
}

void write_key_file(const std::filesystem::path& path, const std::vector<NamedKey>& keys)
{
    write_json_file(path, key_file_to_json(keys));
}

const NamedKey& find_key(const std::vector<NamedKey>& keys, const std::string& id)
{
    if (id.empty()) {
        if (keys.size() == 1)
            return keys.front();
        throw Error("key file holds " + std::to_string(keys.size()) + " keys; select one by id");
    }
    for (const auto& k : keys)
        if (k.id == id)
            return k;
    throw Error("key \"" + id + "\" not found in key file");
}

json pattern_set_to_json(const PatternSet& set)
{
    json j;
    j["format"] = kPatternFileFormat;
    j["version"] = kSchemaVersion;
    j["generator"] = kPatternGeneratorVersion;
    j["count"] = set.patterns.size();
    j["length"] = set.length;
    j["seed"] = set.seed;
    j["criteria_met"] = set.criteria_met;
    j["attempts"] = set.attempts;
    j["patterns"] = json::array();
    for (const auto& p : set.patterns)
        j["patterns"].push_back(bits_to_hex(p));
    j["distances"] = set.distances;
    return j;
}

PatternSet pattern_set_from_json(const json& j)
{
    check_header(j, kPatternFileFormat);
    try {
        PatternSet set;
        set.length = j.at("length").get<std::size_t>();
        set.seed = j.at("seed").get<std::uint64_t>();
        set.criteria_met = j.value("criteria_met", false);
        set.attempts = j.value("attempts", 0);
        for (const auto& hex : j.at("patterns"))
            set.patterns.push_back(bits_from_hex(hex.get<std::string>(), set.length));
        if (set.patterns.size() != j.at("count").get<std::size_t>())
            throw Error("pattern count does not match the header");
        set.distances = distance_matrix(set.patterns);
        return set;
    } catch (const json::exception& e) {
        throw Error(std::string("malformed pattern file: ") + e.what());
    }
}

json report_to_json(const DetectionReport& r, bool include_profile)
{
    json j;
    j["clip_id"] = r.clip_id;
    j["key_id"] = r.key_id;
    j["duration_seconds"] = r.duration_seconds;
    j["argmax_lag"] = r.argmax_lag;
    j["z_at_key"] = r.z_at_key ? json(*r.z_at_key) : json(nullptr);
    j["degenerate"] = r.degenerate || r.key_degenerate;
    j["source"] = to_string(r.profile.source);
    j["band"] = {r.profile.band.first, r.profile.band.last};
    j["exclusion_halfwidth"] = r.profile.exclusion_halfwidth;
    if (!r.profile.z.empty()) {
        const std::size_t k = r.argmax_lag - r.profile.band.first;
        j["z_max"] = r.profile.z[k];
    }
    if (include_profile)
        j["z"] = r.profile.z;
    return j;
}

std::string report_csv_header()
{
    return "clip_id,key_id,duration,argmax_lag,z_at_key,degenerate";
}

std::string report_csv_row(const DetectionReport& r)
{
    std::ostringstream os;
    os << csv_escape(r.clip_id) << ',' << csv_escape(r.key_id) << ','
       << format_number(r.duration_seconds) << ',' << r.argmax_lag << ','
       << (r.z_at_key ? format_number(*r.z_at_key) : std::string()) << ','
       << ((r.degenerate || r.key_degenerate) ? 1 : 0);
    return os.str();
}

std::string sweep_csv_header()
{
    return "cell,clip_id,duration,segment,offset,condition,key_id,channel,key_lag,argmax_lag,"
           "z_at_key,degenerate";
}

std::string sweep_csv_row(const SweepRow& r)
{
    std::ostringstream os;
    os << r.cell << ',' << csv_escape(r.clip_id) << ',' << format_number(r.duration) << ','
       << r.segment << ',' << r.offset << ',' << (r.embedded ? "embedded" : "clean") << ','
       << csv_escape(r.key_id) << ',' << csv_escape(r.channel) << ',' << r.key_lag << ','
       << r.argmax_lag << ',' << format_number(r.z_at_key) << ',' << (r.degenerate ? 1 : 0);
    return os.str();
}

json channel_to_json(const ChannelSpec& spec)
{
    json j;
    switch (spec.kind) {
    case ChannelKind::identity:
        j["kind"] = "identity";
        break;
    case ChannelKind::attenuate_echo:
        j["kind"] = "attenuate_echo";
        j["ratio"] = spec.ratio;
        break;
    case ChannelKind::additive_noise:
        j["kind"] = "additive_noise";
        j["snr_db"] = spec.snr_db;
        j["seed"] = spec.seed;
        break;
    case ChannelKind::resample_factor:
        j["kind"] = "resample_factor";
        j["factor"] = spec.factor;
        break;
    case ChannelKind::random_resample:
        j["kind"] = "random_resample";
        j["probability"] = spec.probability;
        j["low"] = spec.low;
        j["high"] = spec.high;
        j["seed"] = spec.seed;
        break;
    case ChannelKind::mixture:
        j["kind"] = "mixture";
        j["interferers"] = spec.interferers;
        j["snr_db"] = spec.snr_db;
        j["seed"] = spec.seed;
        break;
    case ChannelKind::composite:
        j["kind"] = "composite";
        j["stages"] = json::array();
        for (const auto& child : spec.children)
            j["stages"].push_back(channel_to_json(child));
        break;
    }
    return j;
}

ChannelSpec channel_from_json(const json& j)
{
    if (!j.is_object())
        throw Error("channel must be a JSON object");
    try {
        const std::string kind = j.at("kind").get<std::string>();
        const auto seed = j.value("seed", std::uint64_t{0});
        ChannelSpec spec;
        if (kind == "identity")
            spec = ChannelSpec::identity();
        else if (kind == "attenuate_echo")
            spec = ChannelSpec::attenuate_echo(j.at("ratio").get<double>());
        else if (kind == "additive_noise")
            spec = ChannelSpec::additive_noise(j.at("snr_db").get<double>(), seed);
        else if (kind == "resample_factor")
            spec = ChannelSpec::resample_factor(j.at("factor").get<double>());
        else if (kind == "random_resample")
            spec = ChannelSpec::random_resample(j.at("probability").get<double>(),
                                                j.value("low", 0.75), j.value("high", 1.25), seed);
        else if (kind == "mixture")
            spec = ChannelSpec::mixture(j.at("interferers").get<int>(), j.at("snr_db").get<double>(),
                                        seed);
        else if (kind == "composite") {
            std::vector<ChannelSpec> children;
            for (const auto& stage : j.at("stages"))
                children.push_back(channel_from_json(stage));
            spec = ChannelSpec::composite(std::move(children));
        } else
            throw Error("unknown channel kind \"" + kind + "\"");
        validate(spec);
        return spec;
    } catch (const json::exception& e) {
        throw Error(std::string("malformed channel: ") + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const json& j)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw Error("cannot write " + path.string());
    out << j.dump(2) << '\n';
    if (!out)
        throw Error("write failed: " + path.string());
}

json read_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error("invalid JSON in " + path.string() + ": " + e.what());
    }
}

} // namespace echomark
