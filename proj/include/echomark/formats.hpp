#pragma once

// On-disk schemas: key files, pattern-set files, detection reports and
// experiment result rows. Every JSON document carries "format" and
// "version" fields.

#include "echomark/detect.hpp"
#include "echomark/embed.hpp"
#include "echomark/harness.hpp"
#include "echomark/patterns.hpp"

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace echomark {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kKeyFileFormat = "echomark-keys";
inline constexpr const char* kPatternFileFormat = "echomark-patterns";

struct NamedKey {
    std::string id;
    WatermarkKey key;
};

nlohmann::json key_to_json(const NamedKey& key);
NamedKey key_from_json(const nlohmann::json& j);

nlohmann::json key_file_to_json(const std::vector<NamedKey>& keys);
std::vector<NamedKey> key_file_from_json(const nlohmann::json& j);

std::vector<NamedKey> read_key_file(const std::filesystem::path& path);
void write_key_file(const std::filesystem::path& path, const std::vector<NamedKey>& keys);

/// Looks up `id`; an empty id is accepted when the file holds exactly one key.
const NamedKey& find_key(const std::vector<NamedKey>& keys, const std::string& id);

nlohmann::json pattern_set_to_json(const PatternSet& set);
PatternSet pattern_set_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const DetectionReport& report, bool include_profile = true);

std::string report_csv_header();
std::string report_csv_row(const DetectionReport& report);

std::string sweep_csv_header();
std::string sweep_csv_row(const SweepRow& row);

/// Channel stages as JSON objects: {"kind": "...", ...parameters}; a
/// composite lists its children under "stages".
nlohmann::json channel_to_json(const ChannelSpec& spec);
ChannelSpec channel_from_json(const nlohmann::json& j);

/// Serialises JSON with two-space indentation and a trailing newline.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::filesystem::path& path);

/// Shortest decimal that round-trips the double.
std::string format_number(double v);

} // namespace echomark
