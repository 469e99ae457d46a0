#pragma once

// Subcommand implementations for the echomark CLI. Each returns the process
// exit code and writes human output to `out` and diagnostics to `err`.

#include "echomark/audio.hpp"
#include "echomark/detect.hpp"
#include "echomark/payload.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace echomark::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct GlobalOptions {
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    int sample_rate = 44100;
};

struct GenPatternsOptions {
    std::size_t count = 8;
    std::size_t length = 1024;
    std::filesystem::path out;
    std::size_t max_gap = 0;
    std::size_t min_distance = 0;
    int max_attempts = 1000;
    std::filesystem::path key_out;   // optional spread key file
    double alpha = 0.01;
    int delta = 75;
};

/// Key selection: a key file plus optional id, or an inline single echo.
struct KeyRef {
    std::filesystem::path key_file;
    std::string key_id;
    std::optional<int> delta;
    double alpha = 0.4;
};

struct EmbedOptions {
    std::filesystem::path in;
    std::filesystem::path out;
    KeyRef key;
    bool resample = true;
    std::string format = "float32";   // float32 | pcm16 | source
};

struct DetectOptions {
    std::filesystem::path in;
    KeyRef key;
    std::string mode;                 // single | spread; empty = from key
    std::optional<LagBand> band;
    bool enhanced = false;
    std::string format = "json";      // json | csv
    bool profile = false;
};

struct PayloadOptions {
    std::string action;               // encode | decode
    std::filesystem::path in;
    std::filesystem::path out;
    std::string bits_hex;
    std::optional<std::size_t> n_bits;
    PayloadConfig config;
    std::string format = "float32";
};

int cmd_gen_patterns(const GenPatternsOptions& opts, const GlobalOptions& global, std::ostream& out,
                     std::ostream& err);
int cmd_embed(const EmbedOptions& opts, const GlobalOptions& global, std::ostream& out,
              std::ostream& err);
int cmd_tag_dataset(const std::filesystem::path& manifest, const GlobalOptions& global,
                    std::ostream& out, std::ostream& err);
int cmd_detect(const DetectOptions& opts, const GlobalOptions& global, std::ostream& out,
               std::ostream& err);
int cmd_payload(const PayloadOptions& opts, const GlobalOptions& global, std::ostream& out,
                std::ostream& err);
int cmd_evaluate(const std::filesystem::path& config, const GlobalOptions& global,
                 std::ostream& out, std::ostream& err);

/// Load and convert to the working rate (mono is implied by the loader).
AudioClip load_canonical(const std::filesystem::path& path, int sample_rate);

/// Parses "25:125" or "25,125".
LagBand parse_band(const std::string& text);

/// Directory listing filtered by a shell-style pattern in the final path
/// component ("corpus/*.wav"); a plain path matches itself.
std::vector<std::filesystem::path> expand_glob(const std::filesystem::path& pattern);

} // namespace echomark::cli
