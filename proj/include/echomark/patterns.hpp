#pragma once

#include "echomark/bits.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace echomark {

inline constexpr int kMaxRun = 2;
inline constexpr const char* kPatternGeneratorVersion = "flip-spread-1";

/// Longest run of identical consecutive bits.
std::size_t max_run_length(std::span<const std::uint8_t> bits) noexcept;
bool is_run_valid(std::span<const std::uint8_t> bits) noexcept;

/// Flips the middle bit of every run of three until no run exceeds two.
/// Returns the number of bits flipped.
std::size_t repair_runs(Bits& bits);

/// Seeded pseudorandom pattern with no run longer than two.
Bits generate_pattern(std::size_t length, std::uint64_t seed);

std::size_t hamming(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

/// Inverts exactly k distinct positions chosen uniformly without replacement.
/// The result is not run-repaired.
Bits flip_bits(std::span<const std::uint8_t> pattern, std::size_t k, std::uint64_t seed);

Bits complement(std::span<const std::uint8_t> pattern);

/// Thresholds that quantify "approximately uniform" pairwise distances.
/// Zero means the default: max gap 2L/count, min distance L/(2 count).
struct SpreadCriteria {
    std::size_t max_gap = 0;
    std::size_t min_distance = 0;
    int max_attempts = 1000;
};

struct PatternSet {
    std::vector<Bits> patterns;
    std::size_t length = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<std::size_t>> distances;
    bool criteria_met = false;
    int attempts = 0;   // attempts consumed

    /// Upper-triangle distances in ascending order.
    std::vector<std::size_t> sorted_distances() const;
};

std::vector<std::vector<std::size_t>> distance_matrix(const std::vector<Bits>& patterns);

/// Checks a candidate set against the spread thresholds (run validity,
/// minimum distance, maximum adjacent gap of the sorted distances).
bool meets_spread_criteria(const std::vector<Bits>& patterns, const SpreadCriteria& criteria);

/// Builds `count` run-valid patterns whose pairwise Hamming distances spread
/// across (0, L). If the retry budget runs out the best attempt is returned
/// with criteria_met == false.
PatternSet generate_pattern_set(std::size_t count, std::size_t length, std::uint64_t seed,
                                SpreadCriteria criteria = {});

} // namespace echomark
