#include "echomark/patterns.hpp"

#include "echomark/error.hpp"
#include "echomark/random.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace echomark {

std::size_t max_run_length(std::span<const std::uint8_t> bits) noexcept
{
    std::size_t best = bits.empty() ? 0 : 1;
    std::size_t run = 1;
    for (std::size_t i = 1; i < bits.size(); ++i) {
        run = bits[i] == bits[i - 1] ? run + 1 : 1;
        best = std::max(best, run);
    }
    return best;
}

bool is_run_valid(std::span<const std::uint8_t> bits) noexcept
{
    return max_run_length(bits) <= static_cast<std::size_t>(kMaxRun);
}

std::size_t repair_runs(Bits& bits)
{
    // Flipping the middle of a fresh run of three leaves x y !y y, which
    // cannot extend a run to the left; scanning continues from the third bit.
    std::size_t flips = 0;
    std::size_t run = 1;
    for (std::size_t i = 1; i < bits.size(); ++i) {
        run = bits[i] == bits[i - 1] ? run + 1 : 1;
        if (run > static_cast<std::size_t>(kMaxRun)) {
            bits[i - 1] ^= 1;
            ++flips;
            run = 1;
        }
    }
    return flips;
}

Bits generate_pattern(std::size_t length, std::uint64_t seed)
{
    if (length < 2)
        throw Error("pattern length must be at least 2");
    Rng rng(seed);
    Bits bits(length);
    for (std::size_t i = 0; i < length; ++i) {
        if (i >= 2 && bits[i - 1] == bits[i - 2])
            bits[i] = bits[i - 1] ^ 1;
        else
            bits[i] = rng.bit() ? 1 : 0;
    }
    return bits;
}

std::size_t hamming(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b)
{
    if (a.size() != b.size())
        throw Error("hamming distance needs equal-length patterns");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d += a[i] != b[i] ? 1 : 0;
    return d;
}

Bits flip_bits(std::span<const std::uint8_t> pattern, std::size_t k, std::uint64_t seed)
{
    if (k > pattern.size())
        throw Error("cannot flip more bits than the pattern holds");
    std::vector<std::size_t> order(pattern.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(order.size() - i));
        std::swap(order[i], order[j]);
    }
    Bits out(pattern.begin(), pattern.end());
    for (std::size_t i = 0; i < k; ++i)
        out[order[i]] ^= 1;
    return out;
}

Bits complement(std::span<const std::uint8_t> pattern)
{
    Bits out(pattern.begin(), pattern.end());
    for (auto& b : out)
        b ^= 1;
    return out;
}

std::vector<std::size_t> PatternSet::sorted_distances() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < distances.size(); ++i)
        for (std::size_t j = i + 1; j < distances.size(); ++j)
            out.push_back(distances[i][j]);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<std::size_t>> distance_matrix(const std::vector<Bits>& patterns)
{
    const std::size_t n = patterns.size();
    std::vector<std::vector<std::size_t>> d(n, std::vector<std::size_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            d[i][j] = d[j][i] = hamming(patterns[i], patterns[j]);
    return d;
}

namespace {

SpreadCriteria resolve(SpreadCriteria c, std::size_t count, std::size_t length)
{
    if (c.max_gap == 0)
        c.max_gap = 2 * length / count;
    if (c.min_distance == 0)
        c.min_distance = length / (2 * count);
    return c;
}

// How far a candidate is from meeting the criteria (0 when it meets them).
std::size_t violation(const std::vector<Bits>& patterns, const SpreadCriteria& c)
{
    std::size_t score = 0;
    for (const auto& p : patterns)
        score += max_run_length(p) > static_cast<std::size_t>(kMaxRun) ? 1000 : 0;
    std::vector<std::size_t> dist;
    for (std::size_t i = 0; i < patterns.size(); ++i)
        for (std::size_t j = i + 1; j < patterns.size(); ++j)
            dist.push_back(hamming(patterns[i], patterns[j]));
    std::sort(dist.begin(), dist.end());
    if (!dist.empty() && dist.front() < c.min_distance)
        score += c.min_distance - dist.front();
    for (std::size_t i = 1; i < dist.size(); ++i)
        if (dist[i] - dist[i - 1] > c.max_gap)
            score += dist[i] - dist[i - 1] - c.max_gap;
    return score;
}

} // namespace

bool meets_spread_criteria(const std::vector<Bits>& patterns, const SpreadCriteria& criteria)
{
    if (patterns.size() < 2)
        return false;
    return violation(patterns, resolve(criteria, patterns.size(), patterns.front().size())) == 0;
}

PatternSet generate_pattern_set(std::size_t count, std::size_t length, std::uint64_t seed,
                                SpreadCriteria criteria)
{
    if (count < 2)
        throw Error("a pattern set needs at least two patterns");
    if (length < 2)
        throw Error("pattern length must be at least 2");
    criteria = resolve(criteria, count, length);
    if (criteria.max_attempts < 1)
        throw Error("retry budget must be positive");

    PatternSet best;
    std::size_t best_score = std::numeric_limits<std::size_t>::max();

    for (int attempt = 0; attempt < criteria.max_attempts; ++attempt) {
        Rng rng(derive_seed({seed, static_cast<std::uint64_t>(attempt)}));
        std::vector<Bits> set;
        set.push_back(generate_pattern(length, rng.next()));

        // Pattern i flips a circular window of t_i positions in one shared
        // random ordering. Targets are stratified over [margin, L - margin],
        // so distances to the base cover the range, and windows at random
        // starts overlap partially, which spreads the other distances out.
        std::vector<std::size_t> order(length);
        std::iota(order.begin(), order.end(), std::size_t{0});
        for (std::size_t k = length - 1; k > 0; --k)
            std::swap(order[k], order[static_cast<std::size_t>(rng.below(k + 1))]);

        const double margin = static_cast<double>(criteria.min_distance) * 1.25;
        const double span = static_cast<double>(length) - 2.0 * margin;
        for (std::size_t i = 1; i < count; ++i) {
            const double pos = (static_cast<double>(i - 1) + rng.uniform()) / static_cast<double>(count - 1);
            const auto target = static_cast<std::size_t>(
                std::clamp(margin + pos * span, 0.0, static_cast<double>(length)));
            const auto start = static_cast<std::size_t>(rng.below(length));
            Bits p = set.front();
            for (std::size_t k = 0; k < target; ++k)
                p[order[(start + k) % length]] ^= 1;
            repair_runs(p);
            set.push_back(std::move(p));
        }

        const std::size_t score = violation(set, criteria);
        if (score < best_score) {
            best_score = score;
            best.patterns = std::move(set);
        }
        best.attempts = attempt + 1;
        if (score == 0)
            break;
    }

    best.length = length;
    best.seed = seed;
    best.distances = distance_matrix(best.patterns);
    best.criteria_met = best_score == 0;
    return best;
}

} // namespace echomark
