#include "test_support.hpp"

#include "echomark/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <unistd.h>

namespace echomark::testing {

AudioClip white_noise_samples(std::size_t n, std::uint64_t seed, int rate)
{
    Rng rng(derive_seed({seed, 0x5eed}));
    auto v = rng.normal_vector(n);
    for (auto& s : v)
        s *= 0.1;
    return AudioClip(std::move(v), rate);
}

AudioClip white_noise(double seconds, std::uint64_t seed, int rate)
{
    return white_noise_samples(static_cast<std::size_t>(std::llround(seconds * rate)), seed, rate);
}

AudioClip sinusoid(double freq, double seconds, int rate, double amplitude, double phase)
{
    const auto n = static_cast<std::size_t>(std::llround(seconds * rate));
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = amplitude * std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(i) / rate + phase);
    return AudioClip(std::move(v), rate);
}

namespace {

void add_tone(std::vector<double>& out, int rate, double start, double length, double f0,
              double gain, int harmonics, double decay, double vibrato, Rng& rng)
{
    const auto first = static_cast<std::size_t>(start * rate);
    const auto count = static_cast<std::size_t>(length * rate);
    std::vector<double> amps(static_cast<std::size_t>(harmonics));
    std::vector<double> phases(amps.size());
    for (std::size_t h = 0; h < amps.size(); ++h) {
        amps[h] = std::pow(static_cast<double>(h + 1), -1.3) * rng.uniform(0.4, 1.0);
        phases[h] = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
    const double vib_rate = rng.uniform(4.5, 6.5);
    double phase = 0.0;
    for (std::size_t i = 0; i < count && first + i < out.size(); ++i) {
        const double t = static_cast<double>(i) / rate;
        const double f = f0 * (1.0 + vibrato * std::sin(2.0 * std::numbers::pi * vib_rate * t));
        phase += 2.0 * std::numbers::pi * f / rate;
        const double env = std::min(1.0, t / 0.01) * std::exp(-t * decay);
        double s = 0.0;
        for (std::size_t h = 0; h < amps.size(); ++h) {
            if (f * static_cast<double>(h + 1) > 0.45 * rate)
                break;
            s += amps[h] * std::sin(phase * static_cast<double>(h + 1) + phases[h]);
        }
        out[first + i] += gain * env * s;
    }
}

void add_drum(std::vector<double>& out, int rate, double start, int kind, Rng& rng)
{
    const auto first = static_cast<std::size_t>(start * rate);
    const std::size_t count = static_cast<std::size_t>(0.25 * rate);
    double phase = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < count && first + i < out.size(); ++i) {
        const double t = static_cast<double>(i) / rate;
        double s = 0.0;
        if (kind == 0) {
            const double f = 50.0 + 90.0 * std::exp(-t * 30.0);
            phase += 2.0 * std::numbers::pi * f / rate;
            s = 0.9 * std::sin(phase) * std::exp(-t * 12.0);
        } else if (kind == 1) {
            phase += 2.0 * std::numbers::pi * 180.0 / rate;
            s = (0.5 * rng.normal() * 0.5 + 0.3 * std::sin(phase)) * std::exp(-t * 25.0);
        } else {
            const double n = rng.normal();
            s = 0.25 * (n - prev) * std::exp(-t * 60.0);
            prev = n;
        }
        out[first + i] += s;
    }
}

} // namespace

AudioClip synth_music(double seconds, std::uint64_t seed, int rate)
{
    Rng rng(derive_seed({seed, 0x6d75736963}));
    const auto n = static_cast<std::size_t>(std::llround(seconds * rate));
    std::vector<double> out(n, 0.0);

    const double beat = 60.0 / rng.uniform(85.0, 140.0);
    const double root = 55.0 * std::pow(2.0, static_cast<double>(rng.below(12)) / 12.0);
    static constexpr int scale[] = {0, 2, 4, 5, 7, 9, 11};
    static constexpr int progression[] = {0, 5, 3, 4};
    auto note = [&](int degree, int octave) {
        const int idx = ((degree % 7) + 7) % 7;
        const int semis = scale[idx] + 12 * (octave + (degree - idx) / 7);
        return root * std::pow(2.0, semis / 12.0);
    };

    const double bar = 4 * beat;
    for (double t = 0.0; t < seconds; t += bar) {
        const int chord = progression[static_cast<std::size_t>(t / bar) % 4];
        add_tone(out, rate, t, bar, note(chord, 0), 0.35, 8, 1.5, 0.0, rng);
        for (int v = 0; v < 3; ++v)
            add_tone(out, rate, t, bar * 0.95, note(chord + 2 * v, 2), 0.12, 12, 0.8, 0.002, rng);
        for (int b = 0; b < 8; ++b) {
            const double start = t + b * beat * 0.5;
            if (rng.uniform() < 0.7)
                add_tone(out, rate, start, beat * 0.5,
                         note(chord + static_cast<int>(rng.below(8)), 3), 0.15, 10, 3.0, 0.004, rng);
            add_drum(out, rate, start, 2, rng);
        }
        for (int b = 0; b < 4; ++b)
            add_drum(out, rate, t + b * beat, b % 2 == 0 ? 0 : 1, rng);
    }

    // Diffuse room tail: exponentially decaying noise taps beyond 10 ms.
    std::vector<double> tail(out.size(), 0.0);
    for (int k = 0; k < 200; ++k) {
        const auto lag = static_cast<std::size_t>(rng.uniform(0.01, 0.3) * rate);
        const double gain = 0.03 * rng.normal() * std::exp(-static_cast<double>(lag) / (0.1 * rate));
        for (std::size_t i = lag; i < out.size(); ++i)
            tail[i] += gain * out[i - lag];
    }
    double peak = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] += tail[i];
        peak = std::max(peak, std::abs(out[i]));
    }
    for (auto& v : out)
        v *= 0.8 / peak;
    return AudioClip(std::move(out), rate);
}

std::vector<double> direct_convolution(std::span<const double> x, std::span<const double> h)
{
    std::vector<double> out(x.size() + h.size() - 1, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < h.size(); ++j)
            out[i + j] += x[i] * h[j];
    return out;
}

double ks_pvalue(std::vector<double> a, std::vector<double> b)
{
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v)
            ++i;
        while (j < b.size() && b[j] == v)
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = na * nb / (na + nb);
    const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    if (lambda < 1e-3)
        return 1.0;
    double p = 0.0;
    for (int k = 1; k <= 200; ++k) {
        const double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
        p += term;
        if (std::abs(term) < 1e-12)
            break;
    }
    return std::clamp(p, 0.0, 1.0);
}

double pairwise_auc(std::span<const double> t, std::span<const double> f)
{
    double wins = 0.0;
    for (double a : t)
        for (double b : f)
            wins += a > b ? 1.0 : (a == b ? 0.5 : 0.0);
    return wins / (static_cast<double>(t.size()) * static_cast<double>(f.size()));
}

double normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

TempDir::TempDir(const std::string& tag)
{
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("echomark-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir()
{
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace echomark::testing
