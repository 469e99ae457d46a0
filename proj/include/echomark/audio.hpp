#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace echomark {

/// Mono sample buffer with its sample rate. Samples are kept in double
/// precision regardless of the file depth they came from.
///
/// Invariants (checked on construction): at least one sample, every sample
/// finite, sample_rate > 0.
class AudioClip {
public:
    AudioClip(std::vector<double> samples, int sample_rate);

    const std::vector<double>& samples() const noexcept { return samples_; }
    std::span<const double> view() const noexcept { return samples_; }
    int sample_rate() const noexcept { return sample_rate_; }
    std::size_t size() const noexcept { return samples_.size(); }
    double duration_seconds() const noexcept
    {
        return static_cast<double>(samples_.size()) / sample_rate_;
    }
    double operator[](std::size_t i) const noexcept { return samples_[i]; }

    /// Copy of [offset, offset + count).
    AudioClip slice(std::size_t offset, std::size_t count) const;

    /// Same samples, different nominal rate (no resampling).
    AudioClip with_rate(int sample_rate) const;

    double rms() const noexcept;

private:
    std::vector<double> samples_;
    int sample_rate_;
};

enum class SampleFormat { pcm16, pcm24, float32 };

struct WavInfo {
    int sample_rate = 0;
    int channels = 0;
    SampleFormat format = SampleFormat::float32;
    std::size_t frames = 0;
};

struct LoadedAudio {
    AudioClip clip;
    WavInfo info;
};

/// Reads a RIFF/WAVE file (PCM 16/24-bit or IEEE float32, 1..8 channels) and
/// averages channels to mono. Unknown chunks are skipped.
LoadedAudio load_audio_with_info(const std::filesystem::path& path);
AudioClip load_audio(const std::filesystem::path& path);

/// Writes a mono WAV. pcm16 saturates out-of-range samples; the number of
/// clipped samples is returned. pcm24 is not a valid output format.
std::size_t save_audio(const AudioClip& clip, const std::filesystem::path& path,
                       SampleFormat format = SampleFormat::float32);

/// Band-limited conversion to target_rate. Output length is
/// round(size * target_rate / sample_rate); identical rates return the input.
AudioClip resample(const AudioClip& clip, int target_rate);

/// Resamples a raw buffer by an arbitrary ratio (output rate / input rate),
/// producing exactly out_len samples. The anti-aliasing cutoff tracks the
/// lower of the two rates.
std::vector<double> resample_ratio(std::span<const double> in, double ratio,
                                   std::size_t out_len);

/// out[n] = sum_i weights[i] * clips[i][n]; shorter clips are zero padded.
AudioClip mix(std::span<const AudioClip> clips, std::span<const double> weights);

} // namespace echomark
