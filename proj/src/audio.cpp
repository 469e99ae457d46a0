#include "echomark/audio.hpp"

#include "echomark/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace echomark {

AudioClip::AudioClip(std::vector<double> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate)
{
    if (samples_.empty())
        throw Error("audio clip must contain at least one sample");
    if (sample_rate_ <= 0)
        throw Error("sample rate must be positive");
    for (double v : samples_)
        if (!std::isfinite(v))
            throw Error("audio clip contains non-finite samples");
}

AudioClip AudioClip::slice(std::size_t offset, std::size_t count) const
{
    if (offset > samples_.size() || count > samples_.size() - offset)
        throw Error("slice out of range");
    return AudioClip({samples_.begin() + static_cast<std::ptrdiff_t>(offset),
                      samples_.begin() + static_cast<std::ptrdiff_t>(offset + count)},
                     sample_rate_);
}

AudioClip AudioClip::with_rate(int sample_rate) const
{
    return AudioClip(samples_, sample_rate);
}

double AudioClip::rms() const noexcept
{
    double acc = 0.0;
    for (double v : samples_)
        acc += v * v;
    return std::sqrt(acc / static_cast<double>(samples_.size()));
}

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const unsigned char* p)
{
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const unsigned char* p)
{
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::string& out, std::uint16_t v)
{
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& out, std::uint32_t v)
{
    for (int shift = 0; shift < 32; shift += 8)
        out.push_back(static_cast<char>((v >> shift) & 0xff));
}

} // namespace

LoadedAudio load_audio_with_info(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open audio file: " + path.string());
    const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                           std::istreambuf_iterator<char>());
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw Error("not a RIFF/WAVE file: " + path.string());

    WavInfo info;
    int bits = 0;
    std::uint16_t tag = 0;
    bool have_fmt = false;
    const unsigned char* data = nullptr;
    std::size_t data_size = 0;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const unsigned char* hdr = bytes.data() + pos;
        const std::size_t chunk_size = read_u32(hdr + 4);
        const std::size_t body = pos + 8;
        const std::size_t avail = std::min(chunk_size, bytes.size() - body);
        if (std::memcmp(hdr, "fmt ", 4) == 0) {
            if (avail < 16)
                throw Error("truncated fmt chunk: " + path.string());
            const unsigned char* f = bytes.data() + body;
            tag = read_u16(f);
            info.channels = read_u16(f + 2);
            info.sample_rate = static_cast<int>(read_u32(f + 4));
            bits = read_u16(f + 14);
            if (tag == kFormatExtensible) {
                if (avail < 26)
                    throw Error("truncated extensible fmt chunk: " + path.string());
                tag = read_u16(f + 24);
            }
            have_fmt = true;
        } else if (std::memcmp(hdr, "data", 4) == 0) {
            data = bytes.data() + body;
            data_size = avail;
            if (have_fmt)
                break;
        }
        pos = body + chunk_size + (chunk_size & 1);
    }
    if (!have_fmt)
        throw Error("missing fmt chunk: " + path.string());
    if (!data)
        throw Error("missing data chunk: " + path.string());

    if (tag == kFormatPcm && bits == 16)
        info.format = SampleFormat::pcm16;
    else if (tag == kFormatPcm && bits == 24)
        info.format = SampleFormat::pcm24;
    else if (tag == kFormatFloat && bits == 32)
        info.format = SampleFormat::float32;
    else
        throw Error("unsupported WAV encoding (format " + std::to_string(tag) + ", " +
                    std::to_string(bits) + " bits): " + path.string());
    if (info.channels < 1 || info.channels > 8)
        throw Error("unsupported channel count " + std::to_string(info.channels));
    if (info.sample_rate <= 0)
        throw Error("invalid sample rate in " + path.string());

    const std::size_t width = static_cast<std::size_t>(bits / 8);
    const std::size_t frame_bytes = width * static_cast<std::size_t>(info.channels);
    info.frames = data_size / frame_bytes;
    if (info.frames == 0)
        throw Error("audio file has no samples: " + path.string());

    std::vector<double> mono(info.frames, 0.0);
    const double inv_channels = 1.0 / info.channels;
    for (std::size_t n = 0; n < info.frames; ++n) {
        const unsigned char* frame = data + n * frame_bytes;
        double acc = 0.0;
        for (int ch = 0; ch < info.channels; ++ch) {
            const unsigned char* s = frame + static_cast<std::size_t>(ch) * width;
            switch (info.format) {
            case SampleFormat::pcm16:
                acc += static_cast<std::int16_t>(read_u16(s)) / 32768.0;
                break;
            case SampleFormat::pcm24: {
                std::int32_t v = static_cast<std::int32_t>(s[0] | (s[1] << 8) | (s[2] << 16));
                if (v & 0x800000)
                    v -= 0x1000000;
                acc += v / 8388608.0;
                break;
            }
            case SampleFormat::float32: {
                const std::uint32_t raw = read_u32(s);
                float f;
                std::memcpy(&f, &raw, sizeof f);
                acc += static_cast<double>(f);
                break;
            }
            }
        }
        mono[n] = acc * inv_channels;
    }
    return {AudioClip(std::move(mono), info.sample_rate), info};
}

AudioClip load_audio(const std::filesystem::path& path)
{
    return load_audio_with_info(path).clip;
}

std::size_t save_audio(const AudioClip& clip, const std::filesystem::path& path,
                       SampleFormat format)
{
    if (format == SampleFormat::pcm24)
        throw Error("pcm24 output is not supported");
    const bool pcm = format == SampleFormat::pcm16;
    const std::uint16_t bits = pcm ? 16 : 32;
    const std::uint32_t data_bytes = static_cast<std::uint32_t>(clip.size() * (bits / 8));

    std::string out;
    out.reserve(44 + data_bytes);
    out += "RIFF";
    put_u32(out, 36 + data_bytes);
    out += "WAVEfmt ";
    put_u32(out, 16);
    put_u16(out, pcm ? kFormatPcm : kFormatFloat);
    put_u16(out, 1);
    put_u32(out, static_cast<std::uint32_t>(clip.sample_rate()));
    put_u32(out, static_cast<std::uint32_t>(clip.sample_rate()) * (bits / 8));
    put_u16(out, bits / 8);
    put_u16(out, bits);
    out += "data";
    put_u32(out, data_bytes);

    std::size_t clipped = 0;
    for (double v : clip.samples()) {
        if (pcm) {
            if (v > 1.0 || v < -1.0)
                ++clipped;
            const long q = std::clamp(std::lround(v * 32768.0), -32768L, 32767L);
            put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
        } else {
            const float f = static_cast<float>(v);
            std::uint32_t raw;
            std::memcpy(&raw, &f, sizeof raw);
            put_u32(out, raw);
        }
    }

    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file)
        throw Error("cannot write audio file: " + path.string());
    file.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!file)
        throw Error("write failed: " + path.string());
    return clipped;
}

AudioClip mix(std::span<const AudioClip> clips, std::span<const double> weights)
{
    if (clips.empty())
        throw Error("mix requires at least one clip");
    if (clips.size() != weights.size())
        throw Error("mix: weights and clips differ in length");
    const int rate = clips.front().sample_rate();
    std::size_t len = 0;
    for (const auto& c : clips) {
        if (c.sample_rate() != rate)
            throw Error("mix: clips have different sample rates");
        len = std::max(len, c.size());
    }
    std::vector<double> out(len, 0.0);
    for (std::size_t i = 0; i < clips.size(); ++i) {
        const auto& s = clips[i].samples();
        for (std::size_t n = 0; n < s.size(); ++n)
            out[n] += weights[i] * s[n];
    }
    return AudioClip(std::move(out), rate);
}

} // namespace echomark
