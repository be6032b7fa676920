#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace longform {

// Interleaved PCM frames with amplitudes in [-1, 1].
struct AudioBuffer {
    std::vector<double> samples;
    int sample_rate = 16000;
    int channels = 1;

    std::size_t frames() const { return channels > 0 ? samples.size() / channels : 0; }
    double duration() const { return static_cast<double>(frames()) / sample_rate; }

    // Throws InvalidArgument when an invariant is broken.
    void validate() const;
};

enum class WavEncoding { pcm16, pcm24, float32 };

// What the RIFF header says, without touching sample data.
struct WavInfo {
    WavEncoding encoding = WavEncoding::pcm16;
    int sample_rate = 0;
    int channels = 0;
    int bits_per_sample = 0;
    std::uint64_t frames = 0;
    std::uint64_t data_offset = 0;
    std::uint64_t data_bytes = 0;

    double duration() const { return sample_rate > 0 ? static_cast<double>(frames) / sample_rate : 0.0; }
};

WavInfo parse_wav_header(std::span<const std::uint8_t> bytes);
WavInfo read_wav_info(const std::filesystem::path& path);

AudioBuffer decode_wav(std::span<const std::uint8_t> bytes);
AudioBuffer read_wav(const std::filesystem::path& path);

// Canonical 44-byte header, PCM 16-bit. Amplitudes are clamped to [-1, 1]
// and scaled by 32767 with round-half-away-from-zero.
std::vector<std::uint8_t> encode_wav(const AudioBuffer& buffer);
void write_wav(const AudioBuffer& buffer, const std::filesystem::path& path);

AudioBuffer downmix_mono(const AudioBuffer& buffer);

// Windowed-sinc polyphase resampler (Kaiser window, 16 zero crossings per side).
AudioBuffer resample(const AudioBuffer& buffer, int target_rate);

AudioBuffer apply_gain(const AudioBuffer& buffer, double gain_db);

struct GainAugmentConfig {
    double min_db = -6.0;
    double max_db = 6.0;
    double probability = 0.4;
    std::uint64_t seed = 0;

    void validate() const;
};

struct GainAugmentResult {
    AudioBuffer buffer;
    bool applied = false;
    std::optional<double> gain_db;
};

// Draws one Bernoulli then one uniform value from a generator seeded with
// config.seed, whether or not the gain is applied.
GainAugmentResult augment_gain(const AudioBuffer& buffer, const GainAugmentConfig& config);

}  // namespace longform
