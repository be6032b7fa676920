#include "longform/chunker.hpp"
#include "longform/error.hpp"
#include "longform/kernels.hpp"

#include <cmath>

namespace longform {
namespace {

Chunk make_chunk(std::span<const WordAlignment> words, std::size_t first, std::size_t last) {
    Chunk c;
    c.first_word = first;
    c.last_word = last;
    c.start = words[first].start;
    c.end = words[last - 1].end;
    for (std::size_t i = first; i < last; ++i) {
        if (i > first) c.transcript.push_back(' ');
        c.transcript += words[i].word;
    }
    return c;
}

}  // namespace

std::vector<Chunk> chunk_words(std::span<const WordAlignment> words, double max_duration, ChunkPolicy policy,
                               std::size_t lookback) {
    if (!(max_duration > 0.0) || !std::isfinite(max_duration))
        throw InvalidArgument("max_duration must be positive");
    for (std::size_t i = 0; i < words.size(); ++i) {
        const auto& w = words[i];
        if (!(w.end > w.start) || w.start < 0.0)
            throw InvalidArgument("word " + std::to_string(i) + " has an empty or negative interval");
        if (i > 0 && w.start < words[i - 1].end)
            throw InvalidArgument("word " + std::to_string(i) + " overlaps or precedes its predecessor");
        if (w.end - w.start >= max_duration) throw WordTooLong(i, w.end - w.start);
    }

    std::vector<Chunk> chunks;
    if (words.empty()) return chunks;
    std::size_t first = 0;
    for (std::size_t i = 1; i < words.size(); ++i) {
        if (words[i].end - words[first].start < max_duration) continue;
        std::size_t split = i;
        if (policy == ChunkPolicy::gap_biased) {
            double best_gap = words[i].start - words[i - 1].end;
            const std::size_t floor_k = std::max(first + 1, i > lookback ? i - lookback : 0);
            for (std::size_t k = i - 1; k >= floor_k; --k) {
                if (words[i].end - words[k].start >= max_duration) break;
                const double gap = words[k].start - words[k - 1].end;
                if (gap > best_gap) {
                    best_gap = gap;
                    split = k;
                }
            }
        }
        chunks.push_back(make_chunk(words, first, split));
        first = split;
    }
    chunks.push_back(make_chunk(words, first, words.size()));
    return chunks;
}

AudioBuffer extract_chunk_audio(const AudioBuffer& buffer, const Chunk& chunk, double pad) {
    if (buffer.channels != 1) throw RequiresMono(buffer.channels);
    if (!(pad >= 0.0)) throw InvalidArgument("pad must be non-negative");
    if (chunk.start > buffer.duration())
        throw ChunkOutOfRange("chunk starts at " + std::to_string(chunk.start) + " s, audio lasts " +
                              std::to_string(buffer.duration()) + " s");
    const auto len = static_cast<long long>(buffer.samples.size());
    const double rate = buffer.sample_rate;
    const long long a = std::clamp(std::llround((chunk.start - pad) * rate), 0LL, len);
    const long long b = std::clamp(std::llround((chunk.end + pad) * rate), a, len);
    AudioBuffer out;
    out.sample_rate = buffer.sample_rate;
    out.channels = 1;
    out.samples.assign(buffer.samples.begin() + a, buffer.samples.begin() + b);
    return out;
}

void VadConfig::validate() const {
    if (!(frame_ms > 0 && hop_ms > 0 && min_speech_ms > 0 && min_silence_ms > 0))
        throw InvalidArgument("VAD durations must be positive");
    if (hop_ms > frame_ms) throw InvalidArgument("VAD hop must not exceed the frame length");
    if (!std::isfinite(threshold_db)) throw InvalidArgument("VAD threshold must be finite");
}

std::vector<SpeechInterval> detect_speech(const AudioBuffer& buffer, const VadConfig& config) {
    if (buffer.channels != 1) throw RequiresMono(buffer.channels);
    config.validate();
    const double rate = buffer.sample_rate;
    const auto frame_len = static_cast<std::size_t>(std::max(1LL, std::llround(config.frame_ms * rate / 1000.0)));
    const auto hop = static_cast<std::size_t>(std::max(1LL, std::llround(config.hop_ms * rate / 1000.0)));
    const std::size_t len = buffer.samples.size();

    std::vector<double> energy(kernels::frame_count(len, frame_len, hop));
    kernels::parallel::frame_energy_db(buffer.samples, frame_len, hop, energy);

    std::vector<SpeechInterval> runs;
    for (std::size_t i = 0; i < energy.size();) {
        if (!(energy[i] > config.threshold_db)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < energy.size() && energy[j + 1] > config.threshold_db) ++j;
        runs.push_back({static_cast<double>(i * hop) / rate,
                        static_cast<double>(std::min(len, j * hop + frame_len)) / rate});
        i = j + 1;
    }

    std::vector<SpeechInterval> merged;
    for (const auto& r : runs) {
        if (!merged.empty() && r.start - merged.back().end < config.min_silence_ms / 1000.0)
            merged.back().end = std::max(merged.back().end, r.end);
        else
            merged.push_back(r);
    }

    std::vector<SpeechInterval> out;
    for (const auto& r : merged)
        if (r.end - r.start >= config.min_speech_ms / 1000.0) out.push_back(r);
    return out;
}

}  // namespace longform
