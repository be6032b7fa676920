#pragma once

#include "longform/audio.hpp"
#include "longform/ctc_align.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace longform {

inline constexpr double kDefaultMaxChunkDuration = 29.5;
inline constexpr std::size_t kDefaultLookback = 5;

struct Chunk {
    double start = 0.0;
    double end = 0.0;
    // Half-open range into the word sequence.
    std::size_t first_word = 0;
    std::size_t last_word = 0;
    std::string transcript;

    double duration() const { return end - start; }
};

enum class ChunkPolicy { greedy, gap_biased };

// Word-preserving segmentation with every chunk strictly shorter than
// max_duration. Throws WordTooLong for a word that cannot fit on its own and
// InvalidArgument for unordered or overlapping words.
std::vector<Chunk> chunk_words(std::span<const WordAlignment> words, double max_duration,
                               ChunkPolicy policy = ChunkPolicy::greedy, std::size_t lookback = kDefaultLookback);

// Samples [round((start-pad)*rate), round((end+pad)*rate)) clamped to the buffer.
AudioBuffer extract_chunk_audio(const AudioBuffer& buffer, const Chunk& chunk, double pad = 0.0);

struct VadConfig {
    double frame_ms = 25.0;
    double hop_ms = 10.0;
    double threshold_db = -40.0;
    double min_speech_ms = 200.0;
    double min_silence_ms = 300.0;

    void validate() const;
};

struct SpeechInterval {
    double start = 0.0;
    double end = 0.0;
};

// Energy-threshold VAD: frames louder than threshold_db (dBFS) are speech;
// gaps shorter than min_silence_ms are bridged, then runs shorter than
// min_speech_ms are dropped.
std::vector<SpeechInterval> detect_speech(const AudioBuffer& buffer, const VadConfig& config = {});

}  // namespace longform
