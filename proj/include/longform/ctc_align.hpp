#pragma once

#include "longform/text_norm.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace longform {

// T x V row-major frame scores (natural-log probabilities when `normalized`).
// -infinity marks an impossible token.
struct EmissionMatrix {
    std::size_t frames = 0;
    std::size_t vocab = 0;
    std::vector<double> log_probs;
    double frame_duration = 0.02;
    TokenId blank_id = 0;
    bool normalized = false;

    double at(std::size_t t, std::size_t v) const { return log_probs[t * vocab + v]; }
    std::span<const double> row(std::size_t t) const { return {log_probs.data() + t * vocab, vocab}; }

    // Throws MalformedEmissions.
    void validate() const;
};

enum class FailureKind { transcript_too_long, empty_transcript, empty_tokenization, degenerate_emissions };

std::string_view to_string(FailureKind kind);

struct AlignmentFailure {
    FailureKind kind;
    std::string detail;
};

template <class T>
using AlignOutcome = std::variant<T, AlignmentFailure>;

struct ViterbiPath {
    // Extended-sequence state per frame.
    std::vector<std::size_t> states;
    // log_probs[t][extended[states[t]]]
    std::vector<double> frame_scores;
    double score = 0.0;
};

struct ViterbiOptions {
    // Restrict frame t to states within this distance of the diagonal
    // t * (S-1) / (T-1). This is an approximation: the optimum may lie
    // outside the band, in which case a worse path (or a failure) results.
    std::optional<std::size_t> band_half_width;
};

// [b, t1, b, t2, ..., tN, b]
std::vector<TokenId> build_extended_sequence(std::span<const TokenId> tokens, TokenId blank_id);

// Fewest frames any CTC path needs: N plus the number of adjacent repeats,
// each of which forces a blank between the two copies.
std::size_t min_frames_required(std::span<const TokenId> tokens);

// Best monotone path through the blank-interleaved trellis. On equal
// scores backtracking prefers stay, then advance, then skip, and the final
// state S-2 over S-1.
AlignOutcome<ViterbiPath> viterbi_align(const EmissionMatrix& emissions, std::span<const TokenId> tokens,
                                        const ViterbiOptions& options = {});

struct WordSpan {
    std::string word;
    std::size_t token_count = 0;
};

struct WordAlignment {
    std::string word;
    double start = 0.0;
    double end = 0.0;
    // Mean log-probability over the frames spent in the word's token states.
    double score = 0.0;
};

// Frames in blank states belong to no word. Throws InternalInconsistency
// if a word ends up with no frame.
std::vector<WordAlignment> collapse_to_words(const ViterbiPath& path, std::span<const WordSpan> words,
                                             double frame_duration);

struct ForcedAlignment {
    std::vector<WordAlignment> words;
    // Words whose tokenization came out empty under the skip policy.
    std::vector<std::string> skipped_words;
    std::size_t skipped_graphemes = 0;
    double score = 0.0;
};

// normalize -> split -> tokenize -> Viterbi -> per-word timestamps.
// Throws InvalidArgument when the table and the emissions disagree on the
// vocabulary or the blank id.
AlignOutcome<ForcedAlignment> force_align(const EmissionMatrix& emissions, std::string_view transcript,
                                          const TokenTable& table, const ViterbiOptions& options = {});

}  // namespace longform
