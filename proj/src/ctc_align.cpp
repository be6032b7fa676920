#include "longform/ctc_align.hpp"
#include "longform/error.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

namespace longform {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct BandRow {
    std::size_t lo = 0;
    std::size_t hi = 0;  // inclusive
    std::size_t offset = 0;
};

std::vector<BandRow> band_rows(std::size_t frames, std::size_t states, const ViterbiOptions& options) {
    std::vector<BandRow> rows(frames);
    std::size_t offset = 0;
    for (std::size_t t = 0; t < frames; ++t) {
        BandRow& r = rows[t];
        r.lo = 0;
        r.hi = states - 1;
        if (options.band_half_width && frames > 1) {
            const std::size_t w = *options.band_half_width;
            const std::size_t den = frames - 1;
            const std::size_t num = t * (states - 1);
            r.lo = num >= w * den ? (num - w * den) / den : 0;
            r.hi = std::min(states - 1, (num + w * den + den - 1) / den);
        }
        if (t == 0) r.hi = std::min<std::size_t>(r.hi, 1);
        r.offset = offset;
        offset += r.lo <= r.hi ? r.hi - r.lo + 1 : 0;
    }
    return rows;
}

}  // namespace

std::string_view to_string(FailureKind kind) {
    switch (kind) {
    case FailureKind::transcript_too_long: return "transcript_too_long";
    case FailureKind::empty_transcript: return "empty_transcript";
    case FailureKind::empty_tokenization: return "empty_tokenization";
    case FailureKind::degenerate_emissions: return "degenerate_emissions";
    }
    return "unknown";
}

void EmissionMatrix::validate() const {
    if (frames < 1) throw MalformedEmissions("emission matrix has no frames");
    if (vocab < 2) throw MalformedEmissions("emission vocabulary must hold at least 2 tokens");
    if (!(frame_duration > 0.0) || !std::isfinite(frame_duration))
        throw MalformedEmissions("frame_duration must be positive");
    if (blank_id < 0 || static_cast<std::size_t>(blank_id) >= vocab)
        throw MalformedEmissions("blank id outside the vocabulary");
    if (log_probs.size() != frames * vocab) throw MalformedEmissions("emission data size does not match T x V");
    for (std::size_t t = 0; t < frames; ++t) {
        double mass = 0.0;
        for (double v : row(t)) {
            if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
                throw MalformedEmissions("frame " + std::to_string(t) + " holds NaN or +inf");
            if (normalized && v > 0.0)
                throw MalformedEmissions("frame " + std::to_string(t) + " has a positive log-probability");
            mass += std::exp(v);
        }
        if (normalized && (mass < 0.999 || mass > 1.001))
            throw MalformedEmissions("frame " + std::to_string(t) + " probabilities sum to " + std::to_string(mass));
    }
}

std::vector<TokenId> build_extended_sequence(std::span<const TokenId> tokens, TokenId blank_id) {
    if (tokens.empty()) throw InvalidArgument("empty transcript: no tokens to align");
    std::vector<TokenId> ext;
    ext.reserve(2 * tokens.size() + 1);
    ext.push_back(blank_id);
    for (TokenId tok : tokens) {
        if (tok == blank_id) throw InvalidArgument("token sequence contains the blank id");
        ext.push_back(tok);
        ext.push_back(blank_id);
    }
    return ext;
}

std::size_t min_frames_required(std::span<const TokenId> tokens) {
    std::size_t repeats = 0;
    for (std::size_t i = 1; i < tokens.size(); ++i)
        if (tokens[i] == tokens[i - 1]) ++repeats;
    return tokens.size() + repeats;
}

AlignOutcome<ViterbiPath> viterbi_align(const EmissionMatrix& emissions, std::span<const TokenId> tokens,
                                        const ViterbiOptions& options) {
    if (tokens.empty()) return AlignmentFailure{FailureKind::empty_transcript, "no tokens to align"};
    emissions.validate();
    for (TokenId tok : tokens)
        if (tok < 0 || static_cast<std::size_t>(tok) >= emissions.vocab)
            throw InvalidArgument("token id " + std::to_string(tok) + " outside the emission vocabulary");

    const std::size_t T = emissions.frames;
    const std::size_t needed = min_frames_required(tokens);
    if (T < needed)
        return AlignmentFailure{FailureKind::transcript_too_long,
                                std::to_string(tokens.size()) + " tokens need " + std::to_string(needed) +
                                    " frames, emissions have " + std::to_string(T)};

    const auto ext = build_extended_sequence(tokens, emissions.blank_id);
    const std::size_t S = ext.size();
    std::vector<bool> can_skip(S, false);
    for (std::size_t s = 2; s < S; ++s) can_skip[s] = ext[s] != emissions.blank_id && ext[s] != ext[s - 2];

    const auto rows = band_rows(T, S, options);
    std::vector<std::uint8_t> back(rows.back().offset + (rows.back().hi - rows.back().lo + 1), 0);
    std::vector<double> prev(S, kNegInf);
    std::vector<double> cur(S, kNegInf);

    for (std::size_t s = rows[0].lo; s <= rows[0].hi; ++s)
        prev[s] = emissions.at(0, static_cast<std::size_t>(ext[s]));

    for (std::size_t t = 1; t < T; ++t) {
        std::fill(cur.begin(), cur.end(), kNegInf);
        const BandRow& r = rows[t];
        const auto frame = emissions.row(t);
        for (std::size_t s = r.lo; s <= r.hi; ++s) {
            double best = prev[s];
            std::uint8_t step = 0;
            if (s >= 1 && prev[s - 1] > best) {
                best = prev[s - 1];
                step = 1;
            }
            if (can_skip[s] && prev[s - 2] > best) {
                best = prev[s - 2];
                step = 2;
            }
            back[r.offset + (s - r.lo)] = step;
            cur[s] = best + frame[static_cast<std::size_t>(ext[s])];
        }
        std::swap(prev, cur);
    }

    std::size_t state = S - 2;
    if (prev[S - 1] > prev[S - 2]) state = S - 1;
    if (prev[state] == kNegInf) {
        return AlignmentFailure{FailureKind::degenerate_emissions,
                                options.band_half_width ? "no finite-score path inside the band"
                                                        : "every feasible path has score -inf"};
    }

    ViterbiPath path;
    path.score = prev[state];
    path.states.resize(T);
    path.frame_scores.resize(T);
    for (std::size_t t = T; t-- > 0;) {
        path.states[t] = state;
        path.frame_scores[t] = emissions.at(t, static_cast<std::size_t>(ext[state]));
        if (t > 0) state -= back[rows[t].offset + (state - rows[t].lo)];
    }
    return path;
}

std::vector<WordAlignment> collapse_to_words(const ViterbiPath& path, std::span<const WordSpan> words,
                                             double frame_duration) {
    std::vector<std::size_t> word_of;
    for (std::size_t w = 0; w < words.size(); ++w) word_of.insert(word_of.end(), words[w].token_count, w);

    constexpr auto none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> first(words.size(), none);
    std::vector<std::size_t> last(words.size(), none);
    std::vector<double> sum(words.size(), 0.0);
    std::vector<std::size_t> count(words.size(), 0);
    for (std::size_t t = 0; t < path.states.size(); ++t) {
        const std::size_t s = path.states[t];
        if (s % 2 == 0) continue;
        const std::size_t k = (s - 1) / 2;
        if (k >= word_of.size())
            throw InternalInconsistency("path state " + std::to_string(s) + " has no source word");
        const std::size_t w = word_of[k];
        if (first[w] == none) first[w] = t;
        last[w] = t;
        sum[w] += path.frame_scores[t];
        ++count[w];
    }

    std::vector<WordAlignment> out;
    out.reserve(words.size());
    for (std::size_t w = 0; w < words.size(); ++w) {
        if (count[w] == 0) throw InternalInconsistency("word '" + words[w].word + "' received no frames");
        out.push_back({words[w].word, frame_duration * static_cast<double>(first[w]),
                       frame_duration * static_cast<double>(last[w] + 1), sum[w] / static_cast<double>(count[w])});
    }
    return out;
}

AlignOutcome<ForcedAlignment> force_align(const EmissionMatrix& emissions, std::string_view transcript,
                                          const TokenTable& table, const ViterbiOptions& options) {
    if (table.blank_id() != emissions.blank_id)
        throw InvalidArgument("token table blank id " + std::to_string(table.blank_id()) +
                              " differs from emission blank id " + std::to_string(emissions.blank_id));
    if (table.vocab_size() > emissions.vocab)
        throw InvalidArgument("token table vocabulary (" + std::to_string(table.vocab_size()) +
                              ") exceeds emission vocabulary (" + std::to_string(emissions.vocab) + ")");

    const auto words = split_words(normalize_transcript(transcript));
    if (words.empty()) return AlignmentFailure{FailureKind::empty_transcript, "transcript has no words"};

    ForcedAlignment result;
    std::vector<TokenId> tokens;
    std::vector<WordSpan> spans;
    for (const auto& word : words) {
        try {
            auto ids = tokenize_word(word, table, result.skipped_graphemes);
            spans.push_back({word, ids.size()});
            tokens.insert(tokens.end(), ids.begin(), ids.end());
        } catch (const EmptyTokenization&) {
            result.skipped_words.push_back(word);
        }
    }
    if (tokens.empty())
        return AlignmentFailure{FailureKind::empty_tokenization,
                                "none of " + std::to_string(words.size()) + " words produced a token"};

    auto outcome = viterbi_align(emissions, tokens, options);
    if (auto* failure = std::get_if<AlignmentFailure>(&outcome)) return *failure;
    const auto& path = std::get<ViterbiPath>(outcome);
    result.words = collapse_to_words(path, spans, emissions.frame_duration);
    result.score = path.score;
    return result;
}

}  // namespace longform
