#pragma once

#include "longform/diar_formats.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace longform {

struct WerReport {
    std::size_t substitutions = 0;
    std::size_t deletions = 0;
    std::size_t insertions = 0;
    std::size_t reference_words = 0;
    std::size_t hypothesis_words = 0;
    // (S + D + I) / max(N, 1)
    double wer = 0.0;
    // Empty reference: wer counts insertions against the guard of 1.
    bool degenerate_reference = false;

    std::size_t errors() const { return substitutions + deletions + insertions; }
};

// Unit-cost Levenshtein alignment on words. Among equal-cost alignments the
// backtrace (from the end) prefers substitution/match, then deletion, then
// insertion.
WerReport wer_words(std::span<const std::string> reference, std::span<const std::string> hypothesis);

// Both sides go through normalize_transcript and split_words first.
WerReport wer(std::string_view reference, std::string_view hypothesis);

// Pooled counts over all pairs (not the mean of per-pair rates). Pairs are
// scored in parallel and reduced in input order. Throws EmptyCorpus.
WerReport wer_corpus(std::span<const std::pair<std::string, std::string>> pairs);

struct DerReport {
    double missed = 0.0;
    double false_alarm = 0.0;
    double confusion = 0.0;
    double total_reference = 0.0;
    // nullopt when no reference speech is scored.
    std::optional<double> der;
    // (hypothesis label, reference label), sorted by hypothesis label.
    std::vector<std::pair<std::string, std::string>> mapping;
};

// Frame-free DER on the merged boundary partition. Times are scored on an
// integer microsecond grid so totals, and therefore invariance under
// relabeling, are exact. Overlapped reference speech is scored; `collar`
// seconds either side of every reference boundary are excluded.
DerReport der(const DiarAnnotation& reference, const DiarAnnotation& hypothesis, double collar = 0.0);

// Sums the time components of per-file reports and recomputes der.
DerReport der_total(std::span<const DerReport> reports);

}  // namespace longform
