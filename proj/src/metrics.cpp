#include "longform/metrics.hpp"
#include "longform/assignment.hpp"
#include "longform/error.hpp"
#include "longform/text_norm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>

namespace longform {
namespace {

using Tick = std::int64_t;
constexpr double kTicksPerSecond = 1e6;

Tick to_ticks(double seconds) { return std::llround(seconds * kTicksPerSecond); }
double to_seconds(Tick t) { return static_cast<double>(t) / kTicksPerSecond; }

struct Interval {
    Tick start;
    Tick end;
    std::size_t label;
};

// Collects the distinct labels (sorted) and the tick intervals of one side.
std::vector<Interval> intervals_of(const DiarAnnotation& a, std::vector<std::string>& labels) {
    std::map<std::string, std::size_t> index;
    for (const auto& s : a.segments) index.emplace(s.speaker, 0);
    labels.clear();
    for (auto& [name, idx] : index) {
        idx = labels.size();
        labels.push_back(name);
    }
    std::vector<Interval> out;
    for (const auto& s : a.segments) {
        const Tick b = to_ticks(s.start);
        const Tick e = to_ticks(s.start + s.duration);
        if (e > b) out.push_back({b, e, index.at(s.speaker)});
    }
    return out;
}

// activity[label][cell]
std::vector<std::vector<std::uint8_t>> activity(const std::vector<Interval>& ivs, std::size_t labels,
                                                const std::vector<Tick>& bounds) {
    const std::size_t cells = bounds.empty() ? 0 : bounds.size() - 1;
    std::vector<std::vector<std::uint8_t>> act(labels, std::vector<std::uint8_t>(cells, 0));
    for (const auto& iv : ivs) {
        const auto lo = static_cast<std::size_t>(std::lower_bound(bounds.begin(), bounds.end(), iv.start) - bounds.begin());
        const auto hi = static_cast<std::size_t>(std::lower_bound(bounds.begin(), bounds.end(), iv.end) - bounds.begin());
        for (std::size_t c = lo; c < hi; ++c) act[iv.label][c] = 1;
    }
    return act;
}

}  // namespace

WerReport wer_words(std::span<const std::string> reference, std::span<const std::string> hypothesis) {
    const std::size_t n = reference.size();
    const std::size_t m = hypothesis.size();
    std::vector<std::size_t> d((n + 1) * (m + 1));
    auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return d[i * (m + 1) + j]; };
    for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
    for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= m; ++j) {
            const std::size_t diag = at(i - 1, j - 1) + (reference[i - 1] == hypothesis[j - 1] ? 0 : 1);
            at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
        }

    WerReport r;
    r.reference_words = n;
    r.hypothesis_words = m;
    std::size_t i = n, j = m;
    while (i > 0 || j > 0) {
        if (i > 0 && j > 0) {
            const bool same = reference[i - 1] == hypothesis[j - 1];
            if (at(i, j) == at(i - 1, j - 1) + (same ? 0 : 1)) {
                if (!same) ++r.substitutions;
                --i;
                --j;
                continue;
            }
        }
        if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
            ++r.deletions;
            --i;
        } else {
            ++r.insertions;
            --j;
        }
    }
    r.degenerate_reference = n == 0;
    r.wer = static_cast<double>(r.errors()) / static_cast<double>(std::max<std::size_t>(n, 1));
    return r;
}

WerReport wer(std::string_view reference, std::string_view hypothesis) {
    const auto ref = split_words(normalize_transcript(reference));
    const auto hyp = split_words(normalize_transcript(hypothesis));
    return wer_words(ref, hyp);
}

WerReport wer_corpus(std::span<const std::pair<std::string, std::string>> pairs) {
    if (pairs.empty()) throw EmptyCorpus();
    std::vector<WerReport> each(pairs.size());
    const auto count = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t k = 0; k < count; ++k) {
        const auto& p = pairs[static_cast<std::size_t>(k)];
        each[static_cast<std::size_t>(k)] = wer(p.first, p.second);
    }
    WerReport total;
    for (const auto& r : each) {
        total.substitutions += r.substitutions;
        total.deletions += r.deletions;
        total.insertions += r.insertions;
        total.reference_words += r.reference_words;
        total.hypothesis_words += r.hypothesis_words;
    }
    total.degenerate_reference = total.reference_words == 0;
    total.wer = static_cast<double>(total.errors()) / static_cast<double>(std::max<std::size_t>(total.reference_words, 1));
    return total;
}

DerReport der(const DiarAnnotation& reference, const DiarAnnotation& hypothesis, double collar) {
    if (!(collar >= 0.0) || !std::isfinite(collar)) throw InvalidArgument("collar must be non-negative");
    std::vector<std::string> ref_labels, hyp_labels;
    const auto ref = intervals_of(reference, ref_labels);
    const auto hyp = intervals_of(hypothesis, hyp_labels);
    const Tick c = to_ticks(collar);

    std::vector<Tick> ref_bounds;
    for (const auto& iv : ref) {
        ref_bounds.push_back(iv.start);
        ref_bounds.push_back(iv.end);
    }
    std::sort(ref_bounds.begin(), ref_bounds.end());
    ref_bounds.erase(std::unique(ref_bounds.begin(), ref_bounds.end()), ref_bounds.end());

    std::vector<Tick> bounds = ref_bounds;
    for (const auto& iv : hyp) {
        bounds.push_back(iv.start);
        bounds.push_back(iv.end);
    }
    if (c > 0)
        for (Tick b : ref_bounds) {
            bounds.push_back(b - c);
            bounds.push_back(b + c);
        }
    std::sort(bounds.begin(), bounds.end());
    bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
    const std::size_t cells = bounds.empty() ? 0 : bounds.size() - 1;

    // A cell is unscored when its midpoint is strictly within the collar of a
    // reference boundary; the partition guarantees it is then wholly inside.
    std::vector<std::uint8_t> scored(cells, 1);
    if (c > 0)
        for (std::size_t k = 0; k < cells; ++k) {
            const Tick mid2 = bounds[k] + bounds[k + 1];
            auto it = std::lower_bound(ref_bounds.begin(), ref_bounds.end(), mid2 / 2);
            for (auto cand : {it, it == ref_bounds.begin() ? it : std::prev(it)}) {
                if (cand == ref_bounds.end()) continue;
                const Tick dist2 = mid2 > 2 * *cand ? mid2 - 2 * *cand : 2 * *cand - mid2;
                if (dist2 < 2 * c) scored[k] = 0;
            }
        }

    const auto ref_act = activity(ref, ref_labels.size(), bounds);
    const auto hyp_act = activity(hyp, hyp_labels.size(), bounds);

    std::vector<std::vector<Tick>> overlap(hyp_labels.size(), std::vector<Tick>(ref_labels.size(), 0));
    Tick missed = 0, false_alarm = 0, total = 0;
    std::vector<std::size_t> nref(cells, 0), nhyp(cells, 0);
    for (std::size_t k = 0; k < cells; ++k) {
        if (!scored[k]) continue;
        const Tick len = bounds[k + 1] - bounds[k];
        for (const auto& a : ref_act) nref[k] += a[k];
        for (const auto& a : hyp_act) nhyp[k] += a[k];
        total += len * static_cast<Tick>(nref[k]);
        if (nref[k] > nhyp[k]) missed += len * static_cast<Tick>(nref[k] - nhyp[k]);
        if (nhyp[k] > nref[k]) false_alarm += len * static_cast<Tick>(nhyp[k] - nref[k]);
        for (std::size_t h = 0; h < hyp_labels.size(); ++h) {
            if (!hyp_act[h][k]) continue;
            for (std::size_t r = 0; r < ref_labels.size(); ++r)
                if (ref_act[r][k]) overlap[h][r] += len;
        }
    }

    const auto assign = max_weight_assignment(overlap);
    DerReport report;
    std::vector<std::optional<std::size_t>> mapped(hyp_labels.size());
    for (std::size_t h = 0; h < assign.size(); ++h)
        if (assign[h] && overlap[h][*assign[h]] > 0) {
            mapped[h] = assign[h];
            report.mapping.emplace_back(hyp_labels[h], ref_labels[*assign[h]]);
        }

    Tick confusion = 0;
    for (std::size_t k = 0; k < cells; ++k) {
        if (!scored[k]) continue;
        std::size_t matched = 0;
        for (std::size_t h = 0; h < hyp_labels.size(); ++h)
            if (mapped[h] && hyp_act[h][k] && ref_act[*mapped[h]][k]) ++matched;
        const Tick len = bounds[k + 1] - bounds[k];
        confusion += len * static_cast<Tick>(std::min(nref[k], nhyp[k]) - matched);
    }

    report.missed = to_seconds(missed);
    report.false_alarm = to_seconds(false_alarm);
    report.confusion = to_seconds(confusion);
    report.total_reference = to_seconds(total);
    if (total > 0) report.der = static_cast<double>(missed + false_alarm + confusion) / static_cast<double>(total);
    return report;
}

DerReport der_total(std::span<const DerReport> reports) {
    DerReport total;
    for (const auto& r : reports) {
        total.missed += r.missed;
        total.false_alarm += r.false_alarm;
        total.confusion += r.confusion;
        total.total_reference += r.total_reference;
    }
    if (total.total_reference > 0.0)
        total.der = (total.missed + total.false_alarm + total.confusion) / total.total_reference;
    return total;
}

}  // namespace longform
