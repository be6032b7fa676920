#include "longform/diar_formats.hpp"
#include "longform/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace longform {
namespace {

struct SourcedSegment {
    DiarSegment seg;
    std::size_t line = 0;
};

bool segment_less(const DiarSegment& a, const DiarSegment& b) {
    if (a.start != b.start) return a.start < b.start;
    if (a.speaker != b.speaker) return a.speaker < b.speaker;
    return a.duration < b.duration;
}

bool has_whitespace(std::string_view s) {
    return s.find_first_of(" \t\r\n\v\f") != std::string_view::npos;
}

// Sorts, checks same-speaker overlap, and strips line numbers.
std::vector<DiarSegment> finalize(std::vector<SourcedSegment> segs) {
    std::stable_sort(segs.begin(), segs.end(),
                     [](const SourcedSegment& a, const SourcedSegment& b) { return segment_less(a.seg, b.seg); });
    std::map<std::string, const SourcedSegment*> last_by_speaker;
    for (const auto& s : segs) {
        auto [it, fresh] = last_by_speaker.try_emplace(s.seg.speaker, &s);
        if (!fresh) {
            if (s.seg.start < it->second->seg.end() - kOverlapTolerance)
                throw OverlapWithinSpeaker(it->second->line, s.line, s.seg.speaker);
            it->second = &s;
        }
    }
    std::vector<DiarSegment> out;
    out.reserve(segs.size());
    for (auto& s : segs) out.push_back(std::move(s.seg));
    return out;
}

bool parse_number(std::string_view s, double& out) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size() && std::isfinite(out);
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

// Splits one CSV record (RFC 4180 quoting); `pos` advances past the record.
// Returns nullopt at end of input.
std::optional<std::vector<std::string>> next_record(std::string_view text, std::size_t& pos, std::size_t& line) {
    if (pos >= text.size()) return std::nullopt;
    std::vector<std::string> fields(1);
    bool quoted = false;
    ++line;
    while (pos < text.size()) {
        const char c = text[pos++];
        if (quoted) {
            if (c == '"') {
                if (pos < text.size() && text[pos] == '"') {
                    fields.back().push_back('"');
                    ++pos;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                fields.back().push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else if (c == '\n') {
            break;
        } else if (c != '\r') {
            fields.back().push_back(c);
        }
    }
    if (quoted) throw MalformedRow(line, "unterminated quoted field");
    return fields;
}

std::string slurp_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

void DiarAnnotation::normalize() {
    std::vector<SourcedSegment> tmp;
    tmp.reserve(segments.size());
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& s = segments[i];
        if (!(s.start >= 0.0) || !(s.duration > 0.0) || s.speaker.empty() || has_whitespace(s.speaker))
            throw InvalidArgument("segment " + std::to_string(i) + " of '" + file_id + "' is invalid");
        tmp.push_back({s, i + 1});
    }
    segments = finalize(std::move(tmp));
}

DiarAnnotation parse_csv_text(std::string_view text, std::string file_id) {
    if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
    std::size_t pos = 0;
    std::size_t line = 0;
    auto header = next_record(text, pos, line);
    if (!header) throw MissingColumn("start");

    std::optional<std::size_t> c_start, c_end, c_speaker, c_file;
    for (std::size_t i = 0; i < header->size(); ++i) {
        const std::string name = lower(trim((*header)[i]));
        if (name == "start" || name == "start_time" || name == "begin") c_start = c_start.value_or(i);
        else if (name == "end" || name == "end_time" || name == "finish") c_end = c_end.value_or(i);
        else if (name == "speaker") c_speaker = c_speaker.value_or(i);
        else if (name == "file") c_file = c_file.value_or(i);
    }
    if (!c_start) throw MissingColumn("start");
    if (!c_end) throw MissingColumn("end");
    if (!c_speaker) throw MissingColumn("speaker");

    DiarAnnotation ann;
    ann.file_id = std::move(file_id);
    bool file_from_column = false;
    std::vector<SourcedSegment> segs;
    while (auto rec = next_record(text, pos, line)) {
        const std::size_t rec_line = line;
        if (rec->size() == 1 && trim((*rec)[0]).empty()) continue;
        const std::size_t need = std::max({*c_start, *c_end, *c_speaker, c_file.value_or(0)}) + 1;
        if (rec->size() < need) throw MalformedRow(rec_line, "expected at least " + std::to_string(need) + " fields");
        double start = 0.0, end = 0.0;
        if (!parse_number((*rec)[*c_start], start)) throw MalformedRow(rec_line, "bad start time");
        if (!parse_number((*rec)[*c_end], end)) throw MalformedRow(rec_line, "bad end time");
        if (start < 0.0) throw MalformedRow(rec_line, "negative start time");
        if (!(end > start)) throw MalformedRow(rec_line, "end must be greater than start");
        std::string speaker = trim((*rec)[*c_speaker]);
        if (speaker.empty() || has_whitespace(speaker)) throw MalformedRow(rec_line, "speaker label empty or has spaces");
        if (c_file) {
            std::string f = trim((*rec)[*c_file]);
            if (f.empty() || has_whitespace(f)) throw MalformedRow(rec_line, "file id empty or has spaces");
            if (!file_from_column) {
                ann.file_id = f;
                file_from_column = true;
            } else if (f != ann.file_id) {
                throw MalformedRow(rec_line, "file column changes from '" + ann.file_id + "' to '" + f + "'");
            }
        }
        segs.push_back({{start, end - start, std::move(speaker)}, rec_line});
    }
    ann.segments = finalize(std::move(segs));
    return ann;
}

DiarAnnotation parse_csv(const std::filesystem::path& path) {
    return parse_csv_text(slurp_text(path), path.stem().string());
}

std::string to_rttm(const DiarAnnotation& annotation) {
    std::string out;
    for (const auto& s : annotation.segments)
        out += fmt::format("SPEAKER {} 1 {:.3f} {:.3f} <NA> <NA> {} <NA> <NA>\n", annotation.file_id, s.start,
                           s.duration, s.speaker);
    return out;
}

std::string to_rttm(const std::vector<DiarAnnotation>& annotations) {
    std::string out;
    for (const auto& a : annotations) out += to_rttm(a);
    return out;
}

RttmParseResult parse_rttm(std::string_view text) {
    std::map<std::string, std::vector<SourcedSegment>> by_file;
    RttmParseResult result;
    std::size_t pos = 0;
    std::size_t lineno = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++lineno;
        std::vector<std::string_view> f;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            std::size_t j = i;
            while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
            if (j > i) f.push_back(line.substr(i, j - i));
            i = j;
        }
        if (f.empty() || f[0].starts_with(";;")) continue;
        if (f.size() < 9) throw MalformedRttmLine(lineno, "expected at least 9 fields, got " + std::to_string(f.size()));
        if (f[0] != "SPEAKER") {
            ++result.skipped_lines;
            continue;
        }
        double start = 0.0, dur = 0.0;
        if (!parse_number(f[3], start) || start < 0.0) throw MalformedRttmLine(lineno, "bad onset");
        if (!parse_number(f[4], dur) || !(dur > 0.0)) throw MalformedRttmLine(lineno, "bad duration");
        by_file[std::string(f[1])].push_back({{start, dur, std::string(f[7])}, lineno});
    }
    for (auto& [file, segs] : by_file) result.annotations.push_back({file, finalize(std::move(segs))});
    return result;
}

RttmParseResult read_rttm(const std::filesystem::path& path) { return parse_rttm(slurp_text(path)); }

std::vector<AnnotationWindow> window_annotation(const DiarAnnotation& annotation, double duration, double step,
                                                double total_duration) {
    if (!(duration > 0.0) || !(step > 0.0)) throw InvalidArgument("window duration and step must be positive");
    if (!(total_duration >= duration))
        throw InvalidArgument("total duration " + std::to_string(total_duration) + " s is shorter than one window");
    constexpr double eps = 1e-9;
    std::vector<AnnotationWindow> out;
    for (std::size_t k = 0;; ++k) {
        const double ws = static_cast<double>(k) * step;
        const double we = ws + duration;
        if (we > total_duration + eps) break;
        AnnotationWindow w;
        w.start = ws;
        for (const auto& s : annotation.segments) {
            const double lo = std::max(s.start, ws);
            const double hi = std::min(s.end(), we);
            if (hi - lo > eps) w.segments.push_back({lo - ws, hi - lo, s.speaker});
        }
        out.push_back(std::move(w));
    }
    return out;
}

}  // namespace longform
