#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace longform {

struct DiarSegment {
    double start = 0.0;
    double duration = 0.0;
    std::string speaker;

    double end() const { return start + duration; }
    bool operator==(const DiarSegment&) const = default;
};

struct DiarAnnotation {
    std::string file_id;
    std::vector<DiarSegment> segments;

    // Sorts by (start, speaker, duration), then checks the invariants.
    // Throws InvalidArgument.
    void normalize();
    bool operator==(const DiarAnnotation&) const = default;
};

// Same-speaker segments closer than this are treated as touching, not overlapping.
inline constexpr double kOverlapTolerance = 1e-6;

// Header must name start/end/speaker columns (case-insensitive; aliases
// start_time/end_time and begin/finish). An optional `file` column sets the
// file id, otherwise it is the file stem.
DiarAnnotation parse_csv(const std::filesystem::path& path);
DiarAnnotation parse_csv_text(std::string_view text, std::string file_id);

std::string to_rttm(const DiarAnnotation& annotation);
std::string to_rttm(const std::vector<DiarAnnotation>& annotations);

struct RttmParseResult {
    // One per file id, ordered by file id.
    std::vector<DiarAnnotation> annotations;
    std::size_t skipped_lines = 0;
};

RttmParseResult parse_rttm(std::string_view text);
RttmParseResult read_rttm(const std::filesystem::path& path);

struct AnnotationWindow {
    double start = 0.0;
    std::vector<DiarSegment> segments;  // relative to start
};

// Windows at 0, step, 2*step, ... while start + duration <= total_duration.
std::vector<AnnotationWindow> window_annotation(const DiarAnnotation& annotation, double duration, double step,
                                                double total_duration);

}  // namespace longform
