#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace longform {

struct ManifestEntry {
    std::filesystem::path path;
    double duration = 0.0;
    int sample_rate = 0;
    int channels = 0;
    bool has_transcript = false;
};

struct ManifestError {
    std::filesystem::path path;
    std::string message;
};

struct ManifestReport {
    // Successfully decoded audio files.
    std::size_t utterance_count = 0;
    double total_duration = 0.0;
    std::map<int, std::size_t> sample_rate_histogram;
    std::map<int, std::size_t> channel_histogram;
    // Files with duration >= limit.
    std::vector<std::filesystem::path> over_limit;
    std::vector<std::filesystem::path> missing_transcripts;
    std::vector<ManifestError> errors;
    // Per-file detail, ordered by path.
    std::vector<ManifestEntry> entries;
};

// Walks dir recursively for *.wav, pairs each with a same-stem *.txt beside
// it, and reads headers only. Decode errors are collected, never thrown.
// Files are inspected concurrently; the report is ordered by path.
ManifestReport scan_dataset(const std::filesystem::path& dir, double limit = 30.0);

}  // namespace longform
