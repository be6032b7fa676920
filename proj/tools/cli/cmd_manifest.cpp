#include "common.hpp"

#include "longform/manifest.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

namespace longform::cli {
namespace {

struct ManifestOptions {
    fs::path dir;
    double limit = 30.0;
    fs::path output;
};

std::string rel_path(const fs::path& p, const fs::path& base) { return p.lexically_relative(base).generic_string(); }

int run_manifest(const ManifestOptions& o, const GlobalOptions& g) {
    require_directory(o.dir, "dataset directory");
    if (!(o.limit > 0.0)) throw UsageError("--limit must be positive");
    const auto r = scan_dataset(o.dir, o.limit);

    nlohmann::json rates = nlohmann::json::object(), channels = nlohmann::json::object();
    for (const auto& [k, v] : r.sample_rate_histogram) rates[std::to_string(k)] = v;
    for (const auto& [k, v] : r.channel_histogram) channels[std::to_string(k)] = v;
    nlohmann::json over = nlohmann::json::array(), missing = nlohmann::json::array(), errors = nlohmann::json::array();
    for (const auto& p : r.over_limit) over.push_back(rel_path(p, o.dir));
    for (const auto& p : r.missing_transcripts) missing.push_back(rel_path(p, o.dir));
    for (const auto& e : r.errors) errors.push_back({{"file", rel_path(e.path, o.dir)}, {"message", e.message}});
    const nlohmann::json report{{"utterance_count", r.utterance_count},
                                {"total_duration", r.total_duration},
                                {"sample_rate_histogram", rates},
                                {"channel_histogram", channels},
                                {"limit", o.limit},
                                {"over_limit", over},
                                {"missing_transcripts", missing},
                                {"errors", errors}};
    if (!o.output.empty()) {
        std::string csv = "file,duration,sample_rate,channels,has_transcript\n";
        for (const auto& e : r.entries)
            csv += fmt::format("{},{},{},{},{}\n", csv_field(rel_path(e.path, o.dir)), fixed(e.duration, 6),
                               e.sample_rate, e.channels, e.has_transcript ? 1 : 0);
        if (!o.output.parent_path().empty()) make_output_dir(o.output.parent_path());
        write_atomic(o.output, csv);
    }

    if (g.json) {
        print_json(report);
    } else {
        std::string fmt_line;
        for (const auto& [ch, count] : r.channel_histogram)
            fmt_line += fmt::format("{}{} {}", fmt_line.empty() ? "" : ", ",
                                    ch == 1 ? "mono" : ch == 2 ? "stereo" : std::to_string(ch) + "-channel", count);
        std::string rate_line;
        for (const auto& [rate, count] : r.sample_rate_histogram)
            rate_line += fmt::format("{}{} Hz x {}", rate_line.empty() ? "" : ", ", rate, count);
        fmt::print("{:<20} {}\n", "Total Utterances", r.utterance_count);
        fmt::print("{:<20} {:.3f} s ({:.2f} h)\n", "Total Duration", r.total_duration, r.total_duration / 3600.0);
        fmt::print("{:<20} WAV ({})\n", "Audio Format", fmt_line.empty() ? "none" : fmt_line);
        fmt::print("{:<20} {}\n", "Sampling Rate", rate_line.empty() ? "none" : rate_line);
        fmt::print("{:<20} {} of {} under {:g} s\n", "Chunking Strategy", r.utterance_count - r.over_limit.size(),
                   r.utterance_count, o.limit);
        fmt::print("{:<20} {}\n", "Missing Transcripts", r.missing_transcripts.size());
        fmt::print("{:<20} {}\n", "Decode Errors", r.errors.size());
        for (const auto& p : r.over_limit) fmt::print("  over limit: {}\n", rel_path(p, o.dir));
        for (const auto& e : r.errors) fmt::print("  error: {}: {}\n", rel_path(e.path, o.dir), e.message);
    }
    return exit_status(g, !r.errors.empty());
}

}  // namespace

Command add_manifest(CLI::App& root, const GlobalOptions& g) {
    auto o = std::make_shared<ManifestOptions>();
    auto* app = root.add_subcommand("manifest", "Audit a chunked dataset directory");
    app->add_option("dir", o->dir, "Dataset root, scanned recursively for *.wav")->required();
    app->add_option("--limit", o->limit, "Duration at or above which a file is flagged (s)");
    app->add_option("--out", o->output, "Also write a per-file CSV");
    return {app, [o, &g] { return run_manifest(*o, g); }};
}

}  // namespace longform::cli
