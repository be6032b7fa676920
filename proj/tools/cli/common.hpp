#pragma once

#include "longform/audio.hpp"
#include "longform/chunker.hpp"

#include <json.hpp>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace CLI {
class App;
}

namespace longform::cli {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailures = 1;
inline constexpr int kExitUsage = 2;

// Bad flags, bad config values, missing input directories.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GlobalOptions {
    bool json = false;
    bool strict = false;
    int workers = 1;
};

// Settings shared by the pipeline stages. Values come from flags, then the
// --config file, then these defaults.
struct PipelineConfig {
    double max_chunk_duration = kDefaultMaxChunkDuration;
    double frame_duration = 0.02;
    bool frame_duration_override = false;
    VadConfig vad;
    GainAugmentConfig gain;
    double collar = 0.0;
    int workers = 1;
    fs::path token_table;

    // Throws UsageError.
    void validate() const;
};

struct Command {
    CLI::App* app = nullptr;
    std::function<int()> run;
};

Command add_align(CLI::App& root, const GlobalOptions& g);
Command add_chunk(CLI::App& root, const GlobalOptions& g);
Command add_csv2rttm(CLI::App& root, const GlobalOptions& g);
Command add_wer(CLI::App& root, const GlobalOptions& g);
Command add_der(CLI::App& root, const GlobalOptions& g);
Command add_vad(CLI::App& root, const GlobalOptions& g);
Command add_augment(CLI::App& root, const GlobalOptions& g);
Command add_manifest(CLI::App& root, const GlobalOptions& g);
Command add_window(CLI::App& root, const GlobalOptions& g);

// One row of failures.csv.
struct FileFailure {
    std::string file;
    std::string kind;
    std::string detail;
};

std::string failures_csv(std::vector<FileFailure> rows);

// Writes to a sibling temp file and renames it into place.
void write_atomic(const fs::path& path, std::string_view data);
void write_atomic(const fs::path& path, std::span<const std::uint8_t> data);
void copy_atomic(const fs::path& from, const fs::path& to);

std::string read_text_file(const fs::path& path);

// Regular files directly inside dir with the given extension, sorted by name.
std::vector<fs::path> list_files(const fs::path& dir, std::string_view extension);

void require_directory(const fs::path& dir, std::string_view role);
void require_file(const fs::path& file, std::string_view role);
void make_output_dir(const fs::path& dir);

// RFC 4180 field: quoted only when it contains a comma, quote or newline.
std::string csv_field(std::string_view s);

std::string fixed(double value, int decimals);

void print_json(const nlohmann::json& j);

// Sets the OpenMP team size used by the batch loops.
void use_workers(int workers);

// A "k/n" line on stderr when stderr is a terminal.
class Progress {
public:
    explicit Progress(std::size_t total);
    void tick();

private:
    std::atomic<std::size_t> done_{0};
    std::size_t total_;
    bool enabled_;
};

int exit_status(const GlobalOptions& g, bool any_failed);

}  // namespace longform::cli
