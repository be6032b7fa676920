#include "common.hpp"

#include "longform/error.hpp"

#include <fmt/format.h>
#include <omp.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace longform::cli {

void PipelineConfig::validate() const {
    if (!(max_chunk_duration > 0.0) || !std::isfinite(max_chunk_duration))
        throw UsageError("max chunk duration must be positive");
    if (!(frame_duration > 0.0) || !std::isfinite(frame_duration)) throw UsageError("frame duration must be positive");
    if (!(collar >= 0.0) || !std::isfinite(collar)) throw UsageError("collar must be non-negative");
    if (workers < 1) throw UsageError("--workers must be at least 1");
    try {
        vad.validate();
        gain.validate();
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
}

std::string failures_csv(std::vector<FileFailure> rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.file < b.file; });
    std::string out = "file,kind,detail\n";
    for (const auto& r : rows) out += csv_field(r.file) + "," + csv_field(r.kind) + "," + csv_field(r.detail) + "\n";
    return out;
}

namespace {

fs::path temp_sibling(const fs::path& path) {
    return path.parent_path() / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
}

void commit(const fs::path& tmp, const fs::path& path) {
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoFailure("cannot move " + tmp.string() + " to " + path.string());
    }
}

}  // namespace

void write_atomic(const fs::path& path, std::string_view data) {
    write_atomic(path, std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

void write_atomic(const fs::path& path, std::span<const std::uint8_t> data) {
    const auto tmp = temp_sibling(path);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoFailure("cannot open " + tmp.string() + " for writing");
        out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
        out.flush();
        if (!out) throw IoFailure("write error on " + tmp.string());
    }
    commit(tmp, path);
}

void copy_atomic(const fs::path& from, const fs::path& to) {
    const auto tmp = temp_sibling(to);
    std::error_code ec;
    fs::copy_file(from, tmp, fs::copy_options::overwrite_existing, ec);
    if (ec) throw IoFailure("cannot copy " + from.string() + ": " + ec.message());
    commit(tmp, to);
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<fs::path> list_files(const fs::path& dir, std::string_view extension) {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == extension) out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

void require_directory(const fs::path& dir, std::string_view role) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw UsageError(fmt::format("{} '{}' is not a directory", role, dir.string()));
}

void require_file(const fs::path& file, std::string_view role) {
    std::error_code ec;
    if (!fs::is_regular_file(file, ec)) throw UsageError(fmt::format("{} '{}' is not a file", role, file.string()));
}

void make_output_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoFailure("cannot create output directory " + dir.string());
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string fixed(double value, int decimals) { return fmt::format("{:.{}f}", value, decimals); }

void print_json(const nlohmann::json& j) { std::cout << j.dump(2) << '\n'; }

void use_workers(int workers) { omp_set_num_threads(std::max(1, workers)); }

Progress::Progress(std::size_t total) : total_(total), enabled_(::isatty(STDERR_FILENO) != 0) {}

void Progress::tick() {
    const std::size_t k = done_.fetch_add(1) + 1;
    if (enabled_) std::fprintf(stderr, "\r%zu/%zu%s", k, total_, k == total_ ? "\n" : "");
}

int exit_status(const GlobalOptions& g, bool any_failed) { return g.strict && any_failed ? kExitFailures : kExitOk; }

}  // namespace longform::cli
