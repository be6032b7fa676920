#include "longform/manifest.hpp"
#include "longform/audio.hpp"
#include "longform/error.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>

namespace longform {

ManifestReport scan_dataset(const std::filesystem::path& dir, double limit) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw IoFailure("not a readable directory: " + dir.string());

    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".wav") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());

    struct Probe {
        std::optional<ManifestEntry> entry;
        std::string error;
    };
    std::vector<Probe> probes(files.size());
    const auto n = static_cast<std::int64_t>(files.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t k = 0; k < n; ++k) {
        const auto& path = files[static_cast<std::size_t>(k)];
        Probe& p = probes[static_cast<std::size_t>(k)];
        try {
            const WavInfo info = read_wav_info(path);
            auto txt = path;
            txt.replace_extension(".txt");
            std::error_code tec;
            p.entry = ManifestEntry{path, info.duration(), info.sample_rate, info.channels,
                                    fs::is_regular_file(txt, tec)};
        } catch (const std::exception& e) {
            p.error = e.what();
        }
    }

    ManifestReport report;
    for (std::size_t k = 0; k < files.size(); ++k) {
        auto& p = probes[k];
        if (!p.entry) {
            report.errors.push_back({files[k], p.error});
            continue;
        }
        const auto& e = *p.entry;
        ++report.utterance_count;
        report.total_duration += e.duration;
        ++report.sample_rate_histogram[e.sample_rate];
        ++report.channel_histogram[e.channels];
        if (e.duration >= limit) report.over_limit.push_back(e.path);
        if (!e.has_transcript) report.missing_transcripts.push_back(e.path);
        report.entries.push_back(e);
    }
    return report;
}

}  // namespace longform
