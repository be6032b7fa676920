#include "common.hpp"

#include "longform/chunker.hpp"
#include "longform/error.hpp"
#include "longform/random.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <optional>

namespace longform::cli {
namespace {

// ----------------------------------------------------------------- vad ----

struct VadOptions {
    fs::path audio, output;
    PipelineConfig cfg;
};

int run_vad(VadOptions& o, const GlobalOptions& g) {
    o.cfg.workers = g.workers;
    o.cfg.validate();
    require_file(o.audio, "audio");
    const auto buffer = downmix_mono(read_wav(o.audio));
    const auto speech = detect_speech(buffer, o.cfg.vad);

    double total = 0.0;
    std::string csv = "start,end\n";
    nlohmann::json intervals = nlohmann::json::array();
    for (const auto& s : speech) {
        total += s.end - s.start;
        csv += fixed(s.start, 3) + "," + fixed(s.end, 3) + "\n";
        intervals.push_back({{"start", s.start}, {"end", s.end}});
    }
    if (!o.output.empty()) {
        if (!o.output.parent_path().empty()) make_output_dir(o.output.parent_path());
        write_atomic(o.output, csv);
    }

    if (g.json) {
        print_json({{"file", o.audio.filename().string()},
                    {"duration", buffer.duration()},
                    {"speech_duration", total},
                    {"threshold_db", o.cfg.vad.threshold_db},
                    {"speech", intervals}});
    } else {
        for (const auto& s : speech) fmt::print("{} {}\n", fixed(s.start, 3), fixed(s.end, 3));
        fmt::print("speech {:.3f} s of {:.3f} s in {} intervals\n", total, buffer.duration(), speech.size());
    }
    return kExitOk;
}

// ------------------------------------------------------------- augment ----

struct AugmentOptions {
    fs::path in_dir, out_dir;
    PipelineConfig cfg;
};

struct AugmentRow {
    std::string file;
    std::uint64_t seed = 0;
    std::optional<double> gain_db;
    std::optional<FileFailure> failure;
};

int run_augment(AugmentOptions& o, const GlobalOptions& g) {
    o.cfg.workers = g.workers;
    o.cfg.validate();
    require_directory(o.in_dir, "in_dir");
    make_output_dir(o.out_dir);

    const auto wavs = list_files(o.in_dir, ".wav");
    std::vector<AugmentRow> rows(wavs.size());
    Progress progress(wavs.size());
    const auto n = static_cast<std::int64_t>(wavs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t k = 0; k < n; ++k) {
        const auto& path = wavs[static_cast<std::size_t>(k)];
        auto& row = rows[static_cast<std::size_t>(k)];
        row.file = path.filename().string();
        row.seed = derive_seed(o.cfg.gain.seed, path.stem().string());
        try {
            GainAugmentConfig cfg = o.cfg.gain;
            cfg.seed = row.seed;
            const auto result = augment_gain(read_wav(path), cfg);
            const auto dest = o.out_dir / path.filename();
            if (result.applied) {
                row.gain_db = result.gain_db;
                write_atomic(dest, encode_wav(result.buffer));
            } else {
                copy_atomic(path, dest);
            }
        } catch (const std::exception& e) {
            row.failure = FileFailure{row.file, "audio_error", e.what()};
        }
        progress.tick();
    }

    std::string log = "file,seed,applied,gain_db\n";
    std::vector<FileFailure> failures;
    std::size_t applied = 0;
    for (const auto& r : rows) {
        if (r.failure) {
            failures.push_back(*r.failure);
            continue;
        }
        applied += r.gain_db.has_value();
        log += fmt::format("{},{},{},{}\n", csv_field(r.file), r.seed, r.gain_db ? 1 : 0,
                           r.gain_db ? fixed(*r.gain_db, 6) : std::string());
    }
    write_atomic(o.out_dir / "augment_log.csv", log);
    write_atomic(o.out_dir / "failures.csv", failures_csv(failures));

    if (g.json) {
        print_json({{"files", rows.size()},
                    {"applied", applied},
                    {"failed", failures.size()},
                    {"probability", o.cfg.gain.probability},
                    {"min_db", o.cfg.gain.min_db},
                    {"max_db", o.cfg.gain.max_db},
                    {"seed", o.cfg.gain.seed}});
    } else {
        fmt::print("gain applied to {} of {} files (p = {}, {} to {} dB, seed {})\n", applied,
                   rows.size() - failures.size(), o.cfg.gain.probability, o.cfg.gain.min_db, o.cfg.gain.max_db,
                   o.cfg.gain.seed);
        for (const auto& f : failures) fmt::print("  {}: {}\n", f.file, f.detail);
    }
    return exit_status(g, !failures.empty());
}

}  // namespace

Command add_vad(CLI::App& root, const GlobalOptions& g) {
    auto o = std::make_shared<VadOptions>();
    auto* app = root.add_subcommand("vad", "Energy-based speech detection on one recording");
    app->add_option("audio", o->audio, "WAV file")->required();
    app->add_option("--frame-ms", o->cfg.vad.frame_ms, "Analysis frame length");
    app->add_option("--hop-ms", o->cfg.vad.hop_ms, "Frame hop");
    app->add_option("--threshold-db", o->cfg.vad.threshold_db, "Speech threshold in dBFS");
    app->add_option("--min-speech-ms", o->cfg.vad.min_speech_ms, "Shorter speech runs are dropped");
    app->add_option("--min-silence-ms", o->cfg.vad.min_silence_ms, "Shorter pauses are bridged");
    app->add_option("--out", o->output, "Also write the intervals as CSV");
    return {app, [o, &g] { return run_vad(*o, g); }};
}

Command add_augment(CLI::App& root, const GlobalOptions& g) {
    auto o = std::make_shared<AugmentOptions>();
    auto* app = root.add_subcommand("augment", "Seeded random gain augmentation over a directory of WAV files");
    app->add_option("in_dir", o->in_dir, "Directory of *.wav")->required();
    app->add_option("out_dir", o->out_dir, "Receives the files, augment_log.csv and failures.csv")->required();
    app->add_option("--seed", o->cfg.gain.seed, "Global seed; each file draws from hash(seed, stem)");
    app->add_option("--p", o->cfg.gain.probability, "Probability that a file is augmented");
    app->add_option("--min-db", o->cfg.gain.min_db, "Lowest gain");
    app->add_option("--max-db", o->cfg.gain.max_db, "Highest gain");
    return {app, [o, &g] { return run_augment(*o, g); }};
}

}  // namespace longform::cli
