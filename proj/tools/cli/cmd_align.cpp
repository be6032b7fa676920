#include "common.hpp"

#include "longform/ctc_align.hpp"
#include "longform/ctc_io.hpp"
#include "longform/error.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <map>
#include <optional>

namespace longform::cli {
namespace {

struct AlignOptions {
    fs::path audio_dir, emissions_dir, transcripts_dir, out_dir;
    PipelineConfig cfg;
    std::string unknown = "skip";
    std::size_t band = 0;
};

struct FileResult {
    std::string stem;
    std::optional<FileFailure> failure;
    std::string jsonl;
    std::size_t words = 0;
    std::size_t skipped_words = 0;
    std::size_t skipped_graphemes = 0;
    double score = 0.0;
    double audio_duration = 0.0;
    double emission_duration = 0.0;
};

// <stem>.ctce is the binary format; <stem>.emis the text one.
std::optional<fs::path> find_emissions(const fs::path& dir, const std::string& stem) {
    for (const char* ext : {".ctce", ".emis"}) {
        auto p = dir / (stem + ext);
        if (fs::is_regular_file(p)) return p;
    }
    return std::nullopt;
}

FileResult align_one(const AlignOptions& o, const TokenTable& table, const fs::path& wav) {
    FileResult r;
    r.stem = wav.stem().string();
    auto fail = [&](std::string kind, std::string detail) {
        r.failure = FileFailure{r.stem, std::move(kind), std::move(detail)};
        return r;
    };

    try {
        r.audio_duration = read_wav_info(wav).duration();
    } catch (const std::exception& e) {
        return fail("audio_error", e.what());
    }
    const auto em_path = find_emissions(o.emissions_dir, r.stem);
    if (!em_path) return fail("missing_emissions", "no " + r.stem + ".ctce or " + r.stem + ".emis");
    const auto txt_path = o.transcripts_dir / (r.stem + ".txt");
    if (!fs::is_regular_file(txt_path)) return fail("missing_transcript", "no " + r.stem + ".txt");

    EmissionMatrix em;
    try {
        em = read_emissions(*em_path);
        if (o.cfg.frame_duration_override) em.frame_duration = o.cfg.frame_duration;
        em.validate();
    } catch (const std::exception& e) {
        return fail("malformed_emissions", e.what());
    }
    r.emission_duration = em.frame_duration * static_cast<double>(em.frames);
    if (r.emission_duration > r.audio_duration + em.frame_duration)
        return fail("duration_mismatch", fmt::format("emissions cover {:.3f} s, audio lasts {:.3f} s",
                                                     r.emission_duration, r.audio_duration));

    ViterbiOptions vopts;
    if (o.band > 0) vopts.band_half_width = o.band;
    AlignOutcome<ForcedAlignment> outcome;
    try {
        outcome = force_align(em, read_text_file(txt_path), table, vopts);
    } catch (const UnknownGrapheme& e) {
        return fail("unknown_grapheme", e.what());
    } catch (const InvalidArgument& e) {
        return fail("vocabulary_mismatch", e.what());
    }
    if (const auto* f = std::get_if<AlignmentFailure>(&outcome)) return fail(std::string(to_string(f->kind)), f->detail);

    const auto& fa = std::get<ForcedAlignment>(outcome);
    r.jsonl = format_alignment_jsonl(fa.words);
    r.words = fa.words.size();
    r.skipped_words = fa.skipped_words.size();
    r.skipped_graphemes = fa.skipped_graphemes;
    r.score = fa.score;
    return r;
}

int run_align(AlignOptions& o, const GlobalOptions& g) {
    o.cfg.workers = g.workers;
    o.cfg.validate();
    require_directory(o.audio_dir, "audio_dir");
    require_directory(o.emissions_dir, "emissions_dir");
    require_directory(o.transcripts_dir, "transcripts_dir");
    if (o.cfg.token_table.empty()) throw UsageError("a token table is required (--tokens or tokens = ... in [align])");
    require_file(o.cfg.token_table, "token table");
    make_output_dir(o.out_dir);

    const auto policy = o.unknown == "error" ? UnknownPolicy::error : UnknownPolicy::skip;
    const TokenTable table = TokenTable::load(o.cfg.token_table, policy);
    const auto wavs = list_files(o.audio_dir, ".wav");

    std::vector<FileResult> results(wavs.size());
    Progress progress(wavs.size());
    const auto n = static_cast<std::int64_t>(wavs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t k = 0; k < n; ++k) {
        auto& r = results[static_cast<std::size_t>(k)];
        r = align_one(o, table, wavs[static_cast<std::size_t>(k)]);
        const auto out = o.out_dir / (r.stem + ".jsonl");
        try {
            if (r.failure) {
                std::error_code ec;
                fs::remove(out, ec);
            } else {
                write_atomic(out, r.jsonl);
            }
        } catch (const std::exception& e) {
            r.failure = FileFailure{r.stem, "write_error", e.what()};
        }
        progress.tick();
    }

    std::vector<FileFailure> failures;
    std::map<std::string, std::size_t> kinds;
    nlohmann::json files = nlohmann::json::array();
    std::size_t aligned = 0, words = 0, skipped_words = 0, skipped_graphemes = 0;
    for (const auto& r : results) {
        nlohmann::json j{{"file", r.stem}, {"audio_duration", r.audio_duration}};
        if (r.failure) {
            failures.push_back(*r.failure);
            ++kinds[r.failure->kind];
            j["status"] = "failed";
            j["kind"] = r.failure->kind;
        } else {
            ++aligned;
            words += r.words;
            skipped_words += r.skipped_words;
            skipped_graphemes += r.skipped_graphemes;
            j["status"] = "aligned";
            j["words"] = r.words;
            j["skipped_words"] = r.skipped_words;
            j["skipped_graphemes"] = r.skipped_graphemes;
            j["score"] = r.score;
            j["emission_duration"] = r.emission_duration;
        }
        files.push_back(std::move(j));
    }
    const nlohmann::json summary{{"files", results.size()},
                                 {"aligned", aligned},
                                 {"failed", failures.size()},
                                 {"failure_kinds", kinds},
                                 {"words", words},
                                 {"skipped_words", skipped_words},
                                 {"skipped_graphemes", skipped_graphemes},
                                 {"results", files}};
    write_atomic(o.out_dir / "failures.csv", failures_csv(failures));
    write_atomic(o.out_dir / "summary.json", summary.dump(2) + "\n");

    if (g.json) {
        print_json(summary);
    } else {
        fmt::print("aligned {}/{} files, {} words", aligned, results.size(), words);
        if (skipped_words || skipped_graphemes)
            fmt::print(" ({} words and {} graphemes skipped as unknown)", skipped_words, skipped_graphemes);
        fmt::print("\n");
        for (const auto& [kind, count] : kinds) fmt::print("  {:<22} {}\n", kind, count);
    }
    return exit_status(g, !failures.empty());
}

}  // namespace

Command add_align(CLI::App& root, const GlobalOptions& g) {
    auto o = std::make_shared<AlignOptions>();
    auto* app = root.add_subcommand("align", "Forced word alignment of transcripts against CTC emissions");
    app->add_option("audio_dir", o->audio_dir, "Directory of <stem>.wav files")->required();
    app->add_option("emissions_dir", o->emissions_dir, "Directory of <stem>.ctce or <stem>.emis files")->required();
    app->add_option("transcripts_dir", o->transcripts_dir, "Directory of <stem>.txt files")->required();
    app->add_option("out_dir", o->out_dir, "Receives <stem>.jsonl, failures.csv and summary.json")->required();
    app->add_option("--tokens", o->cfg.token_table, "Token table, one grapheme<TAB>id per line");
    auto* fd = app->add_option("--frame-duration", o->cfg.frame_duration,
                               "Seconds per emission frame, overriding the emission files");
    app->add_option("--unknown", o->unknown, "Unknown grapheme policy")->check(CLI::IsMember({"skip", "error"}));
    app->add_option("--band", o->band, "Banded search half-width in trellis states; 0 searches exactly");
    return {app, [o, fd, &g] {
                o->cfg.frame_duration_override = fd->count() > 0;
                return run_align(*o, g);
            }};
}

}  // namespace longform::cli
