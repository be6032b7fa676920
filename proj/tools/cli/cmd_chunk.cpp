#include "common.hpp"

#include "longform/chunker.hpp"
#include "longform/ctc_io.hpp"
#include "longform/error.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <optional>

namespace longform::cli {
namespace {

constexpr int kTargetRate = 16000;

struct ChunkOptions {
    fs::path align_dir, audio_dir, out_dir;
    PipelineConfig cfg;
    std::string policy = "greedy";
    std::size_t lookback = kDefaultLookback;
    double pad = 0.0;
};

struct ChunkFile {
    std::string name;
    std::vector<std::uint8_t> wav;
    std::string transcript;
    std::string manifest_row;
    double duration = 0.0;
};

struct FileResult {
    std::string stem;
    std::optional<FileFailure> failure;
    std::vector<ChunkFile> chunks;
};

FileResult chunk_one(const ChunkOptions& o, const fs::path& jsonl) {
    FileResult r;
    r.stem = jsonl.stem().string();
    auto fail = [&](std::string kind, std::string detail) {
        r.chunks.clear();
        r.failure = FileFailure{r.stem, std::move(kind), std::move(detail)};
        return r;
    };

    const auto wav_path = o.audio_dir / (r.stem + ".wav");
    if (!fs::is_regular_file(wav_path)) return fail("missing_audio", "no " + r.stem + ".wav");
    std::vector<WordAlignment> words;
    try {
        words = parse_alignment_jsonl(read_text_file(jsonl));
    } catch (const std::exception& e) {
        return fail("malformed_alignment", e.what());
    }
    AudioBuffer audio;
    try {
        audio = resample(downmix_mono(read_wav(wav_path)), kTargetRate);
    } catch (const std::exception& e) {
        return fail("audio_error", e.what());
    }

    // Padding widens every slice, so words are packed against what is left.
    const double budget = o.cfg.max_chunk_duration - 2.0 * o.pad;
    std::vector<Chunk> chunks;
    try {
        chunks = chunk_words(words, budget, o.policy == "gap_biased" ? ChunkPolicy::gap_biased : ChunkPolicy::greedy,
                             o.lookback);
    } catch (const WordTooLong& e) {
        return fail("word_too_long", e.what());
    } catch (const InvalidArgument& e) {
        return fail("malformed_alignment", e.what());
    }

    const double rate = audio.sample_rate;
    for (std::size_t k = 0; k < chunks.size(); ++k) {
        const auto& c = chunks[k];
        AudioBuffer piece;
        try {
            piece = extract_chunk_audio(audio, c, o.pad);
        } catch (const ChunkOutOfRange& e) {
            return fail("chunk_out_of_range", e.what());
        }
        if (piece.samples.empty()) return fail("chunk_out_of_range", fmt::format("chunk {} has no samples", k));
        if (!(piece.duration() < o.cfg.max_chunk_duration))
            return fail("internal", fmt::format("chunk {} lasts {:.6f} s, not under {:.3f} s", k, piece.duration(),
                                                o.cfg.max_chunk_duration));
        const double a = static_cast<double>(std::clamp(std::llround((c.start - o.pad) * rate), 0LL,
                                                        static_cast<long long>(audio.samples.size()))) / rate;
        ChunkFile f;
        f.name = fmt::format("{}_{:04}", r.stem, k);
        f.wav = encode_wav(piece);
        f.transcript = c.transcript + "\n";
        f.duration = piece.duration();
        f.manifest_row = fmt::format("{},{},{},{},{}\n", csv_field(f.name), csv_field(wav_path.filename().string()),
                                     fixed(a, 3), fixed(a + piece.duration(), 3), csv_field(c.transcript));
        r.chunks.push_back(std::move(f));
    }
    return r;
}

int run_chunk(ChunkOptions& o, const GlobalOptions& g) {
    o.cfg.workers = g.workers;
    o.cfg.validate();
    if (!(o.pad >= 0.0)) throw UsageError("--pad must be non-negative");
    if (!(o.cfg.max_chunk_duration - 2.0 * o.pad > 0.0))
        throw UsageError("--pad leaves no room under --max-duration");
    require_directory(o.align_dir, "align_dir");
    require_directory(o.audio_dir, "audio_dir");
    make_output_dir(o.out_dir);

    const auto inputs = list_files(o.align_dir, ".jsonl");
    std::vector<FileResult> results(inputs.size());
    Progress progress(inputs.size());
    const auto n = static_cast<std::int64_t>(inputs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t k = 0; k < n; ++k) {
        auto& r = results[static_cast<std::size_t>(k)];
        r = chunk_one(o, inputs[static_cast<std::size_t>(k)]);
        try {
            for (const auto& f : r.chunks) {
                write_atomic(o.out_dir / (f.name + ".wav"), f.wav);
                write_atomic(o.out_dir / (f.name + ".txt"), f.transcript);
            }
        } catch (const std::exception& e) {
            r.failure = FileFailure{r.stem, "write_error", e.what()};
        }
        progress.tick();
    }

    std::string manifest = "chunk_id,source_file,start,end,transcript\n";
    std::vector<FileFailure> failures;
    std::size_t chunk_count = 0;
    double total = 0.0, longest = 0.0;
    for (const auto& r : results) {
        if (r.failure) {
            failures.push_back(*r.failure);
            continue;
        }
        for (const auto& f : r.chunks) {
            manifest += f.manifest_row;
            total += f.duration;
            longest = std::max(longest, f.duration);
            ++chunk_count;
        }
    }
    write_atomic(o.out_dir / "chunks.csv", manifest);
    write_atomic(o.out_dir / "failures.csv", failures_csv(failures));

    if (g.json) {
        nlohmann::json fj = nlohmann::json::array();
        for (const auto& f : failures) fj.push_back({{"file", f.file}, {"kind", f.kind}, {"detail", f.detail}});
        print_json({{"files", results.size()},
                    {"chunked", results.size() - failures.size()},
                    {"failed", failures.size()},
                    {"chunks", chunk_count},
                    {"total_duration", total},
                    {"longest_chunk", longest},
                    {"max_chunk_duration", o.cfg.max_chunk_duration},
                    {"failures", fj}});
    } else {
        fmt::print("{} chunks from {}/{} files, {:.3f} s total, longest {:.3f} s (limit {:.3f} s)\n", chunk_count,
                   results.size() - failures.size(), results.size(), total, longest, o.cfg.max_chunk_duration);
        for (const auto& f : failures) fmt::print("  {}: {}: {}\n", f.file, f.kind, f.detail);
    }
    return exit_status(g, !failures.empty());
}

}  // namespace

Command add_chunk(CLI::App& root, const GlobalOptions& g) {
    auto o = std::make_shared<ChunkOptions>();
    auto* app = root.add_subcommand("chunk", "Cut aligned recordings into word-preserving 16 kHz mono chunks");
    app->add_option("align_dir", o->align_dir, "Directory of <stem>.jsonl word alignments")->required();
    app->add_option("audio_dir", o->audio_dir, "Directory of <stem>.wav recordings")->required();
    app->add_option("out_dir", o->out_dir, "Receives chunk WAV/TXT pairs, chunks.csv and failures.csv")->required();
    app->add_option("--max-duration", o->cfg.max_chunk_duration, "Every chunk is strictly shorter than this (s)");
    app->add_option("--policy", o->policy, "Split policy")->check(CLI::IsMember({"greedy", "gap_biased"}));
    app->add_option("--lookback", o->lookback, "Words re-examined by gap_biased");
    app->add_option("--pad", o->pad, "Seconds of context added either side of each chunk");
    return {app, [o, &g] { return run_chunk(*o, g); }};
}

}  // namespace longform::cli
