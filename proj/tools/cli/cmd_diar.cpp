#include "common.hpp"

#include "longform/diar_formats.hpp"
#include "longform/error.hpp"
#include "longform/metrics.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <optional>
#include <set>

namespace longform::cli {
namespace {

nlohmann::json failures_json(const std::vector<FileFailure>& failures) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& f : failures) j.push_back({{"file", f.file}, {"kind", f.kind}, {"detail", f.detail}});
    return j;
}

std::string describe(const std::exception& e) {
    if (dynamic_cast<const MissingColumn*>(&e)) return "missing_column";
    if (dynamic_cast<const OverlapWithinSpeaker*>(&e)) return "overlap_within_speaker";
    if (dynamic_cast<const MalformedRow*>(&e)) return "malformed_row";
    if (dynamic_cast<const IoFailure*>(&e)) return "io_error";
    return "error";
}

// ------------------------------------------------------------ csv2rttm ----

struct Csv2RttmOptions {
    fs::path input, output;
};

int run_csv2rttm(const Csv2RttmOptions& o, const GlobalOptions& g) {
    std::vector<fs::path> inputs;
    if (fs::is_directory(o.input)) {
        inputs = list_files(o.input, ".csv");
    } else {
        require_file(o.input, "csv input");
        inputs.push_back(o.input);
    }

    std::vector<std::optional<DiarAnnotation>> parsed(inputs.size());
    std::vector<std::optional<FileFailure>> errors(inputs.size());
    const auto n = static_cast<std::int64_t>(inputs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t k = 0; k < n; ++k) {
        const auto i = static_cast<std::size_t>(k);
        try {
            parsed[i] = parse_csv(inputs[i]);
        } catch (const std::exception& e) {
            errors[i] = FileFailure{inputs[i].filename().string(), describe(e), e.what()};
        }
    }

    std::vector<FileFailure> failures;
    std::vector<DiarAnnotation> annotations;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (errors[i]) {
            failures.push_back(*errors[i]);
        } else if (!seen.insert(parsed[i]->file_id).second) {
            failures.push_back({inputs[i].filename().string(), "duplicate_file_id",
                                "file id '" + parsed[i]->file_id + "' already converted"});
        } else {
            annotations.push_back(std::move(*parsed[i]));
        }
    }
    std::sort(annotations.begin(), annotations.end(),
              [](const auto& a, const auto& b) { return a.file_id < b.file_id; });
    const std::string rttm = to_rttm(annotations);
    if (!o.output.parent_path().empty()) make_output_dir(o.output.parent_path());
    write_atomic(o.output, rttm);

    std::size_t segments = 0;
    for (const auto& a : annotations) segments += a.segments.size();
    if (g.json) {
        print_json({{"inputs", inputs.size()},
                    {"converted", annotations.size()},
                    {"segments", segments},
                    {"output", o.output.string()},
                    {"failures", failures_json(failures)}});
    } else {
        fmt::print("wrote {} segments from {}/{} files to {}\n", segments, annotations.size(), inputs.size(),
                   o.output.string());
        for (const auto& f : failures) fmt::print("  {}: {}: {}\n", f.file, f.kind, f.detail);
    }
    return exit_status(g, !failures.empty());
}

// ----------------------------------------------------------------- der ----

struct DerOptions {
    fs::path reference, hypothesis;
    PipelineConfig cfg;
};

nlohmann::json der_json(const DerReport& r) {
    nlohmann::json mapping = nlohmann::json::array();
    for (const auto& [h, ref] : r.mapping) mapping.push_back({{"hypothesis", h}, {"reference", ref}});
    return {{"missed", r.missed},
            {"false_alarm", r.false_alarm},
            {"confusion", r.confusion},
            {"total_reference", r.total_reference},
            {"der", r.der ? nlohmann::json(*r.der) : nlohmann::json(nullptr)},
            {"mapping", mapping}};
}

int run_der(DerOptions& o, const GlobalOptions& g) {
    o.cfg.workers = g.workers;
    o.cfg.validate();
    require_file(o.reference, "reference rttm");
    require_file(o.hypothesis, "hypothesis rttm");
    const auto ref = read_rttm(o.reference);
    const auto hyp = read_rttm(o.hypothesis);

    std::map<std::string, DiarAnnotation> refs, hyps;
    for (const auto& a : ref.annotations) refs[a.file_id] = a;
    for (const auto& a : hyp.annotations) hyps[a.file_id] = a;
    std::vector<std::string> ids;
    for (const auto& [id, _] : refs) ids.push_back(id);
    for (const auto& [id, _] : hyps)
        if (!refs.count(id)) ids.push_back(id);
    std::sort(ids.begin(), ids.end());

    std::vector<DerReport> reports(ids.size());
    const auto n = static_cast<std::int64_t>(ids.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t k = 0; k < n; ++k) {
        const auto& id = ids[static_cast<std::size_t>(k)];
        const auto r = refs.find(id);
        const auto h = hyps.find(id);
        reports[static_cast<std::size_t>(k)] = der(r != refs.end() ? r->second : DiarAnnotation{id, {}},
                                                   h != hyps.end() ? h->second : DiarAnnotation{id, {}}, o.cfg.collar);
    }
    const auto total = der_total(reports);

    if (g.json) {
        nlohmann::json files = nlohmann::json::array();
        for (std::size_t i = 0; i < ids.size(); ++i) {
            auto j = der_json(reports[i]);
            j["file"] = ids[i];
            files.push_back(std::move(j));
        }
        auto t = der_json(total);
        t.erase("mapping");
        print_json({{"collar", o.cfg.collar},
                    {"files", files},
                    {"total", t},
                    {"skipped_lines", {{"reference", ref.skipped_lines}, {"hypothesis", hyp.skipped_lines}}}});
    } else {
        auto show = [](const std::optional<double>& d) { return d ? fixed(*d, 3) : std::string("n/a"); };
        fmt::print("{:<24} {:>10} {:>10} {:>10} {:>10} {:>7}\n", "file", "missed", "false_alarm", "confusion",
                   "reference", "der");
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const auto& r = reports[i];
            fmt::print("{:<24} {:>10.3f} {:>10.3f} {:>10.3f} {:>10.3f} {:>7}\n", ids[i], r.missed, r.false_alarm,
                       r.confusion, r.total_reference, show(r.der));
        }
        fmt::print("der {}\n", show(total.der));
    }
    return kExitOk;
}

// -------------------------------------------------------------- window ----

struct WindowOptions {
    fs::path rttm, output;
    double duration = 5.0;
    double step = 0.0;
    double total = 0.0;
};

int run_window(const WindowOptions& o, const GlobalOptions& g) {
    require_file(o.rttm, "rttm");
    const double step = o.step > 0.0 ? o.step : o.duration;
    if (!(o.duration > 0.0)) throw UsageError("--duration must be positive");
    if (o.step < 0.0) throw UsageError("--step must be positive");
    const auto parsed = read_rttm(o.rttm);

    std::vector<FileFailure> failures;
    std::vector<DiarAnnotation> out;
    nlohmann::json files = nlohmann::json::array();
    for (const auto& a : parsed.annotations) {
        double total = o.total;
        if (total <= 0.0)
            for (const auto& s : a.segments) total = std::max(total, s.end());
        std::vector<AnnotationWindow> wins;
        try {
            wins = window_annotation(a, o.duration, step, total);
        } catch (const InvalidArgument& e) {
            failures.push_back({a.file_id, "too_short", e.what()});
            continue;
        }
        nlohmann::json wj = nlohmann::json::array();
        for (std::size_t k = 0; k < wins.size(); ++k) {
            DiarAnnotation w{fmt::format("{}_{:04}", a.file_id, k), wins[k].segments};
            wj.push_back({{"id", w.file_id}, {"start", wins[k].start}, {"segments", w.segments.size()}});
            out.push_back(std::move(w));
        }
        files.push_back({{"file", a.file_id}, {"total_duration", total}, {"windows", wj}});
    }
    const std::string rttm = to_rttm(out);
    if (!o.output.empty()) {
        if (!o.output.parent_path().empty()) make_output_dir(o.output.parent_path());
        write_atomic(o.output, rttm);
    }

    if (g.json) {
        print_json({{"duration", o.duration}, {"step", step}, {"files", files}, {"failures", failures_json(failures)}});
    } else if (o.output.empty()) {
        fmt::print("{}", rttm);
    } else {
        fmt::print("wrote {} windows to {}\n", out.size(), o.output.string());
    }
    for (const auto& f : failures) fmt::print(stderr, "{}: {}: {}\n", f.file, f.kind, f.detail);
    return exit_status(g, !failures.empty());
}

}  // namespace

Command add_csv2rttm(CLI::App& root, const GlobalOptions& g) {
    auto o = std::make_shared<Csv2RttmOptions>();
    auto* app = root.add_subcommand("csv2rttm", "Convert diarization CSV annotations to RTTM");
    app->add_option("input", o->input, "A CSV file or a directory of *.csv")->required();
    app->add_option("output", o->output, "RTTM file to write")->required();
    return {app, [o, &g] { return run_csv2rttm(*o, g); }};
}

Command add_der(CLI::App& root, const GlobalOptions& g) {
    auto o = std::make_shared<DerOptions>();
    auto* app = root.add_subcommand("der", "Diarization error rate between two RTTM files");
    app->add_option("reference", o->reference, "Reference RTTM")->required();
    app->add_option("hypothesis", o->hypothesis, "Hypothesis RTTM")->required();
    app->add_option("--collar", o->cfg.collar, "Seconds excluded either side of each reference boundary");
    return {app, [o, &g] { return run_der(*o, g); }};
}

Command add_window(CLI::App& root, const GlobalOptions& g) {
    auto o = std::make_shared<WindowOptions>();
    auto* app = root.add_subcommand("window", "Cut RTTM annotations into fixed-length training windows");
    app->add_option("rttm", o->rttm, "Input RTTM")->required();
    app->add_option("--duration", o->duration, "Window length (s)");
    app->add_option("--step", o->step, "Window hop (s); defaults to the duration");
    app->add_option("--total", o->total, "Recording length (s); defaults to the last segment end");
    app->add_option("--out", o->output, "Write the windowed RTTM here instead of stdout");
    return {app, [o, &g] { return run_window(*o, g); }};
}

}  // namespace longform::cli
