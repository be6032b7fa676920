#include "common.hpp"

#include "longform/metrics.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

namespace longform::cli {
namespace {

struct WerOptions {
    fs::path reference, hypothesis;
    bool corpus = false;
};

nlohmann::json wer_json(const WerReport& r) {
    return {{"substitutions", r.substitutions},     {"deletions", r.deletions},
            {"insertions", r.insertions},           {"reference_words", r.reference_words},
            {"hypothesis_words", r.hypothesis_words}, {"wer", r.wer},
            {"degenerate_reference", r.degenerate_reference}};
}

void print_table(const WerReport& r) {
    fmt::print("substitutions     {}\n", r.substitutions);
    fmt::print("deletions         {}\n", r.deletions);
    fmt::print("insertions        {}\n", r.insertions);
    fmt::print("reference words   {}\n", r.reference_words);
    fmt::print("hypothesis words  {}\n", r.hypothesis_words);
    if (r.degenerate_reference) fmt::print("note              empty reference\n");
    fmt::print("wer {}\n", fixed(r.wer, 4));
}

int run_wer(const WerOptions& o, const GlobalOptions& g) {
    if (!o.corpus) {
        require_file(o.reference, "reference");
        require_file(o.hypothesis, "hypothesis");
        const auto r = wer(read_text_file(o.reference), read_text_file(o.hypothesis));
        if (g.json)
            print_json(wer_json(r));
        else
            print_table(r);
        return kExitOk;
    }

    // Corpus mode pairs <stem>.txt across two directories.
    require_directory(o.reference, "reference directory");
    require_directory(o.hypothesis, "hypothesis directory");
    const auto refs = list_files(o.reference, ".txt");
    std::vector<std::pair<std::string, std::string>> pairs;
    std::vector<std::string> missing;
    for (const auto& p : refs) {
        const auto h = o.hypothesis / p.filename();
        std::string hyp;
        if (fs::is_regular_file(h))
            hyp = read_text_file(h);
        else
            missing.push_back(p.stem().string());
        pairs.emplace_back(read_text_file(p), std::move(hyp));
    }
    const auto total = wer_corpus(pairs);

    if (g.json) {
        nlohmann::json files = nlohmann::json::array();
        for (std::size_t i = 0; i < refs.size(); ++i) {
            auto j = wer_json(wer(pairs[i].first, pairs[i].second));
            j["file"] = refs[i].stem().string();
            files.push_back(std::move(j));
        }
        print_json({{"total", wer_json(total)}, {"files", files}, {"missing_hypotheses", missing}});
    } else {
        fmt::print("pairs             {}\n", pairs.size());
        if (!missing.empty()) fmt::print("missing hyps      {} (scored as empty)\n", missing.size());
        print_table(total);
    }
    return exit_status(g, !missing.empty());
}

}  // namespace

Command add_wer(CLI::App& root, const GlobalOptions& g) {
    auto o = std::make_shared<WerOptions>();
    auto* app = root.add_subcommand("wer", "Word error rate of a hypothesis transcript");
    app->add_option("reference", o->reference, "Reference text (a directory with --corpus)")->required();
    app->add_option("hypothesis", o->hypothesis, "Hypothesis text (a directory with --corpus)")->required();
    app->add_flag("--corpus", o->corpus, "Pool counts over same-named .txt files in two directories");
    return {app, [o, &g] { return run_wer(*o, g); }};
}

}  // namespace longform::cli
