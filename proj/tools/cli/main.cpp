#include "common.hpp"

#include "longform/error.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cstdio>
#include <thread>

using namespace longform::cli;

int main(int argc, char** argv) {
    CLI::App app{"Long-form speech data preparation: alignment, chunking, augmentation, diarization formats, scoring"};
    app.set_config("--config", "", "key = value defaults file; [command] sections hold per-command keys");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.fallthrough();
    app.require_subcommand(1);

    GlobalOptions g;
    g.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    app.add_flag("--json", g.json, "Print a JSON report instead of the text summary");
    app.add_flag("--strict", g.strict, "Exit 1 when any input file failed");
    app.add_option("--workers", g.workers, "Files processed in parallel")->check(CLI::PositiveNumber);

    const std::vector<Command> commands{add_align(app, g),    add_chunk(app, g),  add_csv2rttm(app, g),
                                        add_wer(app, g),      add_der(app, g),    add_vad(app, g),
                                        add_augment(app, g),  add_manifest(app, g), add_window(app, g)};

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    use_workers(g.workers);
    for (const auto& cmd : commands) {
        if (!cmd.app->parsed()) continue;
        try {
            return cmd.run();
        } catch (const UsageError& e) {
            fmt::print(stderr, "usage error: {}\n", e.what());
            return kExitUsage;
        } catch (const std::exception& e) {
            fmt::print(stderr, "error: {}\n", e.what());
            return kExitFailures;
        }
    }
    return kExitUsage;
}
