// blochsum <experiment> --config <path> [--out DIR] [--workers N] [--seed S]
// Exit codes: 0 all checks passed, 1 a configured check failed, 2 usage or
// configuration error.
#include <CLI11.hpp>

#include <cstdio>
#include <functional>
#include <string>
#include <thread>

#include "experiments.hpp"
#include "ini.hpp"
#include "util.hpp"

namespace {

struct Command {
    const char* name;
    const char* help;
    int (*run)(const cli::IniConfig&, const cli::RunOptions&);
};

const Command kCommands[] = {
    {"spectrum", "band structure over a Brillouin grid", cli::run_spectrum},
    {"pimatrix", "velocity matrix elements at one quasi-momentum", cli::run_pimatrix},
    {"decay", "weight bounds, envelope fit, commutator norms", cli::run_decay},
    {"sumrule", "second-derivative sum rule and oscillation series", cli::run_sumrule},
    {"perturb", "fixed-point energy, curvature, nested sums", cli::run_perturb},
    {"trace", "Fermi-weighted trace per unit volume, two routes", cli::run_trace},
    {"delta", "semi-analytic point-interaction chain", cli::run_delta},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"periodic-operator experiment runner"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    int workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    long long seed = -1;

    const Command* selected = nullptr;
    for (const Command& cmd : kCommands) {
        CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
        sub->add_option("--config", config_path, "experiment config file")
            ->required();
        sub->add_option("--out", out_dir, "output directory (default: .)");
        sub->add_option("--workers", workers,
                        "worker threads (default: available parallelism)");
        sub->add_option("--seed", seed, "override the configured random seed");
        sub->callback([&selected, &cmd]() { selected = &cmd; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help/version exit 0, usage errors exit 2
    }

    try {
        cli::IniConfig cfg = cli::IniConfig::load(config_path);
        cli::RunOptions opts;
        opts.out_dir = out_dir;
        opts.workers = workers;
        opts.seed = seed;
        cli::ensure_directory(out_dir);
        return selected->run(cfg, opts);
    } catch (const cli::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const cli::LibraryError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
