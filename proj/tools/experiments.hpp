#pragma once

#include <string>

#include "ini.hpp"

namespace cli {

struct RunOptions {
    std::string out_dir;
    int workers = 1;
    long long seed = -1;  // <0: keep the seed from the config
};

// Each runner writes its CSV/JSON outputs into opts.out_dir and returns the
// process exit code: 0 when every configured check passed, 1 otherwise.
// Configuration problems throw ConfigError/LibraryError (exit code 2).
int run_spectrum(const IniConfig& cfg, const RunOptions& opts);
int run_pimatrix(const IniConfig& cfg, const RunOptions& opts);
int run_decay(const IniConfig& cfg, const RunOptions& opts);
int run_sumrule(const IniConfig& cfg, const RunOptions& opts);
int run_perturb(const IniConfig& cfg, const RunOptions& opts);
int run_trace(const IniConfig& cfg, const RunOptions& opts);
int run_delta(const IniConfig& cfg, const RunOptions& opts);

}  // namespace cli
