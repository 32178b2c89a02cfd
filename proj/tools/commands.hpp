#pragma once

#include <string>

#include "config.hpp"
#include "output.hpp"

namespace plasmonqd::cli {

// Each command writes its files into out and returns the exit status it wants:
// 0 on success, 2 when a verification tolerance is exceeded. Errors are thrown.
int cmd_spectrum(const RunConfig& cfg, OutputDir& out);
int cmd_peaks(const RunConfig& cfg, OutputDir& out);
int cmd_concurrence_map(const RunConfig& cfg, OutputDir& out);
int cmd_phase(const RunConfig& cfg, OutputDir& out);
int cmd_oracle_verify(const RunConfig& cfg, OutputDir& out);
int cmd_storage(const RunConfig& cfg, OutputDir& out);

bool known_experiment(const std::string& name);

// Validates, runs cfg.experiment into cfg.out and writes the manifest last.
int run_experiment(const RunConfig& cfg);

}  // namespace plasmonqd::cli
