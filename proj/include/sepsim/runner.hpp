#pragma once

#include <string>

#include "sepsim/config.hpp"

namespace sepsim {

// Executes the configured command and writes its CSV data files plus a
// JSON manifest under cfg.out_dir.  Returns 0 on success and 1 when a
// statistical or structural check failed; configuration problems throw
// ConfigError (the CLI maps those to exit 2).
int run(const RunConfig& cfg);

// Builds the configured environment (shared by the CLI and tests).
RateField build_environment(const RunConfig& cfg);

}  // namespace sepsim
