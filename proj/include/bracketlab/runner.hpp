#pragma once
// Experiment dispatch: runs one named experiment from a config, writes CSV
// and verdict JSON artifacts, and reports the documented exit status.

#include <string>

#include "bracketlab/io.hpp"

namespace bracketlab {

struct RunResult {
  int exit_code = 0;    // 0 pass, 1 tolerance failure
  std::string summary;  // printed by the front end
};

// throws config_error on bad configuration; numeric failures propagate
RunResult run_experiment(const ExperimentConfig& cfg);

// exception-absorbing wrapper: config problems exit 2, numeric failures 3
RunResult safe_run(const ExperimentConfig& cfg);

// cfg.out_dir, else the BRACKETLAB_OUT environment variable, else "."
std::string resolve_output_dir(const ExperimentConfig& cfg);

}  // namespace bracketlab
