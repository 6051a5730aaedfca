#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sclab/lab/config.hpp"
#include "sclab/lab/report.hpp"

namespace sclab::lab {

struct ExperimentReport {
  bool pass = false;
  double wall_time_s = 0.0;
  int failed_trials = 0;
  std::vector<report::Table> tables;
  nlohmann::json summary;
};

// Runs the configured experiment over cfg.trials independent samples, each on
// its own RNG substream, and aggregates the per-trial rows into tables,
// summary statistics, and pass/fail checks. cfg must have gone through
// finalize_config. Individual trial failures are recorded rather than fatal;
// more than 5% of them fails the run.
ExperimentReport run(const LabConfig& cfg);

// Writes <table>.csv for every table plus summary.json under out_dir,
// creating the directory if needed.
void write_report(const ExperimentReport& rep, const std::string& out_dir);

}  // namespace sclab::lab
