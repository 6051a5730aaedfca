#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sclab/ensemble.hpp"
#include "sclab/semicircle.hpp"
#include "sclab/types.hpp"

namespace sclab::lab {

// The experiments the driver knows how to run.
enum class Experiment {
  identities,     // exact resolvent identity residuals on sampled matrices
  lsc,            // local law: control parameters against their bounds
  dos,            // eigenvalue counts in windows vs. the semicircle integral
  rigidity,       // eigenvalue deviations from classical locations
  deloc,          // scaled sup norms of eigenvectors
  topeig,         // largest eigenvalue and its alignment with the flat vector
  clt,            // fluctuation statistics of the largest eigenvalue
  concentration,  // linear forms of a single centered row, plus entry moments
  pi,             // expansion error of the resolvent perturbation series
};

const char* experiment_name(Experiment e);

// Parses the CLI / config spelling. Throws std::invalid_argument on an
// unknown name.
Experiment parse_experiment(const std::string& name);

// Everything a run needs. load_config fills this from JSON; the CLI may then
// override a few fields before finalize_config locks the run in.
struct LabConfig {
  ensemble::Params params;
  semicircle::Domain domain;

  std::optional<Experiment> experiment;  // may come from the CLI instead
  long long trials = 20;
  std::uint64_t seed = 1;

  // Grids. Empty vectors mean "use the defaults for N and the domain".
  std::vector<double> eta_grid;
  std::vector<double> e_grid;
  std::vector<SpectralParam> z_list;
  std::vector<std::pair<double, double>> windows;

  double slack_exponent = 1.0;
  std::map<std::string, double> tolerances;

  int workers = 0;  // 0: resolve from LAB_WORKERS, then hardware
  std::string out_dir = "out";

  long long moment_trials = 100000;  // entry-moment sampling budget
};

// Reads and validates a JSON config file. Unknown fields, malformed values,
// and parameter combinations that break ensemble invariants are all rejected
// with std::invalid_argument. Grid defaults that do not depend on the chosen
// experiment are filled in here.
LabConfig load_config(const std::string& path);

// Applies experiment-specific defaults (z lists), resolves the worker count,
// and checks that the experiment is feasible at the configured size. Must be
// called once, after any CLI overrides. Throws std::invalid_argument.
void finalize_config(LabConfig& cfg);

// Looks up a named tolerance, falling back to the built-in default. Unknown
// keys throw std::invalid_argument.
double tolerance(const LabConfig& cfg, const std::string& key);

// JSON text that load_config would parse back into an equal config. Used to
// echo the effective configuration into summary.json.
std::string serialize(const LabConfig& cfg);

}  // namespace sclab::lab
