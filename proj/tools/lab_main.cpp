#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sclab/lab/config.hpp"
#include "sclab/lab/experiments.hpp"
#include "sclab/linalg.hpp"

// Exit codes: 0 = run passed, 1 = run failed or a runtime error occurred,
// 2 = usage or configuration error.
int main(int argc, char** argv) {
  sclab::linalg::use_single_threaded_blas();

  CLI::App app{"Sparse random matrix laboratory"};
  std::string experiment_arg;
  std::string config_path;
  std::uint64_t seed = 0;
  long long trials = 0;
  int workers = 0;
  std::string out_dir;

  app.add_option("experiment", experiment_arg,
                 "Experiment to run: identities, lsc, dos, rigidity, deloc, "
                 "topeig, clt, concentration, pi")
      ->required();
  app.add_option("--config", config_path, "Path to the JSON config file")
      ->required();
  auto* seed_opt = app.add_option("--seed", seed, "Override the root RNG seed");
  auto* trials_opt =
      app.add_option("--trials", trials, "Override the number of trials")
          ->check(CLI::PositiveNumber);
  auto* workers_opt =
      app.add_option("--workers", workers, "Override the worker-thread count")
          ->check(CLI::PositiveNumber);
  auto* out_opt = app.add_option("--out", out_dir, "Override the output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // --help exits cleanly, bad usage does not
  }

  sclab::lab::LabConfig cfg;
  try {
    cfg = sclab::lab::load_config(config_path);
    cfg.experiment = sclab::lab::parse_experiment(experiment_arg);
    if (seed_opt->count() > 0) cfg.seed = seed;
    if (trials_opt->count() > 0) cfg.trials = trials;
    if (workers_opt->count() > 0) cfg.workers = workers;
    if (out_opt->count() > 0) cfg.out_dir = out_dir;
    sclab::lab::finalize_config(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "lab: " << e.what() << '\n';
    return 2;
  }

  try {
    const sclab::lab::ExperimentReport rep = sclab::lab::run(cfg);
    sclab::lab::write_report(rep, cfg.out_dir);
    std::cout << sclab::lab::experiment_name(*cfg.experiment) << ": "
              << (rep.pass ? "PASS" : "FAIL") << " (" << rep.failed_trials
              << " failed trials, " << rep.wall_time_s << " s, report in "
              << cfg.out_dir << ")\n";
    return rep.pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "lab: " << e.what() << '\n';
    return 1;
  }
}
