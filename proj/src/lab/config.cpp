#include "sclab/lab/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

using nlohmann::json;

namespace sclab::lab {
namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument("config: " + msg);
}

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> t = {
      {"identity_residual", 1e-8},  // median residual per identity
      {"slack_quantile", 0.95},     // quantile at which log slack is read off
      {"slack_max", 2.0},           // largest acceptable log-log slack exponent
      {"dos_rel_err", 0.05},        // window count vs. semicircle integral
      {"rigidity_bulk_const", 5.0},     // bulk median vs. N^{-2/3}
      {"topeig_mu_tol", 0.15},          // |mean mu - (f + 1/f)|
      {"topeig_overlap_tol", 0.01},     // |median overlap - (1 - 1/(2 f^2))|
      {"clt_var_lo", 0.7},              // scaled variance band
      {"clt_var_hi", 1.4},
      {"clt_skew_max", 0.5},
      {"clt_kurt_max", 1.0},
      {"conc_quantile", 0.99},          // quantile of |sum_i h_1i|
      {"conc_sd_lo", 0.9},              // standard deviation band for the form
      {"conc_sd_hi", 1.1},
      {"moment_ratio_lo", 0.9},         // p = 2 moment vs. 1/N
      {"moment_ratio_hi", 1.1},
      {"pi_ratio_max", 20.0},           // |Pi| vs. its bound, median ratio
  };
  return t;
}

bool is_quantile_key(const std::string& key) {
  return key == "slack_quantile" || key == "conc_quantile";
}

double require_number(const json& v, const std::string& name) {
  if (!v.is_number() || v.is_boolean()) fail("'" + name + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail("'" + name + "' must be finite");
  return x;
}

long long require_integer(const json& v, const std::string& name) {
  if (!v.is_number_integer()) fail("'" + name + "' must be an integer");
  return v.get<long long>();
}

std::uint64_t require_seed(const json& v) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    const long long s = v.get<long long>();
    if (s >= 0) return static_cast<std::uint64_t>(s);
  }
  fail("'seed' must be a non-negative integer");
}

std::vector<double> require_number_array(const json& v, const std::string& name) {
  if (!v.is_array() || v.empty()) fail("'" + name + "' must be a non-empty array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(require_number(e, name + " entry"));
  return out;
}

// [a, b] pairs used for both complex grid points and energy windows.
std::vector<std::pair<double, double>> require_pair_array(const json& v,
                                                          const std::string& name) {
  if (!v.is_array() || v.empty()) fail("'" + name + "' must be a non-empty array");
  std::vector<std::pair<double, double>> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_array() || e.size() != 2) fail("'" + name + "' entries must be pairs");
    out.emplace_back(require_number(e[0], name + " entry"),
                     require_number(e[1], name + " entry"));
  }
  return out;
}

void parse_domain(const json& v, semicircle::Domain& d) {
  if (!v.is_object()) fail("'domain' must be an object");
  for (const auto& [key, val] : v.items()) {
    if (key == "sigma")
      d.sigma = require_number(val, "domain.sigma");
    else if (key == "eta_min")
      d.eta_min = require_number(val, "domain.eta_min");
    else if (key == "eta_max")
      d.eta_max = require_number(val, "domain.eta_max");
    else
      fail("unknown field 'domain." + key + "'");
  }
  if (!(d.sigma >= 3.0)) fail("domain.sigma must be at least 3");
  if (!(d.eta_min > 0.0)) fail("domain.eta_min must be positive");
  if (!(d.eta_min <= d.eta_max)) fail("domain.eta_min must not exceed domain.eta_max");
  if (!(d.eta_max <= 3.0)) fail("domain.eta_max must not exceed 3");
}

void parse_tolerances(const json& v, std::map<std::string, double>& out) {
  if (!v.is_object()) fail("'tolerances' must be an object");
  const auto& defaults = default_tolerances();
  for (const auto& [key, val] : v.items()) {
    if (!defaults.count(key)) fail("unknown tolerance '" + key + "'");
    const double x = require_number(val, "tolerances." + key);
    if (!(x > 0.0)) fail("tolerance '" + key + "' must be positive");
    if (is_quantile_key(key) && !(x < 1.0))
      fail("tolerance '" + key + "' must lie in (0, 1)");
    out[key] = x;
  }
}

ensemble::Kind parse_kind(const std::string& s) {
  if (s == "erdos_renyi") return ensemble::Kind::erdos_renyi;
  if (s == "centered_sparse") return ensemble::Kind::centered_sparse;
  if (s == "bernoulli_wigner") return ensemble::Kind::bernoulli_wigner;
  fail("unknown kind '" + s + "'");
}

const char* kind_name(ensemble::Kind k) {
  switch (k) {
    case ensemble::Kind::erdos_renyi: return "erdos_renyi";
    case ensemble::Kind::centered_sparse: return "centered_sparse";
    case ensemble::Kind::bernoulli_wigner: return "bernoulli_wigner";
  }
  return "erdos_renyi";
}

// Default spectral scale grid: 8 logarithmically spaced points from the
// smallest scale the local law speaks about, (log N)^2 / N, up to order one.
std::vector<double> default_eta_grid(int n, const semicircle::Domain& d) {
  const double logn = std::log(static_cast<double>(n));
  const double lo = std::max(logn * logn / n, d.eta_min);
  const double hi = std::min(3.0, d.eta_max);
  if (!(lo < hi)) return {hi};
  const int points = 8;
  std::vector<double> grid(points);
  for (int k = 0; k < points; ++k)
    grid[k] = lo * std::pow(hi / lo, static_cast<double>(k) / (points - 1));
  return grid;
}

std::vector<double> default_e_grid() {
  std::vector<double> grid(13);
  for (int k = 0; k < 13; ++k) grid[k] = -3.0 + 0.5 * k;
  return grid;
}

int resolved_workers(int configured) {
  if (configured > 0) return configured;
  if (const char* env = std::getenv("LAB_WORKERS")) {
    char* end = nullptr;
    const long w = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || w < 1)
      fail("LAB_WORKERS must be a positive integer");
    return static_cast<int>(w);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

bool needs_mean_shift(Experiment e) {
  switch (e) {
    case Experiment::identities:
    case Experiment::dos:
    case Experiment::rigidity:
    case Experiment::deloc:
    case Experiment::topeig:
    case Experiment::clt:
    case Experiment::pi:
      return true;
    case Experiment::lsc:
    case Experiment::concentration:
      return false;
  }
  return false;
}

}  // namespace

const char* experiment_name(Experiment e) {
  switch (e) {
    case Experiment::identities: return "identities";
    case Experiment::lsc: return "lsc";
    case Experiment::dos: return "dos";
    case Experiment::rigidity: return "rigidity";
    case Experiment::deloc: return "deloc";
    case Experiment::topeig: return "topeig";
    case Experiment::clt: return "clt";
    case Experiment::concentration: return "concentration";
    case Experiment::pi: return "pi";
  }
  return "identities";
}

Experiment parse_experiment(const std::string& name) {
  static const std::map<std::string, Experiment> table = {
      {"identities", Experiment::identities},
      {"lsc", Experiment::lsc},
      {"dos", Experiment::dos},
      {"rigidity", Experiment::rigidity},
      {"deloc", Experiment::deloc},
      {"topeig", Experiment::topeig},
      {"clt", Experiment::clt},
      {"concentration", Experiment::concentration},
      {"pi", Experiment::pi},
  };
  const auto it = table.find(name);
  if (it == table.end())
    throw std::invalid_argument("unknown experiment '" + name + "'");
  return it->second;
}

LabConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    fail(std::string("parse error: ") + e.what());
  }
  if (!j.is_object()) fail("top level must be an object");

  static const std::set<std::string> known = {
      "N",        "q",          "kind",       "zero_diagonal", "f",
      "seed",     "experiment", "trials",     "eta_grid",      "e_grid",
      "z_list",   "windows",    "domain",     "slack_exponent", "tolerances",
      "workers",  "out_dir",    "moment_trials",
  };
  for (const auto& [key, val] : j.items()) {
    (void)val;
    if (!known.count(key)) fail("unknown field '" + key + "'");
  }

  LabConfig cfg;

  if (!j.contains("N")) fail("missing required field 'N'");
  const long long n = require_integer(j.at("N"), "N");
  if (n < 1) fail("'N' must be positive");
  if (n > 1000000) fail("'N' is too large for a dense laboratory run");
  cfg.params.n = static_cast<int>(n);

  if (j.contains("kind")) {
    const json& v = j.at("kind");
    if (!v.is_string()) fail("'kind' must be a string");
    cfg.params.kind = parse_kind(v.get<std::string>());
  }

  if (j.contains("q")) {
    const double q = require_number(j.at("q"), "q");
    if (!(q > 0.0)) fail("'q' must be positive");
    cfg.params.q = q;
  }

  if (j.contains("zero_diagonal")) {
    const json& v = j.at("zero_diagonal");
    if (!v.is_boolean()) fail("'zero_diagonal' must be a boolean");
    cfg.params.zero_diagonal = v.get<bool>();
  }

  if (j.contains("f")) {
    const json& v = j.at("f");
    if (v.is_string()) {
      if (v.get<std::string>() != "auto") fail("'f' must be a number or \"auto\"");
      cfg.params.f.reset();
    } else {
      const double f = require_number(v, "f");
      if (!(f > 0.0)) fail("'f' must be positive");
      cfg.params.f = f;
    }
  }

  try {
    ensemble::validate(cfg.params);
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }

  if (j.contains("seed")) cfg.seed = require_seed(j.at("seed"));

  if (j.contains("experiment")) {
    const json& v = j.at("experiment");
    if (!v.is_string()) fail("'experiment' must be a string");
    const std::string s = v.get<std::string>();
    try {
      cfg.experiment = parse_experiment(s);
    } catch (const std::invalid_argument&) {
      fail("unknown experiment '" + s + "'");
    }
  }

  if (j.contains("trials")) {
    cfg.trials = require_integer(j.at("trials"), "trials");
    if (cfg.trials < 1) fail("'trials' must be at least 1");
  }

  if (j.contains("moment_trials")) {
    cfg.moment_trials = require_integer(j.at("moment_trials"), "moment_trials");
    if (cfg.moment_trials < 1000) fail("'moment_trials' must be at least 1000");
  }

  if (j.contains("workers")) {
    const long long w = require_integer(j.at("workers"), "workers");
    if (w < 0 || w > 4096) fail("'workers' must lie in [0, 4096]");
    cfg.workers = static_cast<int>(w);
  }

  if (j.contains("out_dir")) {
    const json& v = j.at("out_dir");
    if (!v.is_string() || v.get<std::string>().empty())
      fail("'out_dir' must be a non-empty string");
    cfg.out_dir = v.get<std::string>();
  }

  if (j.contains("slack_exponent")) {
    cfg.slack_exponent = require_number(j.at("slack_exponent"), "slack_exponent");
    if (cfg.slack_exponent < 0.0) fail("'slack_exponent' must be non-negative");
  }

  if (j.contains("domain")) parse_domain(j.at("domain"), cfg.domain);
  if (j.contains("tolerances")) parse_tolerances(j.at("tolerances"), cfg.tolerances);

  if (j.contains("eta_grid")) {
    cfg.eta_grid = require_number_array(j.at("eta_grid"), "eta_grid");
    for (double eta : cfg.eta_grid)
      if (eta < cfg.domain.eta_min || eta > cfg.domain.eta_max)
        fail("eta_grid entries must lie within [domain.eta_min, domain.eta_max]");
  } else {
    cfg.eta_grid = default_eta_grid(cfg.params.n, cfg.domain);
  }

  if (j.contains("e_grid")) {
    cfg.e_grid = require_number_array(j.at("e_grid"), "e_grid");
    for (double e : cfg.e_grid)
      if (std::abs(e) > cfg.domain.sigma)
        fail("e_grid entries must lie within [-domain.sigma, domain.sigma]");
  } else {
    cfg.e_grid = default_e_grid();
  }

  if (j.contains("z_list")) {
    for (const auto& [re, im] : require_pair_array(j.at("z_list"), "z_list")) {
      const SpectralParam z{re, im};
      if (!cfg.domain.contains(z))
        fail("z_list entries must lie within the spectral domain");
      cfg.z_list.push_back(z);
    }
  }

  if (j.contains("windows")) {
    cfg.windows = require_pair_array(j.at("windows"), "windows");
    for (const auto& [e1, e2] : cfg.windows)
      if (!(e1 < e2)) fail("windows must satisfy e1 < e2");
  } else {
    cfg.windows = {{-1.0, 1.0}};
  }

  return cfg;
}

void finalize_config(LabConfig& cfg) {
  if (!cfg.experiment) fail("no experiment selected");
  const Experiment exp = *cfg.experiment;
  const int n = cfg.params.n;

  if (cfg.z_list.empty()) {
    // Spread over the domain: one point at order-one distance, one near the
    // bulk at a small scale, one outside the bulk at a very small scale.
    if (exp == Experiment::identities)
      cfg.z_list = {{0.0, 2.0}, {1.0, 0.1}, {-2.0, 0.01}};
    else if (exp == Experiment::pi)
      cfg.z_list = {{0.5, 0.05}};
  }

  cfg.workers = resolved_workers(cfg.workers);

  if (needs_mean_shift(exp) && !cfg.params.f &&
      cfg.params.kind == ensemble::Kind::bernoulli_wigner)
    fail(std::string("experiment '") + experiment_name(exp) +
         "' needs an explicit f for the bernoulli_wigner kind");

  if (exp == Experiment::identities && (n < 12 || n > 400))
    fail("experiment 'identities' needs 12 <= N <= 400");
  if (exp == Experiment::pi && (n < 3 || n > 400))
    fail("experiment 'pi' needs 3 <= N <= 400");
  if (exp == Experiment::topeig && n < 2) fail("experiment 'topeig' needs N >= 2");
  if (exp == Experiment::clt && cfg.trials < 200)
    fail("experiment 'clt' needs at least 200 trials");
}

double tolerance(const LabConfig& cfg, const std::string& key) {
  const auto user = cfg.tolerances.find(key);
  if (user != cfg.tolerances.end()) return user->second;
  const auto& defaults = default_tolerances();
  const auto it = defaults.find(key);
  if (it == defaults.end())
    throw std::invalid_argument("config: unknown tolerance '" + key + "'");
  return it->second;
}

std::string serialize(const LabConfig& cfg) {
  json j = json::object();
  j["N"] = cfg.params.n;
  if (cfg.params.q > 0.0) j["q"] = cfg.params.q;
  j["kind"] = kind_name(cfg.params.kind);
  j["zero_diagonal"] = cfg.params.zero_diagonal;
  if (cfg.params.f)
    j["f"] = *cfg.params.f;
  else
    j["f"] = "auto";
  j["seed"] = cfg.seed;
  if (cfg.experiment) j["experiment"] = experiment_name(*cfg.experiment);
  j["trials"] = cfg.trials;
  j["eta_grid"] = cfg.eta_grid;
  j["e_grid"] = cfg.e_grid;
  json zs = json::array();
  for (const auto& z : cfg.z_list) zs.push_back(json::array({z.e, z.eta}));
  if (!zs.empty()) j["z_list"] = zs;
  json ws = json::array();
  for (const auto& [e1, e2] : cfg.windows) ws.push_back(json::array({e1, e2}));
  j["windows"] = ws;
  j["domain"] = {{"sigma", cfg.domain.sigma},
                 {"eta_min", cfg.domain.eta_min},
                 {"eta_max", cfg.domain.eta_max}};
  j["slack_exponent"] = cfg.slack_exponent;
  if (!cfg.tolerances.empty()) {
    json t = json::object();
    for (const auto& [key, val] : cfg.tolerances) t[key] = val;
    j["tolerances"] = t;
  }
  j["workers"] = cfg.workers;
  j["out_dir"] = cfg.out_dir;
  j["moment_trials"] = cfg.moment_trials;
  return j.dump(2) + "\n";
}

}  // namespace sclab::lab
