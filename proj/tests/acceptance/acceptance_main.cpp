// Acceptance gates for the laboratory: each criterion exercises one headline
// claim end to end at desk scale and prints a single PASS/FAIL line. Run with
// no arguments for the full battery, or name criteria (c1 .. c10) to run a
// subset. Exit code 0 iff everything selected passed.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "sclab/ensemble.hpp"
#include "sclab/lab/config.hpp"
#include "sclab/lab/experiments.hpp"
#include "sclab/lab/stats.hpp"
#include "sclab/linalg.hpp"
#include "sclab/resolvent.hpp"
#include "sclab/rng.hpp"
#include "sclab/semicircle.hpp"
#include "sclab/spectra.hpp"
#include "sclab/types.hpp"

namespace ens = sclab::ensemble;
namespace semi = sclab::semicircle;
namespace res = sclab::resolvent;
namespace sp = sclab::spectra;
namespace lab = sclab::lab;
namespace stats = sclab::lab::stats;
namespace fs = std::filesystem;
using sclab::RngStream;
using sclab::SpectralParam;
using sclab::SymmetricMatrix;
using sclab::cd;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void gate(bool ok, const std::string& label) {
    pass = pass && ok;
    if (!detail.empty()) detail += ", ";
    detail += label + (ok ? " ok" : " FAILED");
  }
};

std::string num(double v) {
  std::ostringstream ss;
  ss << std::setprecision(4) << v;
  return ss.str();
}

std::string le(const std::string& name, double obs, double bound) {
  return name + " " + num(obs) + " <= " + num(bound);
}

std::string band(const std::string& name, double obs, double lo, double hi) {
  return name + " " + num(obs) + " in [" + num(lo) + ", " + num(hi) + "]";
}

// Simpson quadrature of the semicircle mass below x, via x = 2 sin t. An
// independent oracle: no calls into the closed form under test.
double simpson_mass_below(double x) {
  const double pi = 3.14159265358979323846;
  const double t0 = -0.5 * pi;
  const double t1 = std::asin(std::clamp(x / 2.0, -1.0, 1.0));
  const int panels = 4000;
  const double h = (t1 - t0) / panels;
  auto f = [&](double t) {
    const double c = std::cos(t);
    return (2.0 / pi) * c * c;
  };
  double acc = f(t0) + f(t1);
  for (int k = 1; k < panels; ++k)
    acc += f(t0 + k * h) * (k % 2 == 1 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

std::vector<double> shifted_spectrum(const ens::Params& p, RngStream& rng) {
  const SymmetricMatrix h = ens::sample_centered(p, rng);
  return sclab::linalg::eigenvalues(ens::apply_mean_shift(h, ens::resolve_f(p)));
}

// C1: the exact resolvent identities hold on sampled sparse matrices with
// residual medians at machine scale across sizes and probe points.
Verdict c1() {
  const std::vector<SpectralParam> zs{{0.0, 2.0}, {1.0, 0.1}, {-2.0, 0.01}};
  static const char* kChecks[] = {"ward",          "minor_update", "schur_offdiag",
                                  "schur_diag",    "self_consistent",
                                  "minor_trace",   "perturbation", "graded"};
  std::array<std::vector<double>, 8> residuals;
  int size_index = 0;
  for (const int n : {20, 50, 100}) {
    const ens::Params p{n, std::sqrt(static_cast<double>(n)) / 2.0,
                        ens::Kind::erdos_renyi, false, {}};
    const double f = ens::resolve_f(p);
    ++size_index;
    for (int seed = 0; seed < 100; ++seed) {
      RngStream rng(101, static_cast<std::uint64_t>(size_index) * 100 + seed);
      const SymmetricMatrix h = ens::sample_centered(p, rng);
      for (const res::IdentityResiduals& r : res::identity_scan(h, f, zs)) {
        const double vals[] = {r.ward,          r.minor_update, r.schur_offdiag,
                               r.schur_diag,    r.self_consistent,
                               r.minor_trace,   r.perturbation, r.graded};
        for (int c = 0; c < 8; ++c) residuals[c].push_back(vals[c]);
      }
    }
  }
  Verdict v;
  double worst = -1.0;
  const char* worst_name = kChecks[0];
  for (int c = 0; c < 8; ++c) {
    const double med = stats::median(residuals[c]);
    if (med > worst) {
      worst = med;
      worst_name = kChecks[c];
    }
  }
  v.gate(worst <= 1e-8,
         le(std::string("worst residual median (") + worst_name + ")", worst, 1e-8));
  return v;
}

// C2: eigenvalues of the rank-one shifted matrix from the secular equation
// match a direct eigensolve and interlace with the unshifted spectrum.
Verdict c2() {
  const ens::Params p{200, 8.0, ens::Kind::erdos_renyi, false, {}};
  const std::vector<double> e = ens::uniform_unit_vector(p.n);
  double worst = 0.0;
  bool interlaced = true;
  for (int seed = 0; seed < 100; ++seed) {
    RngStream rng(202, seed);
    const SymmetricMatrix h = ens::sample_centered(p, rng);
    const sp::SpectralDecomposition d = sp::eigh(h);
    std::vector<double> w(d.count);
    for (int a = 0; a < d.count; ++a) {
      double dot = 0.0;
      const double* u = d.vector(a);
      for (int i = 0; i < d.n; ++i) dot += u[i] * e[i];
      w[a] = dot * dot;
    }
    for (const double f : {0.5, 2.0, ens::mean_shift(p)}) {
      const auto mus = sp::secular_solve(d.values, w, f);
      const auto direct = sclab::linalg::eigenvalues(ens::apply_mean_shift(h, f));
      for (std::size_t k = 0; k < mus.size(); ++k)
        worst = std::max(worst, std::abs(mus[k] - direct[k]));
      interlaced = interlaced && sp::check_interlacing(d.values, mus).ok;
    }
  }
  Verdict v;
  v.gate(worst <= 1e-8, le("max |secular - direct|", worst, 1e-8));
  v.gate(interlaced, "interlacing");
  return v;
}

// C3: the closed-form Stieltjes transform solves its quadratic everywhere on
// the probe domain, the integrated density matches quadrature, and the
// quantile function inverts exactly at the symmetric points.
Verdict c3() {
  double worst_quad = 0.0;
  for (int a = 0; a < 100; ++a) {
    const double e = -3.0 + 6.0 * a / 99.0;
    for (int b = 0; b < 100; ++b) {
      const double eta = 1e-3 * std::pow(3000.0, b / 99.0);
      const cd z(e, eta);
      const cd m = semi::stieltjes(z);
      worst_quad = std::max(worst_quad, std::abs(m * m + z * m + 1.0));
    }
  }
  double worst_mass = 0.0;
  for (int k = 0; k < 25; ++k) {
    const double x = -1.96 + 3.92 * k / 24.0;
    worst_mass = std::max(worst_mass,
                          std::abs(semi::integrated(x) - simpson_mass_below(x)));
  }
  Verdict v;
  v.gate(worst_quad <= 1e-12, le("max |m^2 + z m + 1|", worst_quad, 1e-12));
  v.gate(worst_mass <= 1e-10, le("max mass error vs quadrature", worst_mass, 1e-10));
  v.gate(std::abs(semi::integrated(1.0) - 0.8045) <= 1e-4,
         "mass below 1 near 0.8045");
  v.gate(semi::classical_location(500, 1000) == 0.0, "median quantile exactly 0");
  v.gate(semi::classical_location(1000, 1000) == 2.0, "top quantile exactly 2");
  return v;
}

// C4: the control parameters of sampled resolvents obey their deviation
// envelopes with at most two powers of log N of slack, and the trace
// deviation far from the axis is small outright.
Verdict c4() {
  const int n = 2000;
  const double q = 12.0;
  const ens::Params p{n, q, ens::Kind::erdos_renyi, false, {}};
  std::vector<SpectralParam> grid;
  for (const double e : {-2.0, -1.0, 0.0, 1.0, 2.0})
    for (const double eta : {0.01, 0.1, 2.0}) grid.push_back({e, eta});
  std::vector<double> obs_m, obs_ij, b_m, b_ij, center;
  for (int t = 0; t < 20; ++t) {
    RngStream rng(404, t);
    const SymmetricMatrix h = ens::sample_centered(p, rng);
    for (const res::ScanRow& r : res::control_scan(h, q, grid)) {
      obs_m.push_back(r.lambda);
      obs_ij.push_back(std::max(r.lambda_d, r.lambda_o));
      b_m.push_back(r.bound_m);
      b_ij.push_back(r.bound_ij);
      if (r.e == 0.0 && r.eta == 2.0) center.push_back(r.lambda);
    }
  }
  const double s_m = stats::fit_slack(obs_m, b_m, n, 0.95);
  const double s_ij = stats::fit_slack(obs_ij, b_ij, n, 0.95);
  const double med_center = stats::median(center);
  Verdict v;
  v.gate(s_m <= 2.0, le("trace slack", s_m, 2.0));
  v.gate(s_ij <= 2.0, le("entry slack", s_ij, 2.0));
  v.gate(med_center <= 0.05, le("median |m - msc| at z = 2i", med_center, 0.05));
  return v;
}

// C5: eigenvalue counts in the bulk window track the semicircle mass within
// five percent in the median.
Verdict c5() {
  const ens::Params p{4000, 20.0, ens::Kind::erdos_renyi, false, {}};
  std::vector<double> errs;
  for (int t = 0; t < 20; ++t) {
    RngStream rng(505, t);
    const auto mus = shifted_spectrum(p, rng);
    const sp::DosResult r = sp::dos_compare(mus, -1.0, 1.0);
    errs.push_back(std::abs(r.rel_err));
  }
  const double med = stats::median(errs);
  Verdict v;
  v.gate(med <= 0.05, le("median |relative count error|", med, 0.05));
  return v;
}

// C6: ordered eigenvalues stay rigid around their classical locations: the
// summed square deviations fit the log^4 budget and the bulk median tracks
// the N^{-2/3} scale.
Verdict c6() {
  const int n = 2000;
  const ens::Params p{n, std::cbrt(static_cast<double>(n)),
                      ens::Kind::erdos_renyi, false, {}};
  std::vector<double> sums, bulks;
  for (int t = 0; t < 20; ++t) {
    RngStream rng(606, t);
    const auto mus = shifted_spectrum(p, rng);
    const sp::RigidityStats st = sp::rigidity_stats(mus);
    sums.push_back(st.sum_sq);
    bulks.push_back(st.bulk_median);
  }
  const double logn = std::log(static_cast<double>(n));
  const double sum_budget = std::pow(logn, 4.0) * std::pow(n, -1.0 / 3.0);
  const double bulk_budget = 5.0 * std::pow(n, -2.0 / 3.0);
  const double sum_q95 = stats::quantile(sums, 0.95);
  const double bulk_med = stats::median(bulks);
  Verdict v;
  v.gate(sum_q95 <= sum_budget, le("q95 sum of squares", sum_q95, sum_budget));
  v.gate(bulk_med <= bulk_budget, le("median bulk deviation", bulk_med, bulk_budget));
  return v;
}

// C7: every bulk eigenvector spreads its mass: the scaled sup norms stay
// under log^2 N.
Verdict c7() {
  const int n = 2000;
  const ens::Params p{n, 12.0, ens::Kind::erdos_renyi, false, {}};
  std::vector<double> sups;
  for (int t = 0; t < 20; ++t) {
    RngStream rng(707, t);
    const SymmetricMatrix h = ens::sample_centered(p, rng);
    const sp::SpectralDecomposition d =
        sp::eigh(ens::apply_mean_shift(h, ens::resolve_f(p)));
    sups.push_back(sp::delocalization_stats(d, true).max_sup);
  }
  const double budget = std::pow(std::log(static_cast<double>(n)), 2.0);
  const double q95 = stats::quantile(sups, 0.95);
  Verdict v;
  v.gate(q95 <= budget, le("q95 scaled sup norm", q95, budget));
  return v;
}

// C8: the shifted top eigenvalue sits at f + 1/f with the predicted overlap,
// and its fluctuations match the normal bands.
Verdict c8() {
  const double f = 5.0;
  const ens::Params p{1000, 10.0, ens::Kind::erdos_renyi, false, f};
  std::vector<double> mu, ov;
  for (int t = 0; t < 400; ++t) {
    RngStream rng(808, t);
    const SymmetricMatrix h = ens::sample_centered(p, rng);
    const auto es = sclab::linalg::eigh_top(ens::apply_mean_shift(h, f), 2);
    const sp::TopEigReport r = sp::top_eigen_report(es, f);
    mu.push_back(r.mu_max);
    ov.push_back(r.overlap);
  }
  const double mean_mu = stats::mean(mu);
  const double med_ov = stats::median(ov);
  const ens::Params pc{1000, 16.0, ens::Kind::erdos_renyi, false, 20.0};
  const sp::CltReport clt = sp::clt_experiment(pc, 400, 809);
  Verdict v;
  v.gate(mean_mu >= 5.05 && mean_mu <= 5.35, band("mean top", mean_mu, 5.05, 5.35));
  v.gate(med_ov >= 0.97 && med_ov <= 0.99, band("median overlap", med_ov, 0.97, 0.99));
  v.gate(clt.var_scaled >= 0.7 && clt.var_scaled <= 1.4,
         band("scaled variance", clt.var_scaled, 0.7, 1.4));
  v.gate(std::abs(clt.skewness) <= 0.5, le("|skewness|", std::abs(clt.skewness), 0.5));
  return v;
}

// C9: linear forms of a centered row concentrate at unit variance under the
// log envelope, and entry moments sit at their reference scales.
Verdict c9() {
  const ens::Params p{1000, 10.0, ens::Kind::erdos_renyi, false, {}};
  std::vector<double> forms, absf;
  for (int t = 0; t < 10000; ++t) {
    RngStream rng(909, t);
    const std::vector<double> row = ens::sample_row(p, rng);
    const double s = std::accumulate(row.begin(), row.end(), 0.0);
    forms.push_back(s);
    absf.push_back(std::abs(s));
  }
  const double budget = std::log(1000.0) * (1.0 / 10.0 + 1.0);
  const double q99 = stats::quantile(absf, 0.99);
  const double sd = stats::stddev(forms);

  const ens::Params pm{100, 5.0, ens::Kind::erdos_renyi, false, {}};
  RngStream mrng(910, 0);
  const ens::MomentReport mr = ens::moment_report(pm, 100000, 4, mrng);
  const ens::MomentRow& p2 = mr.rows.front();
  Verdict v;
  v.gate(q99 <= budget, le("q99 |row sum|", q99, budget));
  v.gate(sd >= 0.9 && sd <= 1.1, band("row sum sd", sd, 0.9, 1.1));
  v.gate(p2.ratio >= 0.9 && p2.ratio <= 1.1, band("p2 ratio", p2.ratio, 0.9, 1.1));
  v.gate(std::abs(p2.sample_mean - p2.reference) <= 3.0 * mr.var_stderr,
         le("|p2 - ref|", std::abs(p2.sample_mean - p2.reference),
            3.0 * mr.var_stderr));
  v.gate(std::abs(mr.mean_h) <= 3.0 * mr.mean_stderr,
         le("|entry mean|", std::abs(mr.mean_h), 3.0 * mr.mean_stderr));
  return v;
}

// C10: the driver's output files are byte-identical no matter how many
// workers the trials are spread over.
Verdict c10() {
  const fs::path root = fs::temp_directory_path() / "sclab_acceptance_c10";
  fs::remove_all(root);
  fs::create_directories(root);
  auto write_cfg = [&](const std::string& name, const std::string& text) {
    std::ofstream out(root / name);
    out << text;
    return (root / name).string();
  };
  auto slurp = [](const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  Verdict v;
  const std::pair<lab::Experiment, std::string> runs[] = {
      {lab::Experiment::identities, "{\"N\": 16, \"q\": 2, \"trials\": 8, \"seed\": 3}"},
      {lab::Experiment::lsc, "{\"N\": 60, \"q\": 3, \"trials\": 8, \"seed\": 3}"},
  };
  for (const auto& [exp, text] : runs) {
    const std::string name = lab::experiment_name(exp);
    std::string csv[2];
    int k = 0;
    for (const int workers : {1, 8}) {
      lab::LabConfig cfg = lab::load_config(write_cfg(name + ".json", text));
      cfg.experiment = exp;
      cfg.workers = workers;
      lab::finalize_config(cfg);
      const lab::ExperimentReport rep = lab::run(cfg);
      const fs::path dir = root / (name + "_w" + std::to_string(workers));
      lab::write_report(rep, dir.string());
      csv[k++] = slurp(dir / (name + ".csv"));
    }
    v.gate(!csv[0].empty() && csv[0] == csv[1], name + " csv bytes");
  }
  fs::remove_all(root);
  return v;
}

struct Entry {
  const char* name;
  const char* what;
  Verdict (*fn)();
};

const Entry kCriteria[] = {
    {"c1", "resolvent identity residual medians at machine scale", c1},
    {"c2", "secular eigenvalues match a direct solve and interlace", c2},
    {"c3", "semicircle transform, quadrature, and exact quantiles", c3},
    {"c4", "resolvent deviations fit their envelopes", c4},
    {"c5", "window counts track the semicircle mass", c5},
    {"c6", "eigenvalue rigidity within reference budgets", c6},
    {"c7", "bulk eigenvector delocalization", c7},
    {"c8", "top eigenvalue location, overlap, and fluctuations", c8},
    {"c9", "row sum and entry moment concentration", c9},
    {"c10", "reports independent of worker count", c10},
};

}  // namespace

int main(int argc, char** argv) {
  sclab::linalg::use_single_threaded_blas();
  std::vector<const Entry*> selected;
  if (argc == 1) {
    for (const Entry& e : kCriteria) selected.push_back(&e);
  } else {
    for (int a = 1; a < argc; ++a) {
      const std::string want = argv[a];
      const Entry* found = nullptr;
      for (const Entry& e : kCriteria)
        if (want == e.name) found = &e;
      if (!found) {
        std::cerr << "unknown criterion '" << want << "' (expected c1 .. c10)\n";
        return 2;
      }
      selected.push_back(found);
    }
  }
  bool all = true;
  for (const Entry* e : selected) {
    Verdict v;
    try {
      v = e->fn();
    } catch (const std::exception& ex) {
      v.pass = false;
      v.detail = std::string("exception: ") + ex.what();
    }
    all = all && v.pass;
    std::cout << "C" << (e->name + 1) << " " << e->what << ": "
              << (v.pass ? "PASS" : "FAIL") << " (" << v.detail << ")" << std::endl;
  }
  return all ? 0 : 1;
}
