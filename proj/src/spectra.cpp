#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "sclab/semicircle.hpp"
#include "sclab/simd/kernels.hpp"
#include "sclab/spectra.hpp"

namespace sclab::spectra {
namespace {

constexpr double kMergeScale = 1e-13;   // node merge distance per unit spread
constexpr double kWeightFloor = 1e-14;  // below this a node deflates exactly
constexpr double kInterlacingSlack = 1e-10;
constexpr double kMinShiftStrength = 1.1;  // f below this: no detached eigenvalue

void require_ascending(std::span<const double> v, const char* where) {
  if (!std::is_sorted(v.begin(), v.end()))
    throw std::invalid_argument(std::string(where) + ": values must be ascending");
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t k = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + k, v.end());
  const double hi = v[k];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + k);
  return 0.5 * (lo + hi);
}

}  // namespace

SpectralDecomposition eigh(const SymmetricMatrix& m) { return linalg::eigh(m); }

std::vector<double> secular_solve(std::span<const double> lambdas,
                                  std::span<const double> weights, double f) {
  const std::size_t n = lambdas.size();
  if (n == 0) throw std::invalid_argument("secular_solve: empty input");
  if (weights.size() != n)
    throw std::invalid_argument("secular_solve: size mismatch");
  if (!(f > 0.0)) throw std::invalid_argument("secular_solve: f must be positive");
  double wsum = 0.0;
  for (const double w : weights) {
    if (!(w >= -1e-12))
      throw std::invalid_argument("secular_solve: negative weight");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-6)
    throw std::invalid_argument("secular_solve: weights must sum to 1");

  std::vector<std::pair<double, double>> node(n);
  for (std::size_t a = 0; a < n; ++a)
    node[a] = {lambdas[a], std::max(weights[a], 0.0)};
  std::sort(node.begin(), node.end());

  const double spread = node.back().first - node.front().first;
  const double tol = kMergeScale * std::max(1.0, spread);

  // Cluster coincident nodes: a run of g nodes pins g-1 eigenvalues at the
  // shared value and enters the secular function once with the summed weight;
  // a cluster whose total weight deflates pins all g of them.
  std::vector<double> d, w, pinned;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && node[j].first - node[j - 1].first <= tol) ++j;
    const double val = node[i].first;
    double wc = 0.0;
    for (std::size_t k = i; k < j; ++k) wc += node[k].second;
    pinned.insert(pinned.end(), j - i - 1, val);
    if (wc < kWeightFloor) {
      pinned.push_back(val);
    } else {
      d.push_back(val);
      w.push_back(wc);
    }
    i = j;
  }

  const std::size_t kk = d.size();
  const double target = 1.0 / f;
  const auto phi = [&](double x) {
    return simd::secular_sum(d.data(), w.data(), kk, x) - target;
  };
  // phi decreases strictly from +inf to -inf across each bracket; endpoints
  // sit one merge tolerance off the poles, and a root hiding inside that
  // margin is indistinguishable from the node at our precision anyway.
  const auto bisect = [&](double lo, double hi) {
    if (!(hi > lo)) return 0.5 * (lo + hi);
    if (phi(lo) <= 0.0) return lo;
    if (phi(hi) >= 0.0) return hi;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (phi(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };

  std::vector<double> roots;
  roots.reserve(n);
  double secular_weight = 0.0;
  for (const double wk : w) secular_weight += wk;
  for (std::size_t k = 0; k + 1 < kk; ++k)
    roots.push_back(bisect(d[k] + tol, d[k + 1] - tol));
  if (kk > 0)
    roots.push_back(bisect(d[kk - 1] + tol, d[kk - 1] + f * secular_weight + tol));
  roots.insert(roots.end(), pinned.begin(), pinned.end());
  std::sort(roots.begin(), roots.end());
  return roots;
}

InterlacingResult check_interlacing(std::span<const double> lambdas,
                                    std::span<const double> mus) {
  const std::size_t n = lambdas.size();
  if (n == 0 || mus.size() != n)
    throw std::invalid_argument("check_interlacing: need equal nonempty spectra");
  require_ascending(lambdas, "check_interlacing");
  require_ascending(mus, "check_interlacing");
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    worst = std::max(worst, lambdas[a] - mus[a]);
    if (a + 1 < n) worst = std::max(worst, mus[a] - lambdas[a + 1]);
  }
  worst = std::max(worst, 0.0);
  return {worst <= kInterlacingSlack, worst};
}

DelocStats delocalization_stats(const SpectralDecomposition& d, bool exclude_top) {
  if (d.count < 1 || d.n < 1)
    throw std::invalid_argument("delocalization_stats: empty decomposition");
  DelocStats out;
  out.per_alpha.resize(d.count);
  const double scale = std::sqrt(static_cast<double>(d.n));
  for (int a = 0; a < d.count; ++a)
    out.per_alpha[a] = scale * simd::max_abs(d.vector(a), d.n);
  const int last = exclude_top ? d.count - 1 : d.count;
  out.max_sup = 0.0;
  for (int a = 0; a < last; ++a)
    out.max_sup = std::max(out.max_sup, out.per_alpha[a]);
  return out;
}

TopEigReport top_eigen_report(std::span<const double> top_values,
                              std::span<const double> top_vector, double f) {
  if (top_values.size() != 2)
    throw std::invalid_argument("top_eigen_report: need the top two eigenvalues");
  if (top_vector.empty())
    throw std::invalid_argument("top_eigen_report: empty eigenvector");
  const std::size_t n = top_vector.size();
  const double inv = 1.0 / std::sqrt(static_cast<double>(n));
  double s = 0.0;
  for (const double v : top_vector) s += v;
  const double raw = s * inv;
  const double sign = raw < 0.0 ? -1.0 : 1.0;

  TopEigReport r;
  r.mu_max = top_values[1];
  r.gap = top_values[1] - top_values[0];
  r.overlap = sign * raw;
  double l2 = 0.0, sup = 0.0;
  for (const double v : top_vector) {
    const double dv = sign * v - inv;
    l2 += dv * dv;
    sup = std::max(sup, std::abs(dv));
  }
  r.l2_to_e = std::sqrt(l2);
  r.sup_norm_gap = sup;
  r.f_in_range = f >= kMinShiftStrength;
  r.pred_mu = f + 1.0 / f;
  r.pred_overlap = 1.0 - 1.0 / (2.0 * f * f);
  r.pred_l2 = 1.0 / f;
  return r;
}

TopEigReport top_eigen_report(const SpectralDecomposition& d, double f) {
  if (d.count < 2)
    throw std::invalid_argument("top_eigen_report: need at least two eigenpairs");
  return top_eigen_report(
      std::span<const double>(d.values.data() + d.count - 2, 2),
      std::span<const double>(d.vector(d.count - 1), d.n), f);
}

double sample_top_eigenvalue(const ensemble::Params& p, RngStream& rng) {
  const SymmetricMatrix h = ensemble::sample_centered(p, rng);
  const SymmetricMatrix a = ensemble::apply_mean_shift(h, ensemble::resolve_f(p));
  return linalg::top_eigenvalues(a, 1)[0];
}

CltReport clt_from_samples(std::span<const double> samples, int n, double f) {
  if (samples.size() < 2)
    throw std::invalid_argument("clt_from_samples: need at least two samples");
  if (n < 1) throw std::invalid_argument("clt_from_samples: n must be positive");
  const double t = static_cast<double>(samples.size());
  double mean = 0.0;
  for (const double x : samples) mean += x;
  mean /= t;
  double s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (const double x : samples) {
    const double c = x - mean;
    s2 += c * c;
    s3 += c * c * c;
    s4 += c * c * c * c;
  }
  CltReport r;
  r.trials = static_cast<int>(samples.size());
  r.mean_mu = mean;
  r.var_scaled = 0.5 * n * s2 / (t - 1.0);
  const double m2 = s2 / t;
  r.skewness = m2 > 0.0 ? (s3 / t) / std::pow(m2, 1.5) : 0.0;
  r.excess_kurtosis = m2 > 0.0 ? (s4 / t) / (m2 * m2) - 3.0 : 0.0;
  r.regime_ok = f >= std::log(static_cast<double>(n));
  return r;
}

CltReport clt_experiment(const ensemble::Params& p, int trials,
                         std::uint64_t root_seed) {
  ensemble::validate(p);
  if (trials < 200)
    throw std::invalid_argument("clt_experiment: trials must be at least 200");
  const double f = ensemble::resolve_f(p);
  std::vector<double> samples(trials);
  for (int t = 0; t < trials; ++t) {
    RngStream rng(root_seed, static_cast<std::uint64_t>(t));
    samples[t] = sample_top_eigenvalue(p, rng);
  }
  return clt_from_samples(samples, p.n, f);
}

DosResult dos_compare(std::span<const double> mus, double e1, double e2) {
  if (mus.empty()) throw std::invalid_argument("dos_compare: empty spectrum");
  if (!(e1 < e2)) throw std::invalid_argument("dos_compare: requires e1 < e2");
  require_ascending(mus, "dos_compare");
  DosResult r;
  r.count = std::upper_bound(mus.begin(), mus.end(), e2) -
            std::upper_bound(mus.begin(), mus.end(), e1);
  r.predicted = semicircle::expected_count(e1, e2, static_cast<int>(mus.size()));
  r.flagged = r.predicted < 1.0;
  if (r.predicted > 0.0)
    r.rel_err = static_cast<double>(r.count) / r.predicted - 1.0;
  else
    r.rel_err = r.count == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  return r;
}

RigidityStats rigidity_stats(std::span<const double> mus) {
  const int n = static_cast<int>(mus.size());
  if (n < 2) throw std::invalid_argument("rigidity_stats: need at least two eigenvalues");
  require_ascending(mus, "rigidity_stats");
  RigidityStats out;
  out.rows.reserve(n - 1);
  std::vector<double> bulk_devs, edge_devs;
  for (int alpha = 1; alpha < n; ++alpha) {
    RigidityRow row;
    row.alpha = alpha;
    row.mu = mus[alpha - 1];
    row.gamma = semicircle::classical_location(alpha, n);
    row.abs_dev = std::abs(row.mu - row.gamma);
    const int ahat = std::min(alpha, n - alpha);
    row.ref_curve = std::pow(static_cast<double>(n), -2.0 / 3.0) *
                    std::pow(static_cast<double>(ahat), -1.0 / 3.0);
    row.bulk = ahat >= n / 10.0;
    out.sum_sq += row.abs_dev * row.abs_dev;
    (row.bulk ? bulk_devs : edge_devs).push_back(row.abs_dev);
    out.rows.push_back(row);
  }
  out.bulk_median = median_of(std::move(bulk_devs));
  out.edge_median = median_of(std::move(edge_devs));
  return out;
}

NormReport norm_check(std::span<const double> eigenvalues,
                      const ensemble::Params& p) {
  ensemble::validate(p);
  if (eigenvalues.empty() ||
      static_cast<int>(eigenvalues.size()) != p.n)
    throw std::invalid_argument("norm_check: spectrum size must match params");
  require_ascending(eigenvalues, "norm_check");
  NormReport r;
  r.norm = std::max(std::abs(eigenvalues.front()), std::abs(eigenvalues.back()));
  const double qe = ensemble::effective_q(p);
  const double logn = std::log(static_cast<double>(p.n));
  r.weak_bound = 2.0 + logn / std::sqrt(qe);
  r.strong_bound =
      2.0 + logn * (1.0 / (qe * qe) + std::pow(static_cast<double>(p.n), -2.0 / 3.0));
  r.ratio_weak = r.norm / r.weak_bound;
  r.ratio_strong = r.norm / r.strong_bound;
  r.within_weak = r.norm <= r.weak_bound;
  r.within_strong = r.norm <= r.strong_bound;
  return r;
}

}  // namespace sclab::spectra
