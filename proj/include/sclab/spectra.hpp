#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sclab/ensemble.hpp"
#include "sclab/linalg.hpp"
#include "sclab/types.hpp"

// Eigenvalue and eigenvector statistics: the rank-one secular solver, ordered
// spectra against their classical locations, window counts, delocalization,
// and the top-eigenvalue observables of the shifted ensemble.
namespace sclab::spectra {

// Ascending eigenvalues with a deterministic sign rule; eigenvector alpha is
// stored as row alpha of `vectors` (the transpose of the usual column
// picture, so each eigenvector is contiguous).
using SpectralDecomposition = linalg::Eigensystem;

// Full decomposition; forwards to the symmetric eigensolver.
SpectralDecomposition eigh(const SymmetricMatrix& m);

// Eigenvalues of diag(lambdas) + f * p p^T where weights[a] = p_a^2, found as
// the roots of sum_a w_a/(mu - lambda_a) = 1/f by bisection, one root per
// gap between distinct nodes plus one above the top node. Nodes closer than
// 1e-13 * max(1, spread) merge into one secular node, leaving eigenvalues
// pinned exactly at the shared value; so do nodes whose weight falls below
// 1e-14. Requires f > 0, nonnegative weights summing to 1.
std::vector<double> secular_solve(std::span<const double> lambdas,
                                  std::span<const double> weights, double f);

// Whether lambda_1 <= mu_1 <= lambda_2 <= ... <= lambda_n <= mu_n holds
// within a 1e-10 slack, plus the worst violation found.
struct InterlacingResult {
  bool ok;
  double worst_violation;
};
InterlacingResult check_interlacing(std::span<const double> lambdas,
                                    std::span<const double> mus);

// sqrt(n) * sup-norm of each eigenvector, and the max over the bulk (all of
// them, or all but the top one when exclude_top is set; the top vector of the
// shifted ensemble concentrates on e and is judged separately).
struct DelocStats {
  double max_sup;
  std::vector<double> per_alpha;
};
DelocStats delocalization_stats(const SpectralDecomposition& d, bool exclude_top);

// Top-eigenvalue observables next to their large-f predictions
// f + 1/f, 1 - 1/(2 f^2), and 1/f. The sign of the top eigenvector is fixed
// so the overlap with the uniform vector e is nonnegative. f_in_range flags
// f >= 1.1, below which the rank-one shift no longer detaches an eigenvalue
// and the predictions stop being meaningful.
struct TopEigReport {
  double mu_max = 0.0;
  double overlap = 0.0;       // <v_max, e>
  double l2_to_e = 0.0;       // ||v_max - e||_2
  double sup_norm_gap = 0.0;  // ||v_max - e||_inf
  double gap = 0.0;           // mu_max - mu_{n-1}
  bool f_in_range = false;
  double pred_mu = 0.0;
  double pred_overlap = 0.0;
  double pred_l2 = 0.0;
};

// From the two largest eigenvalues (ascending) and the top eigenvector.
TopEigReport top_eigen_report(std::span<const double> top_values,
                              std::span<const double> top_vector, double f);
// Convenience overload reading the top pair out of a full decomposition.
TopEigReport top_eigen_report(const SpectralDecomposition& d, double f);

// One draw of mu_max for A = H + f*J/n (eigenvalue only, no vectors).
double sample_top_eigenvalue(const ensemble::Params& p, RngStream& rng);

// Standardized moments of the top-eigenvalue fluctuation: under the CLT,
// sqrt(n/2) * (mu_max - mean) is asymptotically standard normal, so
// var_scaled approaches 1 and the standardized skewness and excess kurtosis
// approach 0. regime_ok flags f >= log n, the strong-shift regime the CLT
// needs; outside it the report is still computed.
struct CltReport {
  int trials = 0;
  double mean_mu = 0.0;
  double var_scaled = 0.0;  // sample variance (unbiased) times n/2
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  bool regime_ok = false;
};

// Pure summarizer over externally collected samples; requires >= 2 samples.
CltReport clt_from_samples(std::span<const double> samples, int n, double f);

// Sample `trials` draws with per-trial substreams of root_seed and summarize.
// Requires trials >= 200 for the moment bands to mean anything.
CltReport clt_experiment(const ensemble::Params& p, int trials,
                         std::uint64_t root_seed);

// Exact half-open eigenvalue count in (e1, e2] against the semicircle
// prediction. flagged marks predicted < 1, where the relative error is
// meaningless.
struct DosResult {
  long long count = 0;
  double predicted = 0.0;
  double rel_err = 0.0;  // count/predicted - 1
  bool flagged = false;
};
DosResult dos_compare(std::span<const double> mus, double e1, double e2);

// Deviations of the ordered eigenvalues from their classical locations
// gamma_alpha, excluding the top one: sum of squares plus per-index rows with
// the n^{-2/3} * alpha_hat^{-1/3} reference shape, alpha_hat = min(alpha,
// n - alpha). Indices with alpha_hat >= n/10 count as bulk; medians of
// |mu - gamma| are reported separately for bulk and edge.
struct RigidityRow {
  int alpha;  // 1-based rank
  double mu, gamma, abs_dev, ref_curve;
  bool bulk;
};
struct RigidityStats {
  double sum_sq = 0.0;
  double bulk_median = 0.0;
  double edge_median = 0.0;
  std::vector<RigidityRow> rows;
};
RigidityStats rigidity_stats(std::span<const double> mus);

// Spectral norm max(|mu_1|, |mu_n|) of a centered sample against the weak
// envelope 2 + log(n)/sqrt(q) and the strong one
// 2 + log(n) * (q^{-2} + n^{-2/3}).
struct NormReport {
  double norm = 0.0;
  double weak_bound = 0.0;
  double strong_bound = 0.0;
  double ratio_weak = 0.0;
  double ratio_strong = 0.0;
  bool within_weak = false;
  bool within_strong = false;
};
NormReport norm_check(std::span<const double> eigenvalues,
                      const ensemble::Params& p);

}  // namespace sclab::spectra
