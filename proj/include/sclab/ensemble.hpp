#pragma once

#include <optional>
#include <vector>

#include "sclab/rng.hpp"
#include "sclab/types.hpp"

// Sparse symmetric random matrix ensembles. The adjacency-style matrix A has
// entries gamma/q with probability q^2/n (else 0), where
// gamma = (1 - q^2/n)^{-1/2}; subtracting the constant mean gamma*q/n from
// every entry yields the centered matrix H with E h = 0 and E h^2 = 1/n, so
// A = H + f*J/n with f = gamma*q and J the all-ones matrix. The Bernoulli
// variant has entries +-n^{-1/2} with equal probability (the q = sqrt(n)
// calibration) and no mean shift.
namespace sclab::ensemble {

enum class Kind { erdos_renyi, centered_sparse, bernoulli_wigner };

struct Params {
  int n = 0;
  double q = 0.0;  // sparsity scale; ignored by bernoulli_wigner
  Kind kind = Kind::erdos_renyi;
  bool zero_diagonal = false;
  // Rank-one mean strength. Unset means automatic: f = gamma*q for the sparse
  // kinds. The Bernoulli kind has no natural automatic value (gamma diverges
  // at q = sqrt(n)), so there it must be set explicitly wherever f is used.
  std::optional<double> f;
};

// Throws std::invalid_argument naming the offending field.
void validate(const Params& p);

// gamma = (1 - q^2/n)^{-1/2}; requires q^2 < n.
double gamma_factor(const Params& p);

// The automatic rank-one strength gamma*q.
double mean_shift(const Params& p);

// q as used in moment bounds: the configured q, or sqrt(n) for the Bernoulli kind.
double effective_q(const Params& p);

// f from params: the explicit value if set, otherwise mean_shift.
double resolve_f(const Params& p);

// n^{-1/2} * (1, ..., 1)
std::vector<double> uniform_unit_vector(int n);

struct Sample {
  SymmetricMatrix a;  // adjacency-style matrix
  SymmetricMatrix h;  // centered matrix, h = a - f_eff/n entrywise
  double f_eff;       // gamma*q
};

// One draw of the Erdos-Renyi pair (A, H); both matrices come from the same
// Bernoulli draws, so A - H = f_eff/n holds entrywise. Requires
// kind == erdos_renyi.
Sample sample_adjacency(const Params& p, RngStream& rng);

// One draw of the centered matrix H for any kind.
SymmetricMatrix sample_centered(const Params& p, RngStream& rng);

// One centered row: the joint law of (h_00, ..., h_0,n-1) from a fresh
// sample. The linear-form concentration check only ever reads a single row,
// so drawing just that row keeps its trial cost at n instead of n^2.
std::vector<double> sample_row(const Params& p, RngStream& rng);

// h + f*J/n entrywise (the rank-one mean f*e*e^T in matrix form).
SymmetricMatrix apply_mean_shift(const SymmetricMatrix& h, double f);

struct MomentRow {
  int p;
  double sample_mean;  // mean of |h|^p over all samples
  double reference;    // 1/(n * q^{p-2})
  double ratio;        // sample_mean / reference
};

struct MomentReport {
  long long samples = 0;     // trials * n*(n-1)/2 off-diagonal draws
  double mean_h = 0.0;       // signed mean, should be 0
  double mean_stderr = 0.0;  // standard error of mean_h
  double var_stderr = 0.0;   // standard error of the p = 2 row's sample mean
  std::vector<MomentRow> rows;  // p = 2 .. p_max
};

// Empirical off-diagonal moments against the 1/(n*q^{p-2}) reference scale.
// Requires trials >= 1000 and p_max >= 2.
MomentReport moment_report(const Params& p, long long trials, int p_max, RngStream& rng);

}  // namespace sclab::ensemble
