#pragma once

#include <span>
#include <vector>

#include "sclab/types.hpp"

// Resolvents G(z) = (M - z)^{-1} of real symmetric matrices, their minors,
// and the family of exact algebraic identities relating them. Each verifier
// computes one quantity through two independent routes and returns the
// discrepancy, which is zero in exact arithmetic for any symmetric matrix;
// the tests pin how much rounding the floating-point routes may accumulate.
namespace sclab::resolvent {

struct Resolvent {
  int n = 0;
  cd z;
  // Row-major re/im planes of G. Split storage keeps the reduction kernels
  // (row max, row sum of squares) on contiguous doubles.
  std::vector<double> g_re, g_im;
  cd m;  // n^{-1} tr G

  cd g(int i, int j) const {
    const std::size_t k = static_cast<std::size_t>(i) * n + j;
    return {g_re[k], g_im[k]};
  }
};

// G via the spectral decomposition sum_a u_a u_a^T / (lambda_a - z).
// Requires Im z > 0.
Resolvent green_function(const SymmetricMatrix& m, cd z);

// G via a complex LU solve of (M - z) X = I. Independent route used to
// cross-check the spectral path at small n.
Resolvent green_function_direct(const SymmetricMatrix& m, cd z);

// max_ij |(M - z) G - I|_ij
double resolvent_residual(const SymmetricMatrix& m, const Resolvent& r);

// Deviation measures of G from the reference value msc:
//   lambda    = |m - msc|
//   lambda_d  = max_i |G_ii - msc|
//   lambda_o  = max_{i != j} |G_ij|          (0 when n == 1)
//   psi       = sqrt((lambda + Im msc) / (n * eta))
struct ControlParams {
  double lambda, lambda_d, lambda_o, psi;
};
ControlParams control_params(const Resolvent& r, cd msc);

// max_i | sum_j |G_ij|^2 - Im(G_ii)/eta |; the row identity follows from
// G G* = (Im G)/eta for resolvents of symmetric matrices.
double ward_residual(const Resolvent& r);

// Minor M^(T): the matrix with the rows and columns in `removed` deleted,
// remembering which original indices survive.
struct MinorMap {
  SymmetricMatrix matrix;
  std::vector<int> kept;  // kept[local] = original index, ascending
  int local(int original) const;  // -1 when the index was removed
};
MinorMap minor_of(const SymmetricMatrix& m, std::span<const int> removed);

// | G_ij - G^(k)_ij - G_ik G_kj / G_kk | for i, j != k.
double minor_update_residual(const SymmetricMatrix& m, cd z, int i, int j, int k);

// Quadratic form of row couplings against a minor resolvent:
//   i != j:  Z_ij = sum over k,l outside {i,j} of h_ik G^(ij)_kl h_lj
//   i == j:  the centered form Z_i = Z_ii - n^{-1} tr G^(i)
cd coupling(const SymmetricMatrix& m, cd z, int i, int j);

// Residuals of the two Schur-complement formulas,
//   off-diagonal: G_ij = -G_ii G^(i)_jj (h_ij - Z_ij)
//   diagonal:     G_ii = (h_ii - z - Z_ii)^{-1}
struct SchurResiduals {
  double offdiag, diag;
};
SchurResiduals schur_residuals(const SymmetricMatrix& m, cd z, int i, int j);

// max_i | G_ii - (-z - msc - ([v] - Y_i))^{-1} | where [v] = m - msc and
// Y_i = h_ii - Z_i + A_i with A_i = n^{-1} sum_j G_ij G_ji / G_ii. The msc
// terms cancel algebraically, so the residual is msc-independent up to
// rounding; passing the true Stieltjes value just matches how the formula is
// used downstream.
double self_consistent_residual(const SymmetricMatrix& m, cd z, cd msc);

// | m^(i) - ( m - n^{-1} sum_j G_ij^2 / G_ii ) | with
// m^(i) = n^{-1} tr G^(i) (note the n, not n-1, normalization).
double minor_trace_residual(const SymmetricMatrix& m, cd z, int i);

// | <e, Gt e>^{-1} - f - <e, G e>^{-1} | where G resolves h, Gt resolves
// h + f*J/n, and e is the uniform unit vector. Exact for every f by the
// rank-one inversion formula.
double perturbation_residual(const SymmetricMatrix& h, double f, cd z);

// All identity residuals on one sample at each probe point, sharing the
// eigendecompositions across checks (one parent solve, one shifted solve,
// one solve per single-index minor, plus a handful of double minors and
// graded subsets). Ward, self-consistent, and minor-trace checks run over
// every index; the per-index checks use fixed small index sets, which loses
// nothing since the ensembles are exchangeable. Requires n >= 12.
struct IdentityResiduals {
  double ward;
  double minor_update;
  double schur_offdiag;
  double schur_diag;
  double self_consistent;
  double minor_trace;
  double perturbation;
  double graded;
};
std::vector<IdentityResiduals> identity_scan(const SymmetricMatrix& h, double f,
                                             std::span<const SpectralParam> zs);

// Graded component G^{S,U}_ij = sum over subsets T of U of
// (-1)^|T| G^((S\U) u T)_ij. Requires i, j outside S and U a subset of S.
cd graded_component(const SymmetricMatrix& m, cd z, int i, int j,
                    std::span<const int> s, std::span<const int> u);

struct GradedTerm {
  std::vector<int> u;
  cd value;
};

// All 2^|S| graded components at once, their telescoping sum (which must
// return G_ij), and the smallest constant c making
// |G^{S,U}_ij| <= (c |U| lambda_o)^{|U|+1} hold for every nonempty U.
struct GradedReport {
  std::vector<GradedTerm> terms;
  double sum_residual;
  double fitted_c;
};
GradedReport graded_report(const SymmetricMatrix& m, cd z, int i, int j,
                           std::span<const int> s);

// One probe point of the deviation scan: control parameters next to the two
// reference envelopes (no log factors),
//   bound_m  = min(1/(q^2 sqrt(kappa+eta)), 1/q) + 1/(n eta)
//   bound_ij = 1/q + sqrt(Im msc/(n eta)) + 1/(n eta)
// and the observed/envelope ratios for lambda and max(lambda_d, lambda_o).
struct ScanRow {
  double e, eta, kappa;
  double lambda, lambda_d, lambda_o, psi;
  double bound_m, bound_ij;
  double ratio_m, ratio_ij;
};

// Full scan over a z grid; one spectral decomposition total, two real matrix
// products per grid point.
std::vector<ScanRow> control_scan(const SymmetricMatrix& m, double q,
                                  std::span<const SpectralParam> grid);

// Averaged expansion error of the shifted resolvent over single-index minors:
//   value = n^{-1} sum_{i != 0} sum_{k in minor(i)} Gt^(i)_{0k} h_ki
// with Gt the resolvent of h + f*J/n. The envelope is
// 1/q^2 + Im msc/(n eta) + 1/(n eta)^2. Costs n eigendecompositions of
// (n-1)-dimensional minors; guarded to n <= 400.
struct ExpansionError {
  cd value;
  double bound;
  double ratio;
};
ExpansionError expansion_error(const SymmetricMatrix& h, double f, cd z, double q);

}  // namespace sclab::resolvent
