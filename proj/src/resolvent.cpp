#include <complex>

// Route the LAPACKE complex type through std::complex so the LU solve below
// can work on our buffers directly.
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>

#include <cblas.h>
#include <lapacke.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "sclab/ensemble.hpp"
#include "sclab/linalg.hpp"
#include "sclab/resolvent.hpp"
#include "sclab/semicircle.hpp"
#include "sclab/simd/kernels.hpp"

namespace sclab::resolvent {
namespace {

// Below this magnitude a pivot G_kk makes the minor update numerically
// meaningless; off the real axis this essentially never triggers.
constexpr double kPivotFloor = 1e-12;

void require_upper(cd z, const char* where) {
  if (!(z.imag() > 0.0))
    throw std::invalid_argument(std::string(where) + ": requires Im z > 0");
}

void require_index(const SymmetricMatrix& m, int i, const char* where) {
  if (i < 0 || i >= m.size())
    throw std::invalid_argument(std::string(where) + ": index out of range");
}

void require_nonempty(const SymmetricMatrix& m, const char* where) {
  if (m.size() < 1)
    throw std::invalid_argument(std::string(where) + ": empty matrix");
}

// Eigendecomposition with an optional transposed component table
// comp[i*n + a] = u_a(i), which makes the per-index component vectors
// contiguous for the pair-sum kernels.
struct SpectralCache {
  linalg::Eigensystem es;
  std::vector<double> comp;

  explicit SpectralCache(const SymmetricMatrix& m, bool keep_components)
      : es(linalg::eigh(m)) {
    if (keep_components) {
      const int n = es.n;
      comp.resize(static_cast<std::size_t>(n) * n);
      for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i)
          comp[static_cast<std::size_t>(i) * n + a] =
              es.vectors[static_cast<std::size_t>(a) * n + i];
    }
  }

  int n() const { return es.n; }

  void weights(cd z, std::vector<double>& wre, std::vector<double>& wim) const {
    wre.resize(es.values.size());
    wim.resize(es.values.size());
    simd::cauchy_weights(es.values.data(), es.values.size(), z.real(), z.imag(),
                         wre.data(), wim.data());
  }

  cd entry(const std::vector<double>& wre, const std::vector<double>& wim,
           int i, int j) const {
    const int n = es.n;
    return simd::weighted_pair_sum(comp.data() + static_cast<std::size_t>(i) * n,
                                   comp.data() + static_cast<std::size_t>(j) * n,
                                   wre.data(), wim.data(), n);
  }

  // Fill the full re/im planes of G: scale each eigenvector row by its weight,
  // then one real matrix product per plane.
  void planes(const std::vector<double>& wre, const std::vector<double>& wim,
              std::vector<double>& scratch, double* gre, double* gim) const {
    const int n = es.n;
    const std::size_t nn = static_cast<std::size_t>(n) * n;
    scratch.resize(nn);
    const double* w[2] = {wre.data(), wim.data()};
    double* out[2] = {gre, gim};
    for (int plane = 0; plane < 2; ++plane) {
      for (int a = 0; a < n; ++a) {
        const double* row = es.vectors.data() + static_cast<std::size_t>(a) * n;
        double* s = scratch.data() + static_cast<std::size_t>(a) * n;
        const double wa = w[plane][a];
        for (int i = 0; i < n; ++i) s[i] = wa * row[i];
      }
      cblas_dgemm(CblasRowMajor, CblasTrans, CblasNoTrans, n, n, n, 1.0,
                  es.vectors.data(), n, scratch.data(), n, 0.0, out[plane], n);
    }
  }
};

// p_a = <u_a, x>
std::vector<double> project(const linalg::Eigensystem& es,
                            const std::vector<double>& x) {
  std::vector<double> p(es.count);
  cblas_dgemv(CblasRowMajor, CblasNoTrans, es.count, es.n, 1.0,
              es.vectors.data(), es.n, x.data(), 1, 0.0, p.data(), 1);
  return p;
}

// u[l] = m(i, kept[l]): the couplings of row i into a minor's index set.
std::vector<double> couplings(const SymmetricMatrix& m, int i,
                              const std::vector<int>& kept) {
  std::vector<double> u(kept.size());
  for (std::size_t l = 0; l < kept.size(); ++l) u[l] = m(i, kept[l]);
  return u;
}

// Enough of the minor without index i to evaluate Z_ii and tr G^(i) at any z:
// the minor eigenvalues and the squared projections of row i onto its
// eigenvectors.
struct SingleMinor {
  std::vector<double> values;
  std::vector<double> psq;
};

SingleMinor single_minor(const SymmetricMatrix& m, int i) {
  MinorMap mm = minor_of(m, std::array{i});
  linalg::Eigensystem es = linalg::eigh(mm.matrix);
  const std::vector<double> p = project(es, couplings(m, i, mm.kept));
  SingleMinor out;
  out.psq.resize(p.size());
  for (std::size_t a = 0; a < p.size(); ++a) out.psq[a] = p[a] * p[a];
  out.values = std::move(es.values);
  return out;
}

// Same idea for the minor without {i, j}: projections of both rows, so the
// bilinear coupling Z_ij is a weighted pair sum.
struct PairMinor {
  std::vector<double> values;
  std::vector<double> pu, pv;
};

PairMinor pair_minor(const SymmetricMatrix& m, int i, int j) {
  MinorMap mm = minor_of(m, std::array{i, j});
  linalg::Eigensystem es = linalg::eigh(mm.matrix);
  PairMinor out;
  out.pu = project(es, couplings(m, i, mm.kept));
  out.pv = project(es, couplings(m, j, mm.kept));
  out.values = std::move(es.values);
  return out;
}

cd bilinear(const PairMinor& pm, cd z, std::vector<double>& wre,
            std::vector<double>& wim) {
  const std::size_t k = pm.values.size();
  wre.resize(k);
  wim.resize(k);
  simd::cauchy_weights(pm.values.data(), k, z.real(), z.imag(), wre.data(),
                       wim.data());
  return simd::weighted_pair_sum(pm.pu.data(), pm.pv.data(), wre.data(),
                                 wim.data(), k);
}

cd quadratic(const SingleMinor& sm, cd z) {
  return simd::weighted_cauchy_sum(sm.values.data(), sm.psq.data(),
                                   sm.values.size(), z.real(), z.imag());
}

// Validate a removal subset for the graded expansion: distinct, in range,
// excluding the target entry (i, j), and small enough to enumerate.
std::vector<int> checked_subset(const SymmetricMatrix& m,
                                std::span<const int> idx, int i, int j,
                                const char* where) {
  std::vector<int> s(idx.begin(), idx.end());
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end())
    throw std::invalid_argument(std::string(where) + ": repeated index in subset");
  for (int v : s) {
    require_index(m, v, where);
    if (v == i || v == j)
      throw std::invalid_argument(std::string(where) +
                                  ": subset must exclude the target entry");
  }
  if (s.size() > 10)
    throw std::invalid_argument(std::string(where) + ": subset too large");
  return s;
}

// Indices of s selected by the bits of mask.
std::vector<int> mask_indices(const std::vector<int>& s, int mask) {
  std::vector<int> out;
  for (std::size_t b = 0; b < s.size(); ++b)
    if (mask >> b & 1) out.push_back(s[b]);
  return out;
}

// From the per-subset minor entries g[vmask] = G^(V)_ij, the graded component
// for every U: sum over T inside U of (-1)^|T| g[(S\U) u T].
std::vector<cd> components_from_entries(const std::vector<cd>& g, int smask) {
  std::vector<cd> comp(g.size());
  for (int umask = 0; umask <= smask; ++umask) {
    const int base = smask & ~umask;
    cd acc = 0.0;
    for (int t = umask;; t = (t - 1) & umask) {
      const cd term = g[base | t];
      acc += (std::popcount(static_cast<unsigned>(t)) % 2 == 0) ? term : -term;
      if (t == 0) break;
    }
    comp[umask] = acc;
  }
  return comp;
}

cd minor_entry(const SymmetricMatrix& m, cd z, int i, int j,
               const std::vector<int>& removed) {
  MinorMap mm = minor_of(m, removed);
  SpectralCache c(mm.matrix, true);
  std::vector<double> wre, wim;
  c.weights(z, wre, wim);
  return c.entry(wre, wim, mm.local(i), mm.local(j));
}

cd plane_at(const std::vector<double>& re, const std::vector<double>& im,
            int n, int i, int j) {
  const std::size_t k = static_cast<std::size_t>(i) * n + j;
  return {re[k], im[k]};
}

cd diag_mean(const std::vector<double>& re, const std::vector<double>& im,
             int n) {
  cd acc = 0.0;
  for (int i = 0; i < n; ++i) acc += plane_at(re, im, n, i, i);
  return acc / static_cast<double>(n);
}

// max_{i != j} |G_ij| from the planes; 0 when n == 1.
double offdiag_max(const std::vector<double>& re, const std::vector<double>& im,
                   int n) {
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const std::size_t off = static_cast<std::size_t>(i) * n;
    worst = std::max(worst, simd::max_abs2_excluding(re.data() + off,
                                                     im.data() + off, n, i));
  }
  return std::sqrt(worst);
}

}  // namespace

int MinorMap::local(int original) const {
  const auto it = std::lower_bound(kept.begin(), kept.end(), original);
  if (it == kept.end() || *it != original) return -1;
  return static_cast<int>(it - kept.begin());
}

MinorMap minor_of(const SymmetricMatrix& m, std::span<const int> removed) {
  const int n = m.size();
  std::vector<char> drop(n, 0);
  for (int r : removed) {
    require_index(m, r, "minor_of");
    if (drop[r]) throw std::invalid_argument("minor_of: repeated index");
    drop[r] = 1;
  }
  MinorMap out;
  out.kept.reserve(n - removed.size());
  for (int i = 0; i < n; ++i)
    if (!drop[i]) out.kept.push_back(i);
  const int k = static_cast<int>(out.kept.size());
  out.matrix = SymmetricMatrix(k);
  for (int li = 0; li < k; ++li)
    for (int lj = li; lj < k; ++lj)
      out.matrix.set(li, lj, m(out.kept[li], out.kept[lj]));
  return out;
}

Resolvent green_function(const SymmetricMatrix& m, cd z) {
  require_nonempty(m, "green_function");
  require_upper(z, "green_function");
  const int n = m.size();
  SpectralCache c(m, false);
  std::vector<double> wre, wim, scratch;
  c.weights(z, wre, wim);
  Resolvent r;
  r.n = n;
  r.z = z;
  r.g_re.resize(static_cast<std::size_t>(n) * n);
  r.g_im.resize(static_cast<std::size_t>(n) * n);
  c.planes(wre, wim, scratch, r.g_re.data(), r.g_im.data());
  r.m = diag_mean(r.g_re, r.g_im, n);
  return r;
}

Resolvent green_function_direct(const SymmetricMatrix& m, cd z) {
  require_nonempty(m, "green_function_direct");
  require_upper(z, "green_function_direct");
  const int n = m.size();
  const std::vector<double> dense = m.to_dense();
  std::vector<cd> a(dense.begin(), dense.end());
  std::vector<cd> b(static_cast<std::size_t>(n) * n, cd(0.0));
  for (int i = 0; i < n; ++i) {
    a[static_cast<std::size_t>(i) * n + i] -= z;
    b[static_cast<std::size_t>(i) * n + i] = 1.0;
  }
  std::vector<lapack_int> ipiv(n);
  const lapack_int info = LAPACKE_zgesv(LAPACK_COL_MAJOR, n, n, a.data(), n,
                                        ipiv.data(), b.data(), n);
  if (info != 0)
    throw std::runtime_error("green_function_direct: zgesv failed with info " +
                             std::to_string(info));
  Resolvent r;
  r.n = n;
  r.z = z;
  r.g_re.resize(static_cast<std::size_t>(n) * n);
  r.g_im.resize(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const cd v = b[static_cast<std::size_t>(j) * n + i];  // column major
      r.g_re[static_cast<std::size_t>(i) * n + j] = v.real();
      r.g_im[static_cast<std::size_t>(i) * n + j] = v.imag();
    }
  r.m = diag_mean(r.g_re, r.g_im, n);
  return r;
}

double resolvent_residual(const SymmetricMatrix& m, const Resolvent& r) {
  if (m.size() != r.n)
    throw std::invalid_argument("resolvent_residual: size mismatch");
  require_nonempty(m, "resolvent_residual");
  const int n = r.n;
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  const std::vector<double> dense = m.to_dense();
  std::vector<double> pre(nn), pim(nn);
  cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, n, n, n, 1.0,
              dense.data(), n, r.g_re.data(), n, 0.0, pre.data(), n);
  cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, n, n, n, 1.0,
              dense.data(), n, r.g_im.data(), n, 0.0, pim.data(), n);
  const double zr = r.z.real(), zi = r.z.imag();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::size_t k = static_cast<std::size_t>(i) * n + j;
      double rre = pre[k] - (zr * r.g_re[k] - zi * r.g_im[k]);
      double rim = pim[k] - (zr * r.g_im[k] + zi * r.g_re[k]);
      if (i == j) rre -= 1.0;
      worst = std::max(worst, rre * rre + rim * rim);
    }
  return std::sqrt(worst);
}

ControlParams control_params(const Resolvent& r, cd msc) {
  if (r.n < 1) throw std::invalid_argument("control_params: empty resolvent");
  require_upper(r.z, "control_params");
  const int n = r.n;
  const double eta = r.z.imag();
  ControlParams cp;
  cp.lambda = std::abs(r.m - msc);
  double worst_d = 0.0;
  for (int i = 0; i < n; ++i)
    worst_d = std::max(worst_d, std::abs(plane_at(r.g_re, r.g_im, n, i, i) - msc));
  cp.lambda_d = worst_d;
  cp.lambda_o = offdiag_max(r.g_re, r.g_im, n);
  cp.psi = std::sqrt((cp.lambda + msc.imag()) / (n * eta));
  return cp;
}

double ward_residual(const Resolvent& r) {
  if (r.n < 1) throw std::invalid_argument("ward_residual: empty resolvent");
  require_upper(r.z, "ward_residual");
  const int n = r.n;
  const double eta = r.z.imag();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const std::size_t off = static_cast<std::size_t>(i) * n;
    const double row = simd::sum_abs2(r.g_re.data() + off, r.g_im.data() + off, n);
    worst = std::max(worst, std::abs(row - r.g_im[off + i] / eta));
  }
  return worst;
}

double minor_update_residual(const SymmetricMatrix& m, cd z, int i, int j, int k) {
  require_upper(z, "minor_update_residual");
  require_index(m, i, "minor_update_residual");
  require_index(m, j, "minor_update_residual");
  require_index(m, k, "minor_update_residual");
  if (i == k || j == k)
    throw std::invalid_argument("minor_update_residual: i and j must differ from k");
  SpectralCache parent(m, true);
  std::vector<double> wre, wim;
  parent.weights(z, wre, wim);
  const cd g_ij = parent.entry(wre, wim, i, j);
  const cd g_ik = parent.entry(wre, wim, i, k);
  const cd g_kj = parent.entry(wre, wim, k, j);
  const cd g_kk = parent.entry(wre, wim, k, k);
  if (std::abs(g_kk) < kPivotFloor)
    throw std::runtime_error("minor_update_residual: ill-conditioned pivot G_kk");
  MinorMap mm = minor_of(m, std::array{k});
  SpectralCache c(mm.matrix, true);
  std::vector<double> mwre, mwim;
  c.weights(z, mwre, mwim);
  const cd g_minor = c.entry(mwre, mwim, mm.local(i), mm.local(j));
  return std::abs(g_ij - g_minor - g_ik * g_kj / g_kk);
}

cd coupling(const SymmetricMatrix& m, cd z, int i, int j) {
  require_upper(z, "coupling");
  require_index(m, i, "coupling");
  require_index(m, j, "coupling");
  if (m.size() < 3) throw std::invalid_argument("coupling: matrix too small");
  std::vector<double> wre, wim;
  if (i != j) return bilinear(pair_minor(m, i, j), z, wre, wim);
  const SingleMinor sm = single_minor(m, i);
  const cd trace = simd::cauchy_sum(sm.values.data(), sm.values.size(),
                                    z.real(), z.imag());
  return quadratic(sm, z) - trace / static_cast<double>(m.size());
}

SchurResiduals schur_residuals(const SymmetricMatrix& m, cd z, int i, int j) {
  require_upper(z, "schur_residuals");
  require_index(m, i, "schur_residuals");
  require_index(m, j, "schur_residuals");
  if (i == j) throw std::invalid_argument("schur_residuals: requires i != j");
  if (m.size() < 3) throw std::invalid_argument("schur_residuals: matrix too small");
  SpectralCache parent(m, true);
  std::vector<double> wre, wim;
  parent.weights(z, wre, wim);
  const cd g_ii = parent.entry(wre, wim, i, i);
  const cd g_ij = parent.entry(wre, wim, i, j);

  MinorMap mi = minor_of(m, std::array{i});
  SpectralCache ci(mi.matrix, true);
  std::vector<double> mwre, mwim;
  ci.weights(z, mwre, mwim);
  const cd gi_jj = ci.entry(mwre, mwim, mi.local(j), mi.local(j));
  const std::vector<double> p = project(ci.es, couplings(m, i, mi.kept));
  std::vector<double> psq(p.size());
  for (std::size_t a = 0; a < p.size(); ++a) psq[a] = p[a] * p[a];
  const cd z_ii = simd::weighted_cauchy_sum(ci.es.values.data(), psq.data(),
                                            psq.size(), z.real(), z.imag());

  const cd z_ij = bilinear(pair_minor(m, i, j), z, mwre, mwim);
  SchurResiduals out;
  out.offdiag = std::abs(g_ij + g_ii * gi_jj * (m(i, j) - z_ij));
  out.diag = std::abs(g_ii - 1.0 / (m(i, i) - z - z_ii));
  return out;
}

double self_consistent_residual(const SymmetricMatrix& m, cd z, cd msc) {
  require_upper(z, "self_consistent_residual");
  const int n = m.size();
  if (n < 2) throw std::invalid_argument("self_consistent_residual: matrix too small");
  if (n > 600)
    throw std::invalid_argument(
        "self_consistent_residual: n too large for the all-minors route");
  SpectralCache parent(m, false);
  std::vector<double> wre, wim, scratch;
  parent.weights(z, wre, wim);
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  std::vector<double> gre(nn), gim(nn);
  parent.planes(wre, wim, scratch, gre.data(), gim.data());
  const cd m_tr = diag_mean(gre, gim, n);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const SingleMinor sm = single_minor(m, i);
    const cd g_ii = plane_at(gre, gim, n, i, i);
    const std::size_t off = static_cast<std::size_t>(i) * n;
    cd rowdot = 0.0;
    for (int j = 0; j < n; ++j) {
      const double re = gre[off + j], im = gim[off + j];
      rowdot += cd(re * re - im * im, 2.0 * re * im);
    }
    const cd a_i = rowdot / (g_ii * static_cast<double>(n));
    const cd m_minor = simd::cauchy_sum(sm.values.data(), sm.values.size(),
                                        z.real(), z.imag()) /
                       static_cast<double>(n);
    const cd z_i = quadratic(sm, z) - m_minor;
    const cd upsilon = m(i, i) - z_i + a_i;
    const cd denom = -z - msc - ((m_tr - msc) - upsilon);
    worst = std::max(worst, std::abs(g_ii - 1.0 / denom));
  }
  return worst;
}

double minor_trace_residual(const SymmetricMatrix& m, cd z, int i) {
  require_upper(z, "minor_trace_residual");
  require_index(m, i, "minor_trace_residual");
  const int n = m.size();
  if (n < 2) throw std::invalid_argument("minor_trace_residual: matrix too small");
  SpectralCache parent(m, true);
  std::vector<double> wre, wim;
  parent.weights(z, wre, wim);
  const cd m_tr = simd::cauchy_sum(parent.es.values.data(), n, z.real(), z.imag()) /
                  static_cast<double>(n);
  const cd g_ii = parent.entry(wre, wim, i, i);
  cd rowdot = 0.0;
  for (int j = 0; j < n; ++j) {
    const cd g_ij = parent.entry(wre, wim, i, j);
    rowdot += g_ij * g_ij;
  }
  const MinorMap mm = minor_of(m, std::array{i});
  const std::vector<double> vals = linalg::eigenvalues(mm.matrix);
  const cd m_minor = simd::cauchy_sum(vals.data(), vals.size(), z.real(), z.imag()) /
                     static_cast<double>(n);
  return std::abs(m_minor - (m_tr - rowdot / (g_ii * static_cast<double>(n))));
}

double perturbation_residual(const SymmetricMatrix& h, double f, cd z) {
  require_nonempty(h, "perturbation_residual");
  require_upper(z, "perturbation_residual");
  if (!std::isfinite(f))
    throw std::invalid_argument("perturbation_residual: f must be finite");
  const int n = h.size();
  const std::vector<double> e = ensemble::uniform_unit_vector(n);
  const auto quad_form = [&](const SymmetricMatrix& mat) {
    linalg::Eigensystem es = linalg::eigh(mat);
    const std::vector<double> p = project(es, e);
    std::vector<double> psq(p.size());
    for (std::size_t a = 0; a < p.size(); ++a) psq[a] = p[a] * p[a];
    return simd::weighted_cauchy_sum(es.values.data(), psq.data(), psq.size(),
                                     z.real(), z.imag());
  };
  const cd plain = quad_form(h);
  const cd shifted = quad_form(ensemble::apply_mean_shift(h, f));
  return std::abs(1.0 / shifted - f - 1.0 / plain);
}

cd graded_component(const SymmetricMatrix& m, cd z, int i, int j,
                    std::span<const int> s, std::span<const int> u) {
  require_upper(z, "graded_component");
  require_index(m, i, "graded_component");
  require_index(m, j, "graded_component");
  const std::vector<int> ss = checked_subset(m, s, i, j, "graded_component");
  const std::vector<int> uu = checked_subset(m, u, i, j, "graded_component");
  if (!std::includes(ss.begin(), ss.end(), uu.begin(), uu.end()))
    throw std::invalid_argument("graded_component: u must be a subset of s");
  // base = s \ u stays removed in every term
  std::vector<int> base;
  std::set_difference(ss.begin(), ss.end(), uu.begin(), uu.end(),
                      std::back_inserter(base));
  const int usz = static_cast<int>(uu.size());
  cd acc = 0.0;
  for (int tmask = 0; tmask < (1 << usz); ++tmask) {
    std::vector<int> removed = base;
    for (int b = 0; b < usz; ++b)
      if (tmask >> b & 1) removed.push_back(uu[b]);
    const cd term = minor_entry(m, z, i, j, removed);
    acc += (std::popcount(static_cast<unsigned>(tmask)) % 2 == 0) ? term : -term;
  }
  return acc;
}

GradedReport graded_report(const SymmetricMatrix& m, cd z, int i, int j,
                           std::span<const int> s) {
  require_upper(z, "graded_report");
  require_index(m, i, "graded_report");
  require_index(m, j, "graded_report");
  const std::vector<int> ss = checked_subset(m, s, i, j, "graded_report");
  const int k = static_cast<int>(ss.size());
  const int smask = (1 << k) - 1;
  std::vector<cd> g(1 << k);
  for (int mask = 0; mask <= smask; ++mask)
    g[mask] = minor_entry(m, z, i, j, mask_indices(ss, mask));
  const std::vector<cd> comp = components_from_entries(g, smask);

  const Resolvent full = green_function(m, z);
  const double lambda_o = offdiag_max(full.g_re, full.g_im, full.n);

  GradedReport out;
  out.terms.reserve(comp.size());
  cd total = 0.0;
  double fitted = 0.0;
  bool unbounded = false;
  for (int umask = 0; umask <= smask; ++umask) {
    out.terms.push_back({mask_indices(ss, umask), comp[umask]});
    total += comp[umask];
    if (umask == 0) continue;
    const double mag = std::abs(comp[umask]);
    if (mag == 0.0) continue;
    if (lambda_o == 0.0) {
      unbounded = true;
      continue;
    }
    const int usz = std::popcount(static_cast<unsigned>(umask));
    fitted = std::max(fitted,
                      std::pow(mag, 1.0 / (usz + 1)) / (usz * lambda_o));
  }
  out.sum_residual = std::abs(total - g[0]);
  out.fitted_c = unbounded ? std::numeric_limits<double>::infinity() : fitted;
  return out;
}

std::vector<IdentityResiduals> identity_scan(const SymmetricMatrix& h, double f,
                                             std::span<const SpectralParam> zs) {
  const int n = h.size();
  if (n < 12) throw std::invalid_argument("identity_scan: n must be at least 12");
  if (n > 400)
    throw std::invalid_argument("identity_scan: n too large for the all-minors route");
  if (!std::isfinite(f))
    throw std::invalid_argument("identity_scan: f must be finite");
  for (const SpectralParam& p : zs)
    if (!p.valid())
      throw std::invalid_argument("identity_scan: probe points need eta > 0");

  constexpr int kPivots = 5;          // minor-update pivots and Schur pairs
  const std::vector<int> gs{5, 6, 7};  // graded subset, target entry (0, 1)

  SpectralCache parent(h, false);

  // Quadratic forms of the uniform vector against h and its shifted version,
  // for the rank-one perturbation check.
  std::vector<double> shifted_values, shifted_psq, parent_psq;
  {
    const std::vector<double> e = ensemble::uniform_unit_vector(n);
    const std::vector<double> pe = project(parent.es, e);
    parent_psq.resize(pe.size());
    for (std::size_t a = 0; a < pe.size(); ++a) parent_psq[a] = pe[a] * pe[a];
    linalg::Eigensystem est = linalg::eigh(ensemble::apply_mean_shift(h, f));
    const std::vector<double> pt = project(est, e);
    shifted_psq.resize(pt.size());
    for (std::size_t a = 0; a < pt.size(); ++a) shifted_psq[a] = pt[a] * pt[a];
    shifted_values = std::move(est.values);
  }

  struct Pivot {
    MinorMap mm;
    SpectralCache c;
  };
  std::vector<Pivot> pivots;
  pivots.reserve(kPivots);
  for (int k = 0; k < kPivots; ++k) {
    MinorMap mm = minor_of(h, std::array{k});
    SpectralCache c(mm.matrix, false);
    pivots.push_back({std::move(mm), std::move(c)});
  }

  std::vector<SingleMinor> singles;
  singles.reserve(n);
  for (int i = 0; i < n; ++i) singles.push_back(single_minor(h, i));

  std::vector<PairMinor> pair_minors;
  int pair_at[kPivots][kPivots] = {};
  for (int i = 0; i < kPivots; ++i)
    for (int j = i + 1; j < kPivots; ++j) {
      pair_at[i][j] = pair_at[j][i] = static_cast<int>(pair_minors.size());
      pair_minors.push_back(pair_minor(h, i, j));
    }

  struct Masked {
    MinorMap mm;
    SpectralCache c;
  };
  std::vector<Masked> masked;
  masked.reserve(8);
  for (int mask = 0; mask < 8; ++mask) {
    MinorMap mm = minor_of(h, mask_indices(gs, mask));
    SpectralCache c(mm.matrix, true);
    masked.push_back({std::move(mm), std::move(c)});
  }

  const std::size_t nn = static_cast<std::size_t>(n) * n;
  const std::size_t mm1 = static_cast<std::size_t>(n - 1) * (n - 1);
  std::vector<double> wre, wim, mwre, mwim, scratch;
  std::vector<double> gre(nn), gim(nn), kre(mm1), kim(mm1);
  std::vector<cd> zdiag(n), rowdot(n), g_masks(8);

  std::vector<IdentityResiduals> out;
  out.reserve(zs.size());
  for (const SpectralParam& p : zs) {
    const cd z = p.z();
    const double eta = p.eta;
    parent.weights(z, wre, wim);
    parent.planes(wre, wim, scratch, gre.data(), gim.data());
    IdentityResiduals res{};

    const cd m_tr = diag_mean(gre, gim, n);
    for (int i = 0; i < n; ++i) {
      const std::size_t off = static_cast<std::size_t>(i) * n;
      const double row = simd::sum_abs2(gre.data() + off, gim.data() + off, n);
      res.ward = std::max(res.ward, std::abs(row - gim[off + i] / eta));
      cd rd = 0.0;
      for (int j = 0; j < n; ++j) {
        const double re = gre[off + j], im = gim[off + j];
        rd += cd(re * re - im * im, 2.0 * re * im);
      }
      rowdot[i] = rd;
    }

    // Minor update over every entry of each pivot's minor; the minor planes
    // also hand us the G^(i)_jj values the Schur check needs.
    cd gi_jj[kPivots][kPivots] = {};
    for (int k = 0; k < kPivots; ++k) {
      pivots[k].c.weights(z, mwre, mwim);
      pivots[k].c.planes(mwre, mwim, scratch, kre.data(), kim.data());
      const std::vector<int>& kept = pivots[k].mm.kept;
      const int m1 = n - 1;
      const cd g_kk = plane_at(gre, gim, n, k, k);
      for (int li = 0; li < m1; ++li) {
        const int i = kept[li];
        const cd g_ik = plane_at(gre, gim, n, i, k);
        for (int lj = 0; lj < m1; ++lj) {
          const int j = kept[lj];
          const cd lhs = plane_at(gre, gim, n, i, j);
          const cd g_minor = plane_at(kre, kim, m1, li, lj);
          const cd g_kj = plane_at(gre, gim, n, k, j);
          res.minor_update =
              std::max(res.minor_update, std::abs(lhs - g_minor - g_ik * g_kj / g_kk));
        }
      }
      for (int j = 0; j < kPivots; ++j) {
        if (j == k) continue;
        const int lj = pivots[k].mm.local(j);
        gi_jj[k][j] = plane_at(kre, kim, m1, lj, lj);
      }
    }

    // Schur diagonal over every index, off-diagonal over the pivot pairs.
    for (int i = 0; i < n; ++i) {
      zdiag[i] = quadratic(singles[i], z);
      const cd g_ii = plane_at(gre, gim, n, i, i);
      res.schur_diag = std::max(
          res.schur_diag, std::abs(g_ii - 1.0 / (h(i, i) - z - zdiag[i])));
    }
    for (int i = 0; i < kPivots; ++i)
      for (int j = 0; j < kPivots; ++j) {
        if (i == j) continue;
        const cd z_ij = bilinear(pair_minors[pair_at[i][j]], z, mwre, mwim);
        const cd g_ii = plane_at(gre, gim, n, i, i);
        const cd g_ij = plane_at(gre, gim, n, i, j);
        res.schur_offdiag = std::max(
            res.schur_offdiag,
            std::abs(g_ij + g_ii * gi_jj[i][j] * (h(i, j) - z_ij)));
      }

    const cd msc = semicircle::stieltjes(z);
    for (int i = 0; i < n; ++i) {
      const cd g_ii = plane_at(gre, gim, n, i, i);
      const cd corr = rowdot[i] / (g_ii * static_cast<double>(n));
      const cd m_minor = simd::cauchy_sum(singles[i].values.data(),
                                          singles[i].values.size(), p.e, eta) /
                         static_cast<double>(n);
      const cd z_i = zdiag[i] - m_minor;
      const cd upsilon = h(i, i) - z_i + corr;
      const cd denom = -z - msc - ((m_tr - msc) - upsilon);
      res.self_consistent =
          std::max(res.self_consistent, std::abs(g_ii - 1.0 / denom));
      res.minor_trace =
          std::max(res.minor_trace, std::abs(m_minor - (m_tr - corr)));
    }

    const cd plain = simd::weighted_cauchy_sum(
        parent.es.values.data(), parent_psq.data(), parent_psq.size(), p.e, eta);
    const cd tilted = simd::weighted_cauchy_sum(
        shifted_values.data(), shifted_psq.data(), shifted_psq.size(), p.e, eta);
    res.perturbation = std::abs(1.0 / tilted - f - 1.0 / plain);

    for (int mask = 0; mask < 8; ++mask) {
      masked[mask].c.weights(z, mwre, mwim);
      g_masks[mask] = masked[mask].c.entry(mwre, mwim, masked[mask].mm.local(0),
                                           masked[mask].mm.local(1));
    }
    const std::vector<cd> comp = components_from_entries(g_masks, 7);
    cd total = 0.0;
    for (const cd& c : comp) total += c;
    res.graded = std::abs(total - g_masks[0]);

    out.push_back(res);
  }
  return out;
}

std::vector<ScanRow> control_scan(const SymmetricMatrix& m, double q,
                                  std::span<const SpectralParam> grid) {
  require_nonempty(m, "control_scan");
  if (!(q > 0.0)) throw std::invalid_argument("control_scan: q must be positive");
  for (const SpectralParam& p : grid)
    if (!p.valid())
      throw std::invalid_argument("control_scan: grid points need eta > 0");
  const int n = m.size();
  SpectralCache c(m, false);
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  std::vector<double> wre, wim, scratch, gre(nn), gim(nn);
  std::vector<ScanRow> rows;
  rows.reserve(grid.size());
  for (const SpectralParam& p : grid) {
    const cd z = p.z();
    c.weights(z, wre, wim);
    c.planes(wre, wim, scratch, gre.data(), gim.data());
    const cd msc = semicircle::stieltjes(z);
    const cd m_tr = diag_mean(gre, gim, n);
    ScanRow row;
    row.e = p.e;
    row.eta = p.eta;
    row.kappa = semicircle::edge_distance(p.e);
    row.lambda = std::abs(m_tr - msc);
    double worst_d = 0.0;
    for (int i = 0; i < n; ++i)
      worst_d = std::max(worst_d, std::abs(plane_at(gre, gim, n, i, i) - msc));
    row.lambda_d = worst_d;
    row.lambda_o = offdiag_max(gre, gim, n);
    row.psi = std::sqrt((row.lambda + msc.imag()) / (n * p.eta));
    const double inv_neta = 1.0 / (n * p.eta);
    row.bound_m =
        std::min(1.0 / (q * q * std::sqrt(row.kappa + p.eta)), 1.0 / q) + inv_neta;
    row.bound_ij = 1.0 / q + std::sqrt(msc.imag() * inv_neta) + inv_neta;
    row.ratio_m = row.lambda / row.bound_m;
    row.ratio_ij = std::max(row.lambda_d, row.lambda_o) / row.bound_ij;
    rows.push_back(row);
  }
  return rows;
}

ExpansionError expansion_error(const SymmetricMatrix& h, double f, cd z, double q) {
  require_upper(z, "expansion_error");
  if (!(q > 0.0)) throw std::invalid_argument("expansion_error: q must be positive");
  if (!std::isfinite(f))
    throw std::invalid_argument("expansion_error: f must be finite");
  const int n = h.size();
  if (n < 3) throw std::invalid_argument("expansion_error: matrix too small");
  if (n > 400)
    throw std::invalid_argument("expansion_error: n too large for the all-minors route");
  const SymmetricMatrix shifted = ensemble::apply_mean_shift(h, f);
  const int m1 = n - 1;
  std::vector<double> wre(m1), wim(m1), cre(m1), cim(m1), rre(m1), rim(m1);
  cd acc = 0.0;
  for (int i = 1; i < n; ++i) {
    const MinorMap mm = minor_of(shifted, std::array{i});
    const linalg::Eigensystem es = linalg::eigh(mm.matrix);
    simd::cauchy_weights(es.values.data(), m1, z.real(), z.imag(), wre.data(),
                         wim.data());
    // c_a = w_a * u_a(0); index 0 is local 0 in every minor here since i >= 1
    for (int a = 0; a < m1; ++a) {
      const double v0 = es.vectors[static_cast<std::size_t>(a) * m1];
      cre[a] = wre[a] * v0;
      cim[a] = wim[a] * v0;
    }
    cblas_dgemv(CblasRowMajor, CblasTrans, m1, m1, 1.0, es.vectors.data(), m1,
                cre.data(), 1, 0.0, rre.data(), 1);
    cblas_dgemv(CblasRowMajor, CblasTrans, m1, m1, 1.0, es.vectors.data(), m1,
                cim.data(), 1, 0.0, rim.data(), 1);
    for (int k = 0; k < m1; ++k)
      acc += cd(rre[k], rim[k]) * h(mm.kept[k], i);
  }
  ExpansionError out;
  out.value = acc / static_cast<double>(n);
  const cd msc = semicircle::stieltjes(z);
  const double neta = n * z.imag();
  out.bound = 1.0 / (q * q) + msc.imag() / neta + 1.0 / (neta * neta);
  out.ratio = std::abs(out.value) / out.bound;
  return out;
}

}  // namespace sclab::resolvent
