#include "sclab/linalg.hpp"

#include <lapacke.h>

#include <cmath>
#include <stdexcept>

extern "C" void openblas_set_num_threads(int);

namespace sclab::linalg {
namespace {

// Flip eigenvector rows so the entry of largest magnitude is positive,
// breaking exact-magnitude ties toward the lowest index. This makes the
// decomposition a pure function of the input matrix.
void apply_sign_convention(Eigensystem& es) {
  for (int a = 0; a < es.count; ++a) {
    double* v = es.vectors.data() + static_cast<std::size_t>(a) * es.n;
    int best = 0;
    double best_abs = std::fabs(v[0]);
    for (int i = 1; i < es.n; ++i) {
      const double m = std::fabs(v[i]);
      if (m > best_abs) {
        best_abs = m;
        best = i;
      }
    }
    if (v[best] < 0.0)
      for (int i = 0; i < es.n; ++i) v[i] = -v[i];
  }
}

[[noreturn]] void fail(const char* what, int info) {
  throw std::runtime_error(std::string(what) + " failed, info=" + std::to_string(info));
}

}  // namespace

Eigensystem eigh(const SymmetricMatrix& m) {
  const int n = m.size();
  if (n == 0) throw std::invalid_argument("eigh: empty matrix");
  Eigensystem es;
  es.n = n;
  es.count = n;
  es.values.resize(n);
  // Column-major input: a symmetric matrix has the same layout either way,
  // and the column-major eigenvector output lands as rows of this buffer.
  es.vectors = m.to_dense();
  const int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, es.vectors.data(), n,
                                  es.values.data());
  if (info != 0) fail("dsyevd", info);
  apply_sign_convention(es);
  return es;
}

std::vector<double> eigenvalues(const SymmetricMatrix& m) {
  const int n = m.size();
  if (n == 0) throw std::invalid_argument("eigenvalues: empty matrix");
  std::vector<double> a = m.to_dense();
  std::vector<double> w(n);
  const int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'U', n, a.data(), n, w.data());
  if (info != 0) fail("dsyevd", info);
  return w;
}

Eigensystem eigh_top(const SymmetricMatrix& m, int count) {
  const int n = m.size();
  if (count < 1 || count > n) throw std::invalid_argument("eigh_top: bad count");
  std::vector<double> a = m.to_dense();
  Eigensystem es;
  es.n = n;
  es.count = count;
  es.values.resize(count);
  es.vectors.resize(static_cast<std::size_t>(count) * n);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(count));
  lapack_int found = 0;
  const int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', n, a.data(), n, 0.0,
                                  0.0, n - count + 1, n, 0.0, &found, es.values.data(),
                                  es.vectors.data(), n, isuppz.data());
  if (info != 0) fail("dsyevr", info);
  if (found != count) fail("dsyevr eigenpair count", found);
  apply_sign_convention(es);
  return es;
}

std::vector<double> top_eigenvalues(const SymmetricMatrix& m, int count) {
  const int n = m.size();
  if (count < 1 || count > n) throw std::invalid_argument("top_eigenvalues: bad count");
  std::vector<double> a = m.to_dense();
  std::vector<double> w(count);
  lapack_int found = 0;
  const int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'N', 'I', 'U', n, a.data(), n, 0.0,
                                  0.0, n - count + 1, n, 0.0, &found, w.data(), nullptr,
                                  n, nullptr);
  if (info != 0) fail("dsyevr", info);
  if (found != count) fail("dsyevr eigenvalue count", found);
  return w;
}

void use_single_threaded_blas() { openblas_set_num_threads(1); }

}  // namespace sclab::linalg
