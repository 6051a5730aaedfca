#pragma once

#include <vector>

#include "sclab/types.hpp"

// Thin wrappers over the LAPACK symmetric eigensolvers with a pinned output
// contract: ascending eigenvalues, unit eigenvectors, and a deterministic
// sign convention (the largest-magnitude entry of each vector is positive,
// ties resolved toward the lowest index).
namespace sclab::linalg {

struct Eigensystem {
  int n = 0;      // matrix dimension
  int count = 0;  // number of eigenpairs held (count == n for a full solve)
  std::vector<double> values;   // ascending, size count
  std::vector<double> vectors;  // row alpha = eigenvector alpha, size count*n

  const double* vector(int alpha) const {
    return vectors.data() + static_cast<std::size_t>(alpha) * n;
  }
};

// Full decomposition with vectors.
Eigensystem eigh(const SymmetricMatrix& m);

// All eigenvalues, no vectors (cheaper tridiagonal path).
std::vector<double> eigenvalues(const SymmetricMatrix& m);

// The `count` largest eigenpairs (values still ascending among themselves).
Eigensystem eigh_top(const SymmetricMatrix& m, int count);

// The `count` largest eigenvalues, no vectors.
std::vector<double> top_eigenvalues(const SymmetricMatrix& m, int count);

// Pin the BLAS to one internal thread. Trial-level parallelism lives in the
// lab worker pool; letting OpenBLAS spawn its own threads on top of that
// oversubscribes the machine and invites nondeterministic scheduling.
void use_single_threaded_blas();

}  // namespace sclab::linalg
