#pragma once

#include <complex>

#include "sclab/types.hpp"

// The semicircle reference model on [-2, 2]: density, Stieltjes transform,
// integrated density, quantile locations, and window counts. Everything here
// is deterministic closed-form or bisection; the randomness lives elsewhere.
namespace sclab::semicircle {

// Probe domain: |E| <= sigma, 0 < eta_min <= eta <= eta_max.
struct Domain {
  double sigma = 3.0;
  double eta_min = 1e-3;
  double eta_max = 3.0;
  bool contains(const SpectralParam& p) const {
    return p.eta > 0.0 && p.eta >= eta_min && p.eta <= eta_max &&
           p.e >= -sigma && p.e <= sigma;
  }
};

// (2*pi)^{-1} * sqrt(max(4 - x^2, 0))
double density(double x);

// The Stieltjes transform of the density: the root of m^2 + z*m + 1 = 0 with
// positive imaginary part. Requires Im z > 0. Computed through the
// larger-magnitude branch of z + sqrt(z^2 - 4) so neither root suffers
// cancellation.
cd stieltjes(cd z);

// Mass of the density below e, clamped to [0, 1].
double integrated(double e);

// Distance of E to the spectral edges: | |E| - 2 |.
double edge_distance(double e);

// The alpha-th n-quantile location g, solving integrated(g) = alpha/n, for
// 1 <= alpha <= n. Exact special cases: alpha = n gives 2, 2*alpha = n gives 0.
double classical_location(int alpha, int n);

// Expected number of eigenvalues in (e1, e2] for dimension n. Requires e1 < e2.
double expected_count(double e1, double e2, int n);

}  // namespace sclab::semicircle
