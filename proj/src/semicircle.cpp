#include "sclab/semicircle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sclab::semicircle {

namespace {
constexpr double kPi = std::numbers::pi;
}

double density(double x) {
  const double s = 4.0 - x * x;
  return s > 0.0 ? std::sqrt(s) / (2.0 * kPi) : 0.0;
}

cd stieltjes(cd z) {
  if (z.imag() <= 0.0)
    throw std::invalid_argument("stieltjes: z must lie in the upper half plane");
  const cd s = std::sqrt(z * z - 4.0);
  // The two roots are -(z +- s)/2 and their product is 1. Form d = z +- s with
  // the sign that maximizes |d|; then -d/2 and -2/d are the roots, computed
  // without subtractive cancellation. The transform is the one with Im > 0.
  const cd d = std::norm(z + s) >= std::norm(z - s) ? z + s : z - s;
  const cd root_small = -2.0 / d;
  if (root_small.imag() > 0.0) return root_small;
  return -d / 2.0;
}

double integrated(double e) {
  if (e <= -2.0) return 0.0;
  if (e >= 2.0) return 1.0;
  // Antiderivative of the density: differentiating reproduces
  // sqrt(4 - e^2)/(2*pi), and the endpoints give 0 and 1.
  const double v =
      0.5 + e * std::sqrt(4.0 - e * e) / (4.0 * kPi) + std::asin(e / 2.0) / kPi;
  return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
}

double edge_distance(double e) { return std::fabs(std::fabs(e) - 2.0); }

double classical_location(int alpha, int n) {
  if (n < 1 || alpha < 1 || alpha > n)
    throw std::invalid_argument("classical_location: need 1 <= alpha <= n");
  if (alpha == n) return 2.0;
  if (2 * alpha == n) return 0.0;
  const double target = static_cast<double>(alpha) / n;
  double lo = -2.0, hi = 2.0;
  // Plain bisection. The integrated density is monotone, and its derivative
  // vanishes at the edges, so bisection converges safely where a Newton step
  // would stall; 100 halvings take the bracket far below double resolution.
  for (int it = 0; it < 100 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (integrated(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double expected_count(double e1, double e2, int n) {
  if (!(e1 < e2)) throw std::invalid_argument("expected_count: need e1 < e2");
  if (n < 1) throw std::invalid_argument("expected_count: need n >= 1");
  return n * (integrated(e2) - integrated(e1));
}

}  // namespace sclab::semicircle
