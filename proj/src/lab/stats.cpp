#include "sclab/lab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sclab::lab::stats {

double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) throw std::invalid_argument("quantile: empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile: q outside [0, 1]");
  std::sort(xs.begin(), xs.end());
  const double pos = q * (xs.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= xs.size()) return xs.back();
  const double frac = pos - static_cast<double>(lo);
  return xs[lo] + frac * (xs[lo + 1] - xs[lo]);
}

double median(std::vector<double> xs) { return quantile(std::move(xs), 0.5); }

double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("mean: empty sample");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double stddev(const std::vector<double>& xs) {
  if (xs.size() < 2) throw std::invalid_argument("stddev: need at least two points");
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

Summary summarize(const std::vector<double>& xs) {
  return Summary{median(xs), quantile(xs, 0.05), quantile(xs, 0.95)};
}

double fit_slack(const std::vector<double>& observed, const std::vector<double>& bounds,
                 int n, double q) {
  if (observed.size() != bounds.size())
    throw std::invalid_argument("fit_slack: size mismatch");
  if (observed.empty()) throw std::invalid_argument("fit_slack: empty sample");
  if (n < 3) throw std::invalid_argument("fit_slack: need n >= 3 for log log n > 0");

  const double loglog = std::log(std::log(static_cast<double>(n)));
  std::vector<double> exponents;
  exponents.reserve(observed.size());
  for (std::size_t k = 0; k < observed.size(); ++k) {
    if (!(bounds[k] > 0.0))
      throw std::invalid_argument("fit_slack: bounds must be positive");
    if (observed[k] < 0.0)
      throw std::invalid_argument("fit_slack: observations must be non-negative");
    // A zero observation needs no slack at all. A large negative sentinel
    // keeps it below every real exponent without injecting infinities into
    // the quantile interpolation.
    if (observed[k] == 0.0)
      exponents.push_back(-1e12);
    else
      exponents.push_back(std::log(observed[k] / bounds[k]) / loglog);
  }
  return std::max(0.0, quantile(std::move(exponents), q));
}

}  // namespace sclab::lab::stats
