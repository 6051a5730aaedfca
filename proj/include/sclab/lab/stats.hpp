#pragma once

#include <vector>

namespace sclab::lab::stats {

// Linear-interpolation quantile on a copy of the data (the common "type 7"
// estimator: order statistics at positions 1 + q*(n-1)). Requires a non-empty
// sample and q in [0, 1].
double quantile(std::vector<double> xs, double q);

double median(std::vector<double> xs);
double mean(const std::vector<double>& xs);

// Unbiased sample standard deviation; requires at least two points.
double stddev(const std::vector<double>& xs);

struct Summary {
  double median;
  double q05;
  double q95;
};

Summary summarize(const std::vector<double>& xs);

// The smallest s >= 0 such that observed <= (log N)^s * bound holds at the
// requested quantile across the sample. Each pair contributes its own
// exponent log(obs/bound) / log log N; the result is the q-quantile of those,
// floored at zero. Zero observations count as "no slack needed". Requires
// N >= 3 and strictly positive bounds.
double fit_slack(const std::vector<double>& observed, const std::vector<double>& bounds,
                 int n, double q);

}  // namespace sclab::lab::stats
