#include <cmath>

#include "kernel_table.hpp"

// Reference implementations. These are the semantics contract: every SIMD
// variant must agree with them (exactly for max reductions, to rounding for
// the sums).
namespace sclab::simd::detail {
namespace {

void cauchy_weights_impl(const double* lambda, std::size_t n, double e, double eta,
                         double* w_re, double* w_im) {
  for (std::size_t k = 0; k < n; ++k) {
    const double dr = lambda[k] - e;
    const double den = dr * dr + eta * eta;
    w_re[k] = dr / den;
    w_im[k] = eta / den;
  }
}

std::complex<double> cauchy_sum_impl(const double* lambda, std::size_t n, double e,
                                     double eta) {
  double sr = 0.0, si = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dr = lambda[k] - e;
    const double den = dr * dr + eta * eta;
    sr += dr / den;
    si += eta / den;
  }
  return {sr, si};
}

std::complex<double> weighted_cauchy_sum_impl(const double* lambda, const double* w,
                                              std::size_t n, double e, double eta) {
  double sr = 0.0, si = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dr = lambda[k] - e;
    const double den = dr * dr + eta * eta;
    sr += w[k] * dr / den;
    si += w[k] * eta / den;
  }
  return {sr, si};
}

std::complex<double> weighted_pair_sum_impl(const double* a, const double* b,
                                            const double* w_re, const double* w_im,
                                            std::size_t n) {
  double sr = 0.0, si = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double ab = a[k] * b[k];
    sr += ab * w_re[k];
    si += ab * w_im[k];
  }
  return {sr, si};
}

double secular_sum_impl(const double* lambda, const double* w, std::size_t n, double x) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += w[k] / (x - lambda[k]);
  return s;
}

double sum_abs2_impl(const double* re, const double* im, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += re[k] * re[k] + im[k] * im[k];
  return s;
}

double span_max_abs2(const double* re, const double* im, std::size_t n) {
  double m = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double v = re[k] * re[k] + im[k] * im[k];
    if (v > m) m = v;
  }
  return m;
}

double max_abs2_excluding_impl(const double* re, const double* im, std::size_t n,
                               std::size_t skip) {
  if (skip >= n) return span_max_abs2(re, im, n);
  const double head = span_max_abs2(re, im, skip);
  const double tail = span_max_abs2(re + skip + 1, im + skip + 1, n - skip - 1);
  return head > tail ? head : tail;
}

double max_abs_impl(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double v = std::fabs(x[k]);
    if (v > m) m = v;
  }
  return m;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t = {
      cauchy_weights_impl,  cauchy_sum_impl, weighted_cauchy_sum_impl,
      weighted_pair_sum_impl, secular_sum_impl, sum_abs2_impl,
      max_abs2_excluding_impl, max_abs_impl,
  };
  return t;
}

}  // namespace sclab::simd::detail
