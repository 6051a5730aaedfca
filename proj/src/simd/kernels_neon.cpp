#include "kernel_table.hpp"

// NEON variants for aarch64, 2 doubles per lane, scalar tail. Same rounding
// policy as the AVX2 file: elementwise kernels avoid fused ops so every
// element matches the scalar reference exactly.
#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>

namespace sclab::simd::detail {
namespace {

double hsum(float64x2_t v) { return vgetq_lane_f64(v, 0) + vgetq_lane_f64(v, 1); }

double hmax(float64x2_t v) {
  const double a = vgetq_lane_f64(v, 0), b = vgetq_lane_f64(v, 1);
  return a > b ? a : b;
}

void cauchy_weights_impl(const double* lambda, std::size_t n, double e, double eta,
                         double* w_re, double* w_im) {
  const float64x2_t ve = vdupq_n_f64(e);
  const float64x2_t veta = vdupq_n_f64(eta);
  const float64x2_t veta2 = vmulq_f64(veta, veta);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const float64x2_t dr = vsubq_f64(vld1q_f64(lambda + k), ve);
    const float64x2_t den = vaddq_f64(vmulq_f64(dr, dr), veta2);
    vst1q_f64(w_re + k, vdivq_f64(dr, den));
    vst1q_f64(w_im + k, vdivq_f64(veta, den));
  }
  for (; k < n; ++k) {
    const double dr = lambda[k] - e;
    const double den = dr * dr + eta * eta;
    w_re[k] = dr / den;
    w_im[k] = eta / den;
  }
}

std::complex<double> cauchy_sum_impl(const double* lambda, std::size_t n, double e,
                                     double eta) {
  const float64x2_t ve = vdupq_n_f64(e);
  const float64x2_t veta = vdupq_n_f64(eta);
  const float64x2_t veta2 = vmulq_f64(veta, veta);
  float64x2_t sr = vdupq_n_f64(0.0), si = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const float64x2_t dr = vsubq_f64(vld1q_f64(lambda + k), ve);
    const float64x2_t den = vaddq_f64(vmulq_f64(dr, dr), veta2);
    sr = vaddq_f64(sr, vdivq_f64(dr, den));
    si = vaddq_f64(si, vdivq_f64(veta, den));
  }
  double tr = hsum(sr), ti = hsum(si);
  for (; k < n; ++k) {
    const double dr = lambda[k] - e;
    const double den = dr * dr + eta * eta;
    tr += dr / den;
    ti += eta / den;
  }
  return {tr, ti};
}

std::complex<double> weighted_cauchy_sum_impl(const double* lambda, const double* w,
                                              std::size_t n, double e, double eta) {
  const float64x2_t ve = vdupq_n_f64(e);
  const float64x2_t veta = vdupq_n_f64(eta);
  const float64x2_t veta2 = vmulq_f64(veta, veta);
  float64x2_t sr = vdupq_n_f64(0.0), si = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const float64x2_t dr = vsubq_f64(vld1q_f64(lambda + k), ve);
    const float64x2_t den = vaddq_f64(vmulq_f64(dr, dr), veta2);
    const float64x2_t vw = vld1q_f64(w + k);
    sr = vaddq_f64(sr, vdivq_f64(vmulq_f64(vw, dr), den));
    si = vaddq_f64(si, vdivq_f64(vmulq_f64(vw, veta), den));
  }
  double tr = hsum(sr), ti = hsum(si);
  for (; k < n; ++k) {
    const double dr = lambda[k] - e;
    const double den = dr * dr + eta * eta;
    tr += w[k] * dr / den;
    ti += w[k] * eta / den;
  }
  return {tr, ti};
}

std::complex<double> weighted_pair_sum_impl(const double* a, const double* b,
                                            const double* w_re, const double* w_im,
                                            std::size_t n) {
  float64x2_t sr = vdupq_n_f64(0.0), si = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const float64x2_t ab = vmulq_f64(vld1q_f64(a + k), vld1q_f64(b + k));
    sr = vaddq_f64(sr, vmulq_f64(ab, vld1q_f64(w_re + k)));
    si = vaddq_f64(si, vmulq_f64(ab, vld1q_f64(w_im + k)));
  }
  double tr = hsum(sr), ti = hsum(si);
  for (; k < n; ++k) {
    const double ab = a[k] * b[k];
    tr += ab * w_re[k];
    ti += ab * w_im[k];
  }
  return {tr, ti};
}

double secular_sum_impl(const double* lambda, const double* w, std::size_t n, double x) {
  const float64x2_t vx = vdupq_n_f64(x);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const float64x2_t den = vsubq_f64(vx, vld1q_f64(lambda + k));
    acc = vaddq_f64(acc, vdivq_f64(vld1q_f64(w + k), den));
  }
  double s = hsum(acc);
  for (; k < n; ++k) s += w[k] / (x - lambda[k]);
  return s;
}

double sum_abs2_impl(const double* re, const double* im, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const float64x2_t r = vld1q_f64(re + k);
    const float64x2_t i = vld1q_f64(im + k);
    acc = vaddq_f64(acc, vaddq_f64(vmulq_f64(r, r), vmulq_f64(i, i)));
  }
  double s = hsum(acc);
  for (; k < n; ++k) s += re[k] * re[k] + im[k] * im[k];
  return s;
}

double span_max_abs2(const double* re, const double* im, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const float64x2_t r = vld1q_f64(re + k);
    const float64x2_t i = vld1q_f64(im + k);
    acc = vmaxq_f64(acc, vaddq_f64(vmulq_f64(r, r), vmulq_f64(i, i)));
  }
  double m = hmax(acc);
  for (; k < n; ++k) {
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
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) acc = vmaxq_f64(acc, vabsq_f64(vld1q_f64(x + k)));
  double m = hmax(acc);
  for (; k < n; ++k) {
    const double v = std::fabs(x[k]);
    if (v > m) m = v;
  }
  return m;
}

}  // namespace

const KernelTable* neon_table() {
  static const KernelTable t = {
      cauchy_weights_impl,  cauchy_sum_impl, weighted_cauchy_sum_impl,
      weighted_pair_sum_impl, secular_sum_impl, sum_abs2_impl,
      max_abs2_excluding_impl, max_abs_impl,
  };
  return &t;
}

}  // namespace sclab::simd::detail

#else  // !__aarch64__

namespace sclab::simd::detail {
const KernelTable* neon_table() { return nullptr; }
}  // namespace sclab::simd::detail

#endif
