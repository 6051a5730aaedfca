#include "kernel_table.hpp"

// AVX2 variants, 4 doubles per lane, scalar tail. Elementwise kernels
// (weights, max reductions) deliberately use separate mul/add instead of FMA
// so each element matches the scalar reference bit for bit; only the
// accumulation order of the sum kernels differs from scalar.
#if defined(__AVX2__)

#include <immintrin.h>

#include <cmath>

namespace sclab::simd::detail {
namespace {

double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_max_sd(lo, swapped));
}

void cauchy_weights_impl(const double* lambda, std::size_t n, double e, double eta,
                         double* w_re, double* w_im) {
  const __m256d ve = _mm256_set1_pd(e);
  const __m256d veta = _mm256_set1_pd(eta);
  const __m256d veta2 = _mm256_mul_pd(veta, veta);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d dr = _mm256_sub_pd(_mm256_loadu_pd(lambda + k), ve);
    const __m256d den = _mm256_add_pd(_mm256_mul_pd(dr, dr), veta2);
    _mm256_storeu_pd(w_re + k, _mm256_div_pd(dr, den));
    _mm256_storeu_pd(w_im + k, _mm256_div_pd(veta, den));
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
  const __m256d ve = _mm256_set1_pd(e);
  const __m256d veta = _mm256_set1_pd(eta);
  const __m256d veta2 = _mm256_mul_pd(veta, veta);
  __m256d sr = _mm256_setzero_pd(), si = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d dr = _mm256_sub_pd(_mm256_loadu_pd(lambda + k), ve);
    const __m256d den = _mm256_add_pd(_mm256_mul_pd(dr, dr), veta2);
    sr = _mm256_add_pd(sr, _mm256_div_pd(dr, den));
    si = _mm256_add_pd(si, _mm256_div_pd(veta, den));
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
  const __m256d ve = _mm256_set1_pd(e);
  const __m256d veta = _mm256_set1_pd(eta);
  const __m256d veta2 = _mm256_mul_pd(veta, veta);
  __m256d sr = _mm256_setzero_pd(), si = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d dr = _mm256_sub_pd(_mm256_loadu_pd(lambda + k), ve);
    const __m256d den = _mm256_add_pd(_mm256_mul_pd(dr, dr), veta2);
    const __m256d vw = _mm256_loadu_pd(w + k);
    sr = _mm256_add_pd(sr, _mm256_div_pd(_mm256_mul_pd(vw, dr), den));
    si = _mm256_add_pd(si, _mm256_div_pd(_mm256_mul_pd(vw, veta), den));
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
  __m256d sr = _mm256_setzero_pd(), si = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
    sr = _mm256_add_pd(sr, _mm256_mul_pd(ab, _mm256_loadu_pd(w_re + k)));
    si = _mm256_add_pd(si, _mm256_mul_pd(ab, _mm256_loadu_pd(w_im + k)));
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
  const __m256d vx = _mm256_set1_pd(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d den = _mm256_sub_pd(vx, _mm256_loadu_pd(lambda + k));
    acc = _mm256_add_pd(acc, _mm256_div_pd(_mm256_loadu_pd(w + k), den));
  }
  double s = hsum(acc);
  for (; k < n; ++k) s += w[k] / (x - lambda[k]);
  return s;
}

double sum_abs2_impl(const double* re, const double* im, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d r = _mm256_loadu_pd(re + k);
    const __m256d i = _mm256_loadu_pd(im + k);
    acc = _mm256_add_pd(acc, _mm256_add_pd(_mm256_mul_pd(r, r), _mm256_mul_pd(i, i)));
  }
  double s = hsum(acc);
  for (; k < n; ++k) s += re[k] * re[k] + im[k] * im[k];
  return s;
}

double span_max_abs2(const double* re, const double* im, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d r = _mm256_loadu_pd(re + k);
    const __m256d i = _mm256_loadu_pd(im + k);
    acc = _mm256_max_pd(acc, _mm256_add_pd(_mm256_mul_pd(r, r), _mm256_mul_pd(i, i)));
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
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4)
    acc = _mm256_max_pd(acc, _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(x + k)));
  double m = hmax(acc);
  for (; k < n; ++k) {
    const double v = std::fabs(x[k]);
    if (v > m) m = v;
  }
  return m;
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable t = {
      cauchy_weights_impl,  cauchy_sum_impl, weighted_cauchy_sum_impl,
      weighted_pair_sum_impl, secular_sum_impl, sum_abs2_impl,
      max_abs2_excluding_impl, max_abs_impl,
  };
  return &t;
}

}  // namespace sclab::simd::detail

#else  // !__AVX2__

namespace sclab::simd::detail {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace sclab::simd::detail

#endif
