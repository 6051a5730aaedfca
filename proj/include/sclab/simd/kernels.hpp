#pragma once

#include <complex>
#include <cstddef>
#include <string>

// Vectorized reduction kernels for the hot inner loops: resolvent weights,
// Cauchy sums, secular-function evaluation, Ward row sums and max reductions.
// Every kernel has a scalar reference implementation and, where the hardware
// supports it, an AVX2 (x86-64) or NEON (aarch64) variant. The variant is
// picked once at runtime from cpuid; tests can force a specific one and check
// that all available variants agree.
namespace sclab::simd {

enum class Variant { scalar, avx2, neon };

Variant active_variant();
bool variant_available(Variant v);
// Force a specific variant (returns false and leaves the selection alone if
// that variant is not available on this machine).
bool force_variant(Variant v);
// Back to automatic selection. The SCLAB_SIMD environment variable
// ("scalar", "avx2", "neon") is honored by automatic selection.
void reset_variant();
std::string variant_name(Variant v);

// w[k] = 1 / (lambda[k] - (e + i*eta)), written as separate re/im planes.
void cauchy_weights(const double* lambda, std::size_t n, double e, double eta,
                    double* w_re, double* w_im);

// sum_k 1 / (lambda[k] - (e + i*eta))
std::complex<double> cauchy_sum(const double* lambda, std::size_t n, double e, double eta);

// sum_k w[k] / (lambda[k] - (e + i*eta)) for real weights w.
std::complex<double> weighted_cauchy_sum(const double* lambda, const double* w,
                                         std::size_t n, double e, double eta);

// sum_k a[k] * b[k] * (w_re[k] + i*w_im[k])
std::complex<double> weighted_pair_sum(const double* a, const double* b,
                                       const double* w_re, const double* w_im,
                                       std::size_t n);

// sum_k w[k] / (x - lambda[k]); the monotone rational function bisected by the
// secular eigenvalue solver.
double secular_sum(const double* lambda, const double* w, std::size_t n, double x);

// sum_k re[k]^2 + im[k]^2
double sum_abs2(const double* re, const double* im, std::size_t n);

// max over k != skip of re[k]^2 + im[k]^2 (pass skip >= n to keep every entry).
double max_abs2_excluding(const double* re, const double* im, std::size_t n,
                          std::size_t skip);

// max_k |x[k]|
double max_abs(const double* x, std::size_t n);

}  // namespace sclab::simd
