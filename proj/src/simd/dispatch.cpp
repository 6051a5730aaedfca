#include <atomic>
#include <cstdlib>
#include <string>

#include "sclab/simd/kernels.hpp"

#include "kernel_table.hpp"

namespace sclab::simd {
namespace {

using detail::KernelTable;

const KernelTable* table_for(Variant v) {
  switch (v) {
    case Variant::scalar:
      return &detail::scalar_table();
    case Variant::avx2:
      return detail::avx2_table();
    case Variant::neon:
      return detail::neon_table();
  }
  return nullptr;
}

bool cpu_supports(Variant v) {
  switch (v) {
    case Variant::scalar:
      return true;
    case Variant::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
    case Variant::neon:
#if defined(__aarch64__)
      return true;  // NEON is architectural on aarch64
#else
      return false;
#endif
  }
  return false;
}

Variant detect() {
  if (const char* env = std::getenv("SCLAB_SIMD")) {
    const std::string want(env);
    for (Variant v : {Variant::scalar, Variant::avx2, Variant::neon})
      if (want == variant_name(v) && variant_available(v)) return v;
    // Unrecognized or unavailable request: fall through to auto-detect.
  }
  if (variant_available(Variant::avx2)) return Variant::avx2;
  if (variant_available(Variant::neon)) return Variant::neon;
  return Variant::scalar;
}

struct Selection {
  const KernelTable* table;
  Variant variant;
};

std::atomic<const KernelTable*> g_table{nullptr};
std::atomic<Variant> g_variant{Variant::scalar};

Selection current() {
  const KernelTable* t = g_table.load(std::memory_order_acquire);
  if (!t) {
    const Variant v = detect();
    t = table_for(v);
    g_variant.store(v, std::memory_order_relaxed);
    g_table.store(t, std::memory_order_release);
  }
  return {t, g_variant.load(std::memory_order_relaxed)};
}

}  // namespace

Variant active_variant() { return current().variant; }

bool variant_available(Variant v) { return cpu_supports(v) && table_for(v) != nullptr; }

bool force_variant(Variant v) {
  if (!variant_available(v)) return false;
  g_variant.store(v, std::memory_order_relaxed);
  g_table.store(table_for(v), std::memory_order_release);
  return true;
}

void reset_variant() { g_table.store(nullptr, std::memory_order_release); }

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::scalar:
      return "scalar";
    case Variant::avx2:
      return "avx2";
    case Variant::neon:
      return "neon";
  }
  return "unknown";
}

void cauchy_weights(const double* lambda, std::size_t n, double e, double eta,
                    double* w_re, double* w_im) {
  current().table->cauchy_weights(lambda, n, e, eta, w_re, w_im);
}

std::complex<double> cauchy_sum(const double* lambda, std::size_t n, double e,
                                double eta) {
  return current().table->cauchy_sum(lambda, n, e, eta);
}

std::complex<double> weighted_cauchy_sum(const double* lambda, const double* w,
                                         std::size_t n, double e, double eta) {
  return current().table->weighted_cauchy_sum(lambda, w, n, e, eta);
}

std::complex<double> weighted_pair_sum(const double* a, const double* b,
                                       const double* w_re, const double* w_im,
                                       std::size_t n) {
  return current().table->weighted_pair_sum(a, b, w_re, w_im, n);
}

double secular_sum(const double* lambda, const double* w, std::size_t n, double x) {
  return current().table->secular_sum(lambda, w, n, x);
}

double sum_abs2(const double* re, const double* im, std::size_t n) {
  return current().table->sum_abs2(re, im, n);
}

double max_abs2_excluding(const double* re, const double* im, std::size_t n,
                          std::size_t skip) {
  return current().table->max_abs2_excluding(re, im, n, skip);
}

double max_abs(const double* x, std::size_t n) {
  return current().table->max_abs(x, n);
}

}  // namespace sclab::simd
