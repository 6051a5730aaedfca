#pragma once

#include <complex>
#include <cstddef>

// Internal function-pointer table shared by the dispatch logic and the
// per-ISA translation units.
namespace sclab::simd::detail {

struct KernelTable {
  void (*cauchy_weights)(const double*, std::size_t, double, double, double*, double*);
  std::complex<double> (*cauchy_sum)(const double*, std::size_t, double, double);
  std::complex<double> (*weighted_cauchy_sum)(const double*, const double*, std::size_t,
                                              double, double);
  std::complex<double> (*weighted_pair_sum)(const double*, const double*, const double*,
                                            const double*, std::size_t);
  double (*secular_sum)(const double*, const double*, std::size_t, double);
  double (*sum_abs2)(const double*, const double*, std::size_t);
  double (*max_abs2_excluding)(const double*, const double*, std::size_t, std::size_t);
  double (*max_abs)(const double*, std::size_t);
};

const KernelTable& scalar_table();
// Null when the corresponding ISA is not compiled in or not present.
const KernelTable* avx2_table();
const KernelTable* neon_table();

}  // namespace sclab::simd::detail
