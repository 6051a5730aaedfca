#include <cmath>
#include <complex>
#include <cstdlib>
#include <vector>

#include "doctest.h"
#include "sclab/rng.hpp"
#include "sclab/simd/kernels.hpp"

namespace simd = sclab::simd;
using sclab::RngStream;
using std::complex;

namespace {

// Every test that forces a variant restores automatic selection on exit.
struct VariantGuard {
  ~VariantGuard() { simd::reset_variant(); }
};

std::vector<simd::Variant> available_variants() {
  std::vector<simd::Variant> out;
  for (simd::Variant v :
       {simd::Variant::scalar, simd::Variant::avx2, simd::Variant::neon})
    if (simd::variant_available(v)) out.push_back(v);
  return out;
}

// Sizes straddling every vector width and remainder case.
const std::size_t kSizes[] = {1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 100};

std::vector<double> random_vec(RngStream& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = lo + (hi - lo) * rng.uniform();
  return v;
}

// Plain-loop references, written independently of the kernel sources.
complex<double> ref_cauchy_sum(const std::vector<double>& lambda, double e, double eta) {
  complex<double> s = 0.0;
  for (double l : lambda) s += 1.0 / complex<double>(l - e, -eta);
  return s;
}

complex<double> ref_weighted_cauchy_sum(const std::vector<double>& lambda,
                                        const std::vector<double>& w, double e,
                                        double eta) {
  complex<double> s = 0.0;
  for (std::size_t k = 0; k < lambda.size(); ++k)
    s += w[k] / complex<double>(lambda[k] - e, -eta);
  return s;
}

}  // namespace

TEST_SUITE("simd") {

TEST_CASE("variant bookkeeping") {
  CHECK(simd::variant_available(simd::Variant::scalar));
  CHECK(simd::variant_name(simd::Variant::scalar) == "scalar");
  CHECK(simd::variant_name(simd::Variant::avx2) == "avx2");
  CHECK(simd::variant_name(simd::Variant::neon) == "neon");
#if defined(__x86_64__)
  CHECK_FALSE(simd::variant_available(simd::Variant::neon));
  CHECK_FALSE(simd::force_variant(simd::Variant::neon));
#endif
#if defined(__aarch64__)
  CHECK_FALSE(simd::variant_available(simd::Variant::avx2));
  CHECK_FALSE(simd::force_variant(simd::Variant::avx2));
#endif
  VariantGuard guard;
  REQUIRE(simd::force_variant(simd::Variant::scalar));
  CHECK(simd::active_variant() == simd::Variant::scalar);
}

TEST_CASE("environment override selects the scalar table") {
  VariantGuard guard;
  REQUIRE(setenv("SCLAB_SIMD", "scalar", 1) == 0);
  simd::reset_variant();
  CHECK(simd::active_variant() == simd::Variant::scalar);
  REQUIRE(unsetenv("SCLAB_SIMD") == 0);
  simd::reset_variant();
  // Back to auto-detect; whatever is picked must be available.
  CHECK(simd::variant_available(simd::active_variant()));
}

TEST_CASE("cauchy_weights matches the definition and is identical across variants") {
  VariantGuard guard;
  RngStream rng(11, 0);
  for (std::size_t n : kSizes) {
    const auto lambda = random_vec(rng, n, -2.5, 2.5);
    const double e = 0.3, eta = 0.05;
    REQUIRE(simd::force_variant(simd::Variant::scalar));
    std::vector<double> re(n), im(n);
    simd::cauchy_weights(lambda.data(), n, e, eta, re.data(), im.data());
    for (std::size_t k = 0; k < n; ++k) {
      const complex<double> w = 1.0 / complex<double>(lambda[k] - e, -eta);
      CHECK(re[k] == doctest::Approx(w.real()).epsilon(1e-14));
      CHECK(im[k] == doctest::Approx(w.imag()).epsilon(1e-14));
    }
    // The elementwise kernel avoids FMA precisely so every variant rounds
    // identically; equality here is bitwise, not approximate.
    for (simd::Variant v : available_variants()) {
      REQUIRE(simd::force_variant(v));
      std::vector<double> vre(n), vim(n);
      simd::cauchy_weights(lambda.data(), n, e, eta, vre.data(), vim.data());
      for (std::size_t k = 0; k < n; ++k) {
        CHECK(vre[k] == re[k]);
        CHECK(vim[k] == im[k]);
      }
    }
  }
}

TEST_CASE("sum kernels agree with plain-loop references on every variant") {
  VariantGuard guard;
  RngStream rng(12, 0);
  for (std::size_t n : kSizes) {
    const auto lambda = random_vec(rng, n, -2.0, 2.0);
    const auto w = random_vec(rng, n, 0.0, 1.0);
    const auto a = random_vec(rng, n, -1.0, 1.0);
    const auto b = random_vec(rng, n, -1.0, 1.0);
    const auto wre = random_vec(rng, n, -1.0, 1.0);
    const auto wim = random_vec(rng, n, -1.0, 1.0);
    const double e = -0.7, eta = 0.02;

    const complex<double> cs = ref_cauchy_sum(lambda, e, eta);
    const complex<double> wcs = ref_weighted_cauchy_sum(lambda, w, e, eta);
    complex<double> wps = 0.0;
    double s2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      wps += a[k] * b[k] * complex<double>(wre[k], wim[k]);
      s2 += wre[k] * wre[k] + wim[k] * wim[k];
    }

    for (simd::Variant v : available_variants()) {
      REQUIRE(simd::force_variant(v));
      const auto got_cs = simd::cauchy_sum(lambda.data(), n, e, eta);
      CHECK(std::abs(got_cs - cs) <= 1e-12 * (1.0 + std::abs(cs)));
      const auto got_wcs = simd::weighted_cauchy_sum(lambda.data(), w.data(), n, e, eta);
      CHECK(std::abs(got_wcs - wcs) <= 1e-12 * (1.0 + std::abs(wcs)));
      const auto got_wps =
          simd::weighted_pair_sum(a.data(), b.data(), wre.data(), wim.data(), n);
      CHECK(std::abs(got_wps - wps) <= 1e-12 * (1.0 + std::abs(wps)));
      CHECK(simd::sum_abs2(wre.data(), wim.data(), n) ==
            doctest::Approx(s2).epsilon(1e-12));
    }
  }
}

TEST_CASE("secular_sum matches the rational function") {
  VariantGuard guard;
  RngStream rng(13, 0);
  for (std::size_t n : kSizes) {
    const auto lambda = random_vec(rng, n, -2.0, 2.0);
    const auto w = random_vec(rng, n, 0.0, 1.0);
    const double x = 3.5;  // above every node, so no pole is hit
    double ref = 0.0;
    for (std::size_t k = 0; k < n; ++k) ref += w[k] / (x - lambda[k]);
    for (simd::Variant v : available_variants()) {
      REQUIRE(simd::force_variant(v));
      CHECK(simd::secular_sum(lambda.data(), w.data(), n, x) ==
            doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("max reductions match references, including the skip slot") {
  VariantGuard guard;
  RngStream rng(14, 0);
  for (std::size_t n : kSizes) {
    const auto re = random_vec(rng, n, -2.0, 2.0);
    const auto im = random_vec(rng, n, -2.0, 2.0);
    const auto x = random_vec(rng, n, -5.0, 5.0);
    for (std::size_t skip : {std::size_t{0}, n / 2, n}) {  // n means "skip nothing"
      double ref = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        if (k != skip) ref = std::max(ref, re[k] * re[k] + im[k] * im[k]);
      double ref_abs = 0.0;
      for (std::size_t k = 0; k < n; ++k) ref_abs = std::max(ref_abs, std::abs(x[k]));
      for (simd::Variant v : available_variants()) {
        REQUIRE(simd::force_variant(v));
        CHECK(simd::max_abs2_excluding(re.data(), im.data(), n, skip) == ref);
        CHECK(simd::max_abs(x.data(), n) == ref_abs);
      }
    }
  }
}

TEST_CASE("empty inputs reduce to zero") {
  VariantGuard guard;
  for (simd::Variant v : available_variants()) {
    REQUIRE(simd::force_variant(v));
    CHECK(simd::sum_abs2(nullptr, nullptr, 0) == 0.0);
    CHECK(simd::max_abs(nullptr, 0) == 0.0);
    CHECK(simd::max_abs2_excluding(nullptr, nullptr, 0, 0) == 0.0);
    CHECK(simd::cauchy_sum(nullptr, 0, 0.0, 1.0) == complex<double>(0.0, 0.0));
  }
}

}  // TEST_SUITE
