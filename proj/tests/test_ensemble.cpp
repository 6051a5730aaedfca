#include <cmath>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "sclab/ensemble.hpp"

namespace ens = sclab::ensemble;
using ens::Kind;
using ens::Params;
using sclab::RngStream;

TEST_SUITE("ensemble") {

TEST_CASE("parameter validation names the violated invariant") {
  CHECK_THROWS_AS(ens::validate(Params{0, 3.0, Kind::erdos_renyi, false, {}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ens::validate(Params{100, 0.0, Kind::erdos_renyi, false, {}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ens::validate(Params{100, -2.0, Kind::centered_sparse, false, {}}),
                  std::invalid_argument);
  // q^2 must stay below n for the sparse kinds...
  CHECK_THROWS_AS(ens::validate(Params{100, 10.0, Kind::erdos_renyi, false, {}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ens::validate(Params{100, 11.0, Kind::centered_sparse, false, {}}),
                  std::invalid_argument);
  // ...but the Bernoulli kind ignores q entirely.
  CHECK_NOTHROW(ens::validate(Params{100, 0.0, Kind::bernoulli_wigner, false, {}}));
  CHECK_NOTHROW(ens::validate(Params{100, 9.9, Kind::erdos_renyi, false, {}}));
}

TEST_CASE("gamma, mean shift, and effective q at the pinned example") {
  const Params p{100, 5.0, Kind::erdos_renyi, false, {}};
  // gamma = (1 - 25/100)^{-1/2} = 2/sqrt(3).
  CHECK(ens::gamma_factor(p) == doctest::Approx(1.1547005383792515).epsilon(1e-15));
  CHECK(ens::mean_shift(p) == doctest::Approx(5.773502691896258).epsilon(1e-15));
  CHECK(ens::effective_q(p) == 5.0);
  CHECK(ens::resolve_f(p) == doctest::Approx(5.773502691896258).epsilon(1e-15));

  const Params bw{64, 0.0, Kind::bernoulli_wigner, false, {}};
  CHECK(ens::effective_q(bw) == doctest::Approx(8.0).epsilon(1e-15));
  CHECK_THROWS_AS(ens::gamma_factor(bw), std::invalid_argument);
  CHECK_THROWS_AS(ens::resolve_f(bw), std::invalid_argument);
  Params bwf = bw;
  bwf.f = 3.5;
  CHECK(ens::resolve_f(bwf) == 3.5);
}

TEST_CASE("uniform unit vector") {
  const auto e = ens::uniform_unit_vector(16);
  REQUIRE(e.size() == 16);
  double norm2 = 0.0;
  for (double x : e) {
    CHECK(x == doctest::Approx(0.25).epsilon(1e-15));
    norm2 += x * x;
  }
  CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(ens::uniform_unit_vector(0), std::invalid_argument);
}

TEST_CASE("adjacency sample: two-point entries and exact centering") {
  const Params p{100, 5.0, Kind::erdos_renyi, false, {}};
  RngStream rng(3, 0);
  const auto s = ens::sample_adjacency(p, rng);
  CHECK(s.f_eff == doctest::Approx(5.773502691896258).epsilon(1e-15));
  const double hi = 2.0 / std::sqrt(3.0) / 5.0;  // gamma / q
  const double shift = s.f_eff / 100.0;
  int hits = 0;
  for (int i = 0; i < 100; ++i)
    for (int j = i; j < 100; ++j) {
      const double a = s.a(i, j);
      REQUIRE((a == 0.0 || a == doctest::Approx(hi).epsilon(1e-15)));
      if (a != 0.0) ++hits;
      CHECK(s.a(i, j) - s.h(i, j) == doctest::Approx(shift).epsilon(1e-12));
    }
  // Edge probability is q^2/n = 0.25; 5050 pairs, sigma ~ 31.
  CHECK(hits > 1100);
  CHECK(hits < 1450);

  Params cs = p;
  cs.kind = Kind::centered_sparse;
  RngStream rng2(3, 1);
  CHECK_THROWS_AS(ens::sample_adjacency(cs, rng2), std::invalid_argument);
}

TEST_CASE("centered sample entries sit on the pinned two-point set") {
  const Params p{100, 5.0, Kind::erdos_renyi, false, {}};
  RngStream rng(4, 0);
  const auto h = ens::sample_centered(p, rng);
  std::set<double> seen;
  for (int i = 0; i < 100; ++i)
    for (int j = i; j < 100; ++j) seen.insert(h(i, j));
  REQUIRE(seen.size() == 2);
  // gamma/q - gamma q/n and -gamma q/n for gamma = 2/sqrt(3).
  CHECK(*seen.begin() == doctest::Approx(-0.057735026918962576).epsilon(1e-15));
  CHECK(*seen.rbegin() == doctest::Approx(0.17320508075688773).epsilon(1e-15));
}

TEST_CASE("zero_diagonal pins the diagonal to its centered constant") {
  Params p{60, 3.0, Kind::erdos_renyi, true, {}};
  RngStream rng(5, 0);
  const auto h = ens::sample_centered(p, rng);
  const double shift = ens::mean_shift(p) / 60.0;
  for (int i = 0; i < 60; ++i)
    CHECK(h(i, i) == doctest::Approx(-shift).epsilon(1e-15));

  Params bw{50, 0.0, Kind::bernoulli_wigner, true, {}};
  RngStream rng2(5, 0);
  const auto hb = ens::sample_centered(bw, rng2);
  const double scale = 1.0 / std::sqrt(50.0);
  for (int i = 0; i < 50; ++i) CHECK(hb(i, i) == 0.0);
  for (int i = 0; i < 50; ++i)
    for (int j = i + 1; j < 50; ++j)
      CHECK(std::abs(hb(i, j)) == doctest::Approx(scale).epsilon(1e-15));
}

TEST_CASE("row sampler replays row zero of the full sample") {
  for (Kind kind : {Kind::erdos_renyi, Kind::centered_sparse, Kind::bernoulli_wigner})
    for (bool zd : {false, true}) {
      Params p{40, 3.5, kind, zd, {}};
      if (kind == Kind::bernoulli_wigner) p.q = 0.0;
      RngStream full_rng(9, 2);
      const auto h = ens::sample_centered(p, full_rng);
      RngStream row_rng(9, 2);  // identical stream, identical draw order
      const auto row = ens::sample_row(p, row_rng);
      REQUIRE(row.size() == 40);
      for (int j = 0; j < 40; ++j) CHECK(row[j] == h(0, j));
    }
}

TEST_CASE("mean shift adds f/n to every entry") {
  Params p{20, 2.0, Kind::erdos_renyi, false, {}};
  RngStream rng(6, 0);
  const auto h = ens::sample_centered(p, rng);
  const auto a = ens::apply_mean_shift(h, 4.0);
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j)
      CHECK(a(i, j) == doctest::Approx(h(i, j) + 0.2).epsilon(1e-14));
}

TEST_CASE("moment report: sparse p = 2 tracks 1/N within stated errors") {
  const Params p{100, 5.0, Kind::erdos_renyi, false, {}};
  RngStream rng(7, 0);
  const auto mr = ens::moment_report(p, 2000, 4, rng);
  REQUIRE(mr.rows.size() == 3);  // p = 2, 3, 4
  CHECK(mr.rows[0].p == 2);
  CHECK(mr.rows[0].reference == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(mr.rows[1].reference == doctest::Approx(1.0 / (100.0 * 5.0)).epsilon(1e-14));
  CHECK(mr.rows[2].reference == doctest::Approx(1.0 / (100.0 * 25.0)).epsilon(1e-14));
  CHECK(std::abs(mr.mean_h) <= 5.0 * mr.mean_stderr);
  CHECK(std::abs(mr.rows[0].sample_mean - 0.01) <= 5.0 * mr.var_stderr);
  CHECK(mr.samples == 2000LL * 4950LL);
}

TEST_CASE("moment report: Bernoulli moments are exact by construction") {
  const Params p{64, 0.0, Kind::bernoulli_wigner, false, {}};
  RngStream rng(8, 0);
  const auto mr = ens::moment_report(p, 1000, 3, rng);
  // |h| = n^{-1/2} always, so |h|^p = n^{-p/2} with zero variance, and the
  // reference 1/(n q^{p-2}) with q = sqrt(n) equals exactly that.
  CHECK(mr.rows[0].sample_mean == doctest::Approx(1.0 / 64.0).epsilon(1e-15));
  CHECK(mr.rows[0].ratio == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(mr.rows[1].ratio == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(mr.var_stderr <= 1e-10);  // zero up to rounding in the frequency split
}

TEST_CASE("moment report input guards") {
  const Params p{100, 5.0, Kind::erdos_renyi, false, {}};
  RngStream rng(9, 0);
  CHECK_THROWS_AS(ens::moment_report(p, 999, 4, rng), std::invalid_argument);
  CHECK_THROWS_AS(ens::moment_report(p, 1000, 1, rng), std::invalid_argument);
}

}  // TEST_SUITE
