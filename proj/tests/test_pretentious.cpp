#include <doctest.h>

#include <cmath>
#include <numbers>

#include "multfun/error.hpp"
#include "multfun/pretentious.hpp"
#include "test_support.hpp"

using namespace multfun;
using namespace testing_support;

namespace {

// 2 * sum_{p <= 10^6} 1/p and prod_{p <= 10^5} (1 - p^-2), computed offline with an
// independent prime generator.
constexpr double kTwiceMertens1e6 = 5.7746561991353875;
constexpr double kSquarefreeEuler1e5 = 0.607927589563138;

MultiplicativeFunction chi4() {
  Params p;
  p.modulus = 4;
  p.index = 1;
  return builtin("dirichlet_character", p);
}

std::vector<MultiplicativeFunction> unimodular() {
  Params real_xi;
  real_xi.xi_real = std::numbers::sqrt2 - 1.0;
  return {fn("liouville"), xi_fn("lambda_xi", 1, 3), xi_fn("lambda_xi", 2, 5), xi_fn("kappa_xi", 1, 4),
          builtin("lambda_xi", real_xi)};
}

std::vector<MultiplicativeFunction> mixed() {
  auto v = unimodular();
  v.push_back(fn("moebius"));
  v.push_back(fn("mu_squared"));
  v.push_back(fn("phi_over_n"));
  v.push_back(chi4());
  v.push_back(constant_one());
  Params chi;
  chi.modulus = 7;
  chi.index = 1;
  v.push_back(builtin("dirichlet_character", chi));
  return v;
}

MultiplicativeFunction minus_one_at_two() {
  return MultiplicativeFunction::from_rule("two_adic", [](std::uint64_t p, unsigned) {
    return p == 2 ? cplx(-1, 0) : cplx(1, 0);
  });
}

double D(const MultiplicativeFunction& f, const MultiplicativeFunction& g, std::uint64_t P) {
  return std::sqrt(pretentious_distance(f, g, P).value());
}

}  // namespace

TEST_CASE("distance from a function to itself") {
  for (const auto& f : unimodular()) {
    auto prof = pretentious_distance(f, f, 100000);
    for (double v : prof.partial) {
      if (f.has_exact())
        CHECK(v == 0.0);
      else
        CHECK(std::abs(v) < 1e-12);
    }
  }
}

TEST_CASE("Liouville against 1 follows twice the Mertens sum") {
  auto prof = pretentious_distance(fn("liouville"), constant_one(), 1000000);
  CHECK(prof.value() == doctest::Approx(kTwiceMertens1e6).epsilon(1e-12));
  CHECK(prof.value() >= 5.5);
  CHECK(prof.value() <= 6.1);
  CHECK(prof.window.trend == Trend::diverging);
  CHECK(prof.P_grid.back() == 1000000);
  for (std::size_t i = 1; i < prof.partial.size(); ++i) CHECK(prof.partial[i] >= prof.partial[i - 1]);
}

TEST_CASE("mu squared is at distance exactly zero from 1") {
  for (std::uint64_t P : {2u, 10u, 1000u, 100000u, 1000000u}) {
    auto prof = pretentious_distance(fn("mu_squared"), constant_one(), P);
    for (double v : prof.partial) CHECK(v == 0.0);
    CHECK(prof.window.trend == Trend::plateau);
  }
}

TEST_CASE("symmetry is exact") {
  auto cat = mixed();
  for (std::size_t i = 0; i < cat.size(); ++i)
    for (std::size_t j = 0; j < cat.size(); ++j) {
      auto a = pretentious_distance(cat[i], cat[j], 20000);
      auto b = pretentious_distance(cat[j], cat[i], 20000);
      CHECK(a.partial == b.partial);
    }
}

TEST_CASE("triangle inequality on random triples") {
  auto cat = mixed();
  auto g = rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const auto& f = cat[uniform(g, 0, cat.size() - 1)];
    const auto& h = cat[uniform(g, 0, cat.size() - 1)];
    const auto& k = cat[uniform(g, 0, cat.size() - 1)];
    CHECK(D(f, k, 10000) <= D(f, h, 10000) + D(h, k, 10000) + 1e-9);
  }
}

TEST_CASE("power inequality") {
  auto cat = unimodular();
  for (std::size_t i = 0; i < cat.size(); ++i)
    for (std::size_t j = 0; j < cat.size(); ++j)
      for (unsigned m = 1; m <= 5; ++m)
        CHECK(m * D(cat[i], cat[j], 10000) >= D(cat[i].power(m), cat[j].power(m), 10000) - 1e-9);
}

TEST_CASE("twisted windows") {
  auto [lo0, hi0] = distance_window(1000000, 0.0);
  CHECK(lo0 == 10000);
  CHECK(hi0 == 1000000);
  auto [lo1, hi1] = distance_window(1000000, 0.1);
  CHECK(lo1 == 2);
  (void)hi1;
  // Liouville never pretends to be n^{it}; small t must not look like a plateau.
  for (double t : {0.05, 0.2, 0.45, 1.0, 3.0, 9.7}) {
    auto prof = pretentious_distance(fn("liouville"), constant_one(), 100000, t);
    CHECK(prof.window.trend == Trend::diverging);
  }
}

TEST_CASE("Euler products") {
  auto sq = euler_product_mean(fn("mu_squared"), 100000);
  CHECK(sq.value().real() == doctest::Approx(kSquarefreeEuler1e5).epsilon(1e-10));
  CHECK(std::abs(sq.value() - 6.0 / (std::numbers::pi * std::numbers::pi)) < 1e-4);
  CHECK_FALSE(sq.unsettled);

  CHECK(euler_product_mean(constant_one(), 100000).value() == cplx(1, 0));
  auto phi = euler_product_mean(fn("phi_over_n"), 100000);
  CHECK(std::abs(phi.value().real() - 0.6079) < 1e-4);

  CHECK(std::abs(euler_product_mean(minus_one_at_two(), 1000).value()) < 1e-14);
}

TEST_CASE("empirical means match Euler products") {
  for (const char* name : {"mu_squared", "phi_over_n"}) {
    auto table = sieve_range(fn(name), 10000000);
    double s = 0;
    for (auto v : table.values()) s += v.real();
    CHECK(std::abs(s / 1e7 - euler_product_mean(fn(name), 100000).value().real()) < 2e-3);
  }
}

TEST_CASE("means along progressions") {
  for (auto [q, r] : {std::pair<std::uint64_t, std::uint64_t>{1, 0}, {4, 3}, {6, 2}, {7, 0}})
    CHECK(ap_mean(constant_one(), q, r, 1000).direct == cplx(1, 0));
  auto m = ap_mean(chi4(), 4, 3, 100000);
  CHECK(m.direct == cplx(-1, 0));
  REQUIRE(m.decomposition);
  CHECK(std::abs(*m.decomposition + 1.0) < 1e-12);

  auto l = ap_mean(xi_fn("lambda_xi", 1, 3), 5, 2, 1000000);
  REQUIRE(l.decomposition);
  CHECK(std::abs(l.direct - *l.decomposition) < 1e-12);
  // Progression means of lambda_{1/3} decay like (log N)^(-3/2): small, but not yet 0.01 at 10^6.
  auto l5 = ap_mean(xi_fn("lambda_xi", 1, 3), 5, 2, 100000);
  CHECK(std::abs(l.direct) < std::abs(l5.direct));
  CHECK(std::abs(l.direct) < 0.05);
  CHECK_FALSE(ap_mean(fn("liouville"), 6, 2, 1000).decomposition);
  CHECK_THROWS_AS(ap_mean(fn("liouville"), 4, 4, 1000), Error);
}

TEST_CASE("character identity for random progressions") {
  auto cat = mixed();
  auto g = rng(99);
  int done = 0;
  while (done < 20) {
    auto q = uniform(g, 1, 30), r = uniform(g, 0, q - 1);
    if (std::gcd(q, r) != 1) continue;
    ++done;
    const auto& f = cat[uniform(g, 0, cat.size() - 1)];
    auto m = ap_mean(f, q, r, 200000);
    REQUIRE(m.decomposition);
    CHECK(std::abs(m.direct - *m.decomposition) < 1e-12);
  }
}

TEST_CASE("t grid parsing") {
  auto g = TGrid::parse("-2:2:5");
  auto v = g.values();
  REQUIRE(v.size() == 5);
  CHECK(v[2] == 0.0);
  CHECK(TGrid{}.values()[100] == 0.0);
  CHECK_THROWS_AS(TGrid::parse("1:2"), Error);
  CHECK_THROWS_AS(TGrid::parse("a:2:3"), Error);
  CHECK_THROWS_AS(TGrid::parse("3:2:3"), Error);
}

TEST_CASE("Halasz classification") {
  auto sq = halasz_classify(fn("mu_squared"), 100000, TGrid{}, 1000000);
  CHECK(sq.halasz_case == "case_i");
  REQUIRE(!sq.euler.empty());
  CHECK(std::abs(sq.euler.back().second - 6.0 / (std::numbers::pi * std::numbers::pi)) < 1e-4);
  CHECK(std::abs(sq.euler.back().second) > 0.0);
  CHECK(sq.witness_k == 1u);

  auto l = halasz_classify(fn("liouville"), 100000, TGrid{}, 10000000);
  CHECK(l.halasz_case == "case_iv");
  CHECK(std::abs(l.empirical.back().second) < 0.01);

  auto two = halasz_classify(minus_one_at_two(), 100000, TGrid{}, 100000);
  CHECK(two.halasz_case == "case_iii");
  CHECK(two.best_t == 0.0);
  CHECK_FALSE(two.witness_k);
  CHECK(std::abs(two.empirical.back().second) < 0.01);
}

TEST_CASE("aperiodicity") {
  auto l = aperiodicity_test(fn("liouville"), 12, TGrid{-10, 10, 41}, 100000, 100000);
  CHECK(l.verdict == "aperiodic_evidence");
  CHECK(l.heuristic);
  auto table = sieve_range(fn("liouville"), 10000010);
  for (std::uint64_t q = 1; q <= 6; ++q)
    for (std::uint64_t r = 0; r < q; ++r) CHECK(std::abs(ap_mean(table, q, r, 10000000, false).direct) < 0.01);

  auto c = aperiodicity_test(chi4(), 12, TGrid{-10, 10, 41}, 100000, 100000);
  REQUIRE(c.verdict == "periodic_structure");
  CHECK(c.hit->modulus == 4);
  CHECK(c.hit->index == 1);
  CHECK(c.hit->t == 0.0);

  auto sq = aperiodicity_test(fn("mu_squared"), 12, TGrid{-10, 10, 41}, 100000, 100000);
  REQUIRE(sq.verdict == "periodic_structure");
  CHECK(sq.hit->modulus == 1);
  CHECK(sq.hit->t == 0.0);
  CHECK(sq.hit->distance == 0.0);
  CHECK_THROWS_AS(aperiodicity_test(chi4(), 101, TGrid{}, 1000), Error);
}

TEST_CASE("rational almost periodicity") {
  auto zero_at_primes = MultiplicativeFunction::from_rule("zero_at_primes", [](std::uint64_t, unsigned k) {
    return k == 1 ? cplx(0, 0) : cplx(1, 0);
  });
  CHECK(rap_test(zero_at_primes, 20, 100000, 100000).verdict == "rap_trivial");
  auto sq = rap_test(fn("mu_squared"), 20, 100000, 100000);
  REQUIRE(sq.verdict == "rap_pretends");
  CHECK(sq.chi->modulus == 1);
  CHECK(rap_test(fn("liouville"), 20, 100000, 100000).verdict == "not_besicovitch");
  CHECK(rap_test(fn("phi_over_n"), 20, 100000, 100000).verdict == "rap_pretends");
}
