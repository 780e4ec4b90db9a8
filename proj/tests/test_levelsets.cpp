#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "multfun/error.hpp"
#include "multfun/levelsets.hpp"
#include "multfun/seminorms.hpp"
#include "test_support.hpp"

using namespace multfun;
using namespace testing_support;

namespace {

// Squarefree counts up to 10^7: all, odd, and those = 1 mod 4. Frozen from an
// independent numpy sieve.
constexpr std::uint64_t kSquarefree1e7 = 6079291;
constexpr std::uint64_t kOddSquarefree1e7 = 4052875;
constexpr std::uint64_t kSquarefree1mod4_1e7 = 2026441;

constexpr std::uint64_t kTenMillion = 10000000;

std::vector<std::uint64_t> iota_set(std::uint64_t N) {
  std::vector<std::uint64_t> v(N);
  for (std::uint64_t i = 0; i < N; ++i) v[i] = i + 1;
  return v;
}

MultiplicativeFunction lambda_irrational() {
  Params p;
  p.xi_real = std::numbers::sqrt2 - 1.0;
  return builtin("lambda_xi", p);
}

}  // namespace

TEST_CASE("target parsing") {
  auto one = Target::parse("1");
  CHECK(one.kind == Target::Kind::root);
  CHECK(one.root == Rational(0, 1));
  CHECK(Target::parse("-1").root == Rational(1, 2));
  CHECK(Target::parse(" i ").root == Rational(1, 4));
  CHECK(Target::parse("-i").root == Rational(3, 4));
  CHECK(Target::parse("4/3").root == Rational(1, 3));
  CHECK(Target::parse("0").is_zero());
  CHECK(Target::parse("0,0").is_zero());
  CHECK(Target::parse("-1.0").root == Rational(1, 2));
  auto half = Target::parse("0.5", 1e-9);
  CHECK(half.kind == Target::Kind::value);
  CHECK(half.tol.value() == 1e-9);
  auto c = Target::parse("0.6,0.8");
  CHECK(c.kind == Target::Kind::value);
  CHECK(c.value == cplx(0.6, 0.8));
  CHECK(Target::parse("1/3").power(3).root == Rational(0, 1));
  CHECK(std::abs(Target::parse("1/8").complex_value() - std::polar(1.0, std::numbers::pi / 4)) < 1e-15);
  CHECK_THROWS_AS(Target::parse(""), Error);
  CHECK_THROWS_AS(Target::parse("abc"), Error);
  CHECK_THROWS_AS(Target::parse("1,x"), Error);
  CHECK_THROWS_AS(Target::parse("1", -1.0), Error);
}

TEST_CASE("level_set small examples") {
  auto E = level_set(fn("liouville"), Target::parse("1"), 10);
  CHECK(E.members == std::vector<std::uint64_t>{1, 4, 6, 9, 10});
  CHECK(E.exact);
  CHECK(level_set(fn("moebius"), Target::zero(), 10).members == std::vector<std::uint64_t>{4, 8, 9});
  CHECK(level_set(fn("liouville"), Target::parse("i"), 100000).members.empty());
  CHECK(E.contains(9));
  CHECK_FALSE(E.contains(2));
}

TEST_CASE("level_set float path") {
  auto phi = fn("phi_over_n");
  CHECK_THROWS_AS(level_set(phi, Target::parse("0.5"), 100), Error);
  auto E = level_set(phi, Target::parse("0.5", 1e-12), 5000);
  CHECK_FALSE(E.exact);
  CHECK(E.members == std::vector<std::uint64_t>{2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096});
  // Exact table: values off the unit circle are never hit; unit values off the root grid are ambiguous.
  CHECK(level_set(fn("liouville"), Target::parse("0.5"), 100).members.empty());
  CHECK_THROWS_AS(level_set(fn("liouville"), Target::parse("0.6,0.8"), 100), Error);
}

TEST_CASE("level_set members are increasing and satisfy the predicate") {
  auto g = rng(11);
  std::vector<MultiplicativeFunction> fs = {fn("liouville"), fn("moebius"), xi_fn("lambda_xi", 1, 3),
                                            xi_fn("mu_xi", 1, 4), xi_fn("kappa_xi", 2, 5)};
  for (const auto& f : fs) {
    const std::uint64_t N = uniform(g, 50, 3000);
    auto table = sieve_range(f, N);
    std::set<std::uint64_t> seen;
    std::uint64_t total = 0;
    for (int trial = 0; trial < 6; ++trial) {
      const std::uint64_t n = uniform(g, 1, N);
      auto v = eval_exact(f, n);
      REQUIRE(v.has_value());
      Target z = v->zero ? Target::zero() : Target::unit_root(Rational(v->root, f.root_order()));
      auto E = level_set(table, f, z);
      CHECK(std::is_sorted(E.members.begin(), E.members.end()));
      CHECK(std::adjacent_find(E.members.begin(), E.members.end()) == E.members.end());
      CHECK(E.contains(n));
      for (auto m : E.members) CHECK(std::abs(eval_at(f, m) - eval_at(f, n)) < 1e-12);
      if (seen.insert(E.members.front()).second) total += E.members.size();
    }
    CHECK(total <= N);
  }
}

TEST_CASE("bitmap and text export") {
  auto E = level_set(fn("moebius"), Target::zero(), 20);
  std::ostringstream bits, text;
  write_bitmap(E, bits);
  write_text(E, text);
  const std::string b = bits.str();
  REQUIRE(b.size() == 3);
  for (std::uint64_t n = 1; n <= 20; ++n) {
    bool set = (static_cast<unsigned char>(b[(n - 1) / 8]) >> ((n - 1) % 8)) & 1u;
    CHECK(set == E.contains(n));
  }
  CHECK(text.str() == "4\n8\n9\n12\n16\n18\n20\n");
}

TEST_CASE("squarefree density and progression cells at 10^7") {
  auto Q = named_set("squarefree", kTenMillion);
  CHECK(Q.members.size() == kSquarefree1e7);
  auto prof = density_profile(Q, 4);
  CHECK(std::abs(prof.density - 6.0 / (std::numbers::pi * std::numbers::pi)) < 2e-3);
  bool saw41 = false;
  for (const auto& c : prof.cells) {
    if (c.q == 4 && c.r == 1) {
      saw41 = true;
      CHECK(c.count == kSquarefree1mod4_1e7);
      CHECK(std::abs(c.density - 2.0 / (std::numbers::pi * std::numbers::pi)) < 3e-3);
    }
  }
  CHECK(saw41);
  CHECK(std::count(prof.empty_cells.begin(), prof.empty_cells.end(), std::make_pair<std::uint64_t, std::uint64_t>(4, 0)) ==
        1);
}

TEST_CASE("density profile cells partition the count") {
  auto g = rng(5);
  for (int trial = 0; trial < 4; ++trial) {
    const std::uint64_t N = uniform(g, 100, 20000);
    auto E = level_set(fn("liouville"), Target::parse(trial % 2 ? "1" : "-1"), N);
    const std::uint64_t q_max = uniform(g, 1, 12);
    auto prof = density_profile(E, q_max);
    CHECK(prof.count == E.members.size());
    for (std::uint64_t q = 1; q <= q_max; ++q) {
      std::uint64_t sum = 0;
      std::size_t cells = 0;
      for (const auto& c : prof.cells)
        if (c.q == q) {
          sum += c.count;
          ++cells;
          CHECK(c.count > 0);
        }
      for (const auto& e : prof.empty_cells)
        if (e.first == q) ++cells;
      CHECK(sum == prof.count);
      CHECK(cells == q);
    }
  }
}

TEST_CASE("liouville level set in even numbers") {
  auto E = level_set(fn("liouville"), Target::parse("1"), 1000000);
  auto prof = density_profile(E, 2);
  for (const auto& c : prof.cells)
    if (c.q == 2 && c.r == 0) CHECK(std::abs(c.density - 0.25) < 5e-3);
}

TEST_CASE("level sets of lambda_{1/3} partition [N]") {
  auto f = xi_fn("lambda_xi", 1, 3);
  auto table = sieve_range(f, kTenMillion);
  std::uint64_t total = 0;
  std::vector<char> hit(kTenMillion + 1, 0);
  bool disjoint = true;
  for (int j = 0; j < 3; ++j) {
    auto E = level_set(table, f, Target::unit_root(Rational(j, 3)));
    total += E.members.size();
    for (auto n : E.members) {
      if (hit[n]) disjoint = false;
      hit[n] = 1;
    }
  }
  CHECK(disjoint);
  CHECK(total == kTenMillion);
}

TEST_CASE("concentration analysis") {
  auto lam = concentration_analysis(fn("liouville"), 100000, 24);
  REQUIRE(lam.points.size() == 1);
  CHECK(lam.points[0].root.value() == Rational(1, 2));
  CHECK(lam.group_order == 2);
  CHECK(lam.group() == std::vector<Rational>{Rational(0, 1), Rational(1, 2)});
  CHECK(lam.tail == 0.0);
  CHECK(lam.verdict == "concentrated");

  auto third = concentration_analysis(xi_fn("lambda_xi", 1, 3), 100000, 24);
  REQUIRE(third.points.size() == 1);
  CHECK(third.points[0].root.value() == Rational(1, 3));
  CHECK(third.group_order == 3);
  CHECK(third.verdict == "concentrated");

  auto irr = concentration_analysis(lambda_irrational(), 100000, 24);
  CHECK(irr.unbounded);
  CHECK(irr.verdict == "not_concentrated");

  auto chi = concentration_analysis(xi_fn("kappa_xi", 1, 4), 100000, 24);
  CHECK(chi.tail >= 0.0);
  if (!chi.unbounded) {
    // Closure under multiplication: the group is the full set of L-th roots.
    auto grp = chi.group();
    CHECK(grp.size() == chi.group_order);
    for (const auto& a : grp)
      for (const auto& b : grp) {
        Rational s(a.num * b.den + b.num * a.den, a.den * b.den);
        CHECK(std::find(grp.begin(), grp.end(), s.mod1()) != grp.end());
      }
  }
  CHECK_THROWS_AS(concentration_analysis(fn("liouville"), 999, 24), Error);
}

TEST_CASE("level densities of a non-concentrated function decay") {
  // E(f, e(j xi)) = {Omega(n) = j}; its density tends to 0, slowly.
  auto f = lambda_irrational();
  std::vector<double> max_density, first_level;
  for (std::uint64_t N : {std::uint64_t{100000}, std::uint64_t{1000000}, kTenMillion}) {
    auto table = sieve_range(f, N);
    std::vector<std::uint64_t> counts(40, 0);
    for (std::uint64_t n = 2; n <= N; ++n) {
      std::uint64_t m = n;
      int om = 0;
      while (m > 1) {
        m /= table.spf(m);
        ++om;
      }
      ++counts[om];
    }
    // Cross-check one level against the function's own level set.
    auto E = level_set(table, f, Target::parse(std::to_string(std::cos(2 * std::numbers::pi * f.params().xi_real.value())) +
                                                   "," + std::to_string(std::sin(2 * std::numbers::pi * f.params().xi_real.value())),
                                               1e-5));
    CHECK(E.members.size() == counts[1]);
    double mx = 0;
    for (int j = 1; j < 40; ++j) mx = std::max(mx, static_cast<double>(counts[j]) / static_cast<double>(N));
    max_density.push_back(mx);
    first_level.push_back(static_cast<double>(counts[1]) / static_cast<double>(N));
  }
  CHECK(max_density[1] < max_density[0]);
  CHECK(max_density[2] < max_density[1]);
  CHECK(first_level[1] < first_level[0]);
  CHECK(first_level[2] < first_level[1]);
}

TEST_CASE("zero repair") {
  auto mu = fn("moebius");
  auto rep = zero_repair(mu, Target::parse("1"));
  CHECK(rep.changed);
  CHECK(rep.verified);
  CHECK(rep.g.at_prime_power(7, 1) == cplx(-1.0, 0.0));
  const cplx y = rep.g.at_prime_power(7, 2);
  CHECK(std::abs(std::abs(y) - 1.0) < 1e-12);
  CHECK(std::abs(y - rep.g.at_prime_power(3, 5)) < 1e-15);
  for (unsigned n = 1; n <= 64; ++n) {
    const cplx yn = std::pow(y, static_cast<double>(n));
    CHECK(std::abs(yn - 1.0) > 1e-6);
    CHECK(std::abs(yn + 1.0) > 1e-6);
  }
  auto a = level_set(mu, Target::parse("1"), 10000);
  auto b = level_set(rep.g, Target::parse("1"), 10000);
  CHECK(a.members == b.members);

  auto lam = zero_repair(fn("liouville"), Target::parse("-1"));
  CHECK_FALSE(lam.changed);
  CHECK(lam.g.at_prime_power(5, 3) == fn("liouville").at_prime_power(5, 3));

  try {
    zero_repair(mu, Target::zero());
    FAIL("expected an input error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::input);
  }
}

TEST_CASE("find_k_and_character") {
  auto lam = find_k_and_character(fn("liouville"), 24, 30, 100000);
  REQUIRE(lam.found);
  CHECK(lam.k == 2);
  CHECK(lam.modulus == 1);

  auto g = zero_repair(fn("moebius"), Target::parse("1")).g;
  auto mu = find_k_and_character(g, 24, 30, 100000);
  REQUIRE(mu.found);
  CHECK(mu.k == 2);
  CHECK(mu.modulus == 1);

  auto third = find_k_and_character(xi_fn("lambda_xi", 1, 3), 24, 30, 100000);
  REQUIRE(third.found);
  CHECK(third.k == 3);
  CHECK(third.modulus == 1);

  auto none = find_k_and_character(lambda_irrational(), 4, 10, 100000);
  CHECK_FALSE(none.found);
  CHECK_FALSE(none.message.empty());
}

TEST_CASE("structure pair for the Moebius function") {
  StructureOptions opt;
  opt.u_grid = {10000, 100000, 1000000};
  auto sp = structure_pair(fn("moebius"), Target::parse("1"), 1000000, opt);
  CHECK(sp.kchi.k == 2);
  CHECK(sp.kchi.modulus == 1);
  auto Q = named_set("squarefree", 1000000);
  CHECK(sp.R.members == Q.members);
  CHECK(sp.subset);
  CHECK(sp.dE <= sp.dR + 2e-3);
  REQUIRE(sp.u_norms.size() == 3);
  CHECK(sp.u_norms.back().N == 1000000);
  CHECK(sp.u_norms.back().value < 0.05);
  CHECK(std::abs(sp.u_mean) <= 2.0 / std::sqrt(1e6));

  // On Q, 1_E = (1 + mu)/2, so u - (dR/2) mu is the constant dR/2 - dE on Q.
  auto u = relative_uniformity_function(sp.E, sp.R);
  const double shift = sp.dR / 2 - sp.dE;
  CHECK(std::abs(shift) < 1e-3);
  double worst = 0;
  for (std::uint64_t n = 1; n <= 1000000; n += 7) {
    const double expect = sp.dR / 2 * moebius(n) + (squarefree(n) ? shift : 0.0);
    worst = std::max(worst, std::abs(u[n - 1] - expect));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("structure pairs with R = N") {
  StructureOptions opt;
  opt.u_grid = {100000};
  auto lam = structure_pair(fn("liouville"), Target::parse("1"), 100000, opt);
  CHECK(lam.kchi.k == 2);
  CHECK(lam.R.members == iota_set(100000));
  CHECK(std::abs(lam.dE - 0.5) < 5e-3);
  CHECK(lam.subset);

  auto f = xi_fn("lambda_xi", 1, 3);
  auto third = structure_pair(f, Target::parse("1/3"), 1000000, opt);
  CHECK(third.kchi.k == 3);
  CHECK(third.R.members == iota_set(1000000));
  // dE = (1/3) sum_j mean(f^j) e(-j/3); the j != 0 terms decay only like (log N)^{-3/2}.
  auto table = sieve_range(f, 1000000);
  cplx m1 = 0;
  for (auto v : table.values()) m1 += v;
  m1 /= 1e6;
  const double formula = 1.0 / 3.0 + 2.0 / 3.0 * std::real(m1 * std::polar(1.0, -2 * std::numbers::pi / 3));
  CHECK(std::abs(third.dE - formula) < 1e-9);
}

TEST_CASE("structure pair zero-mean and containment over random inputs") {
  auto g = rng(23);
  const char* zs[] = {"1", "-1", "1/3", "2/3"};
  for (int trial = 0; trial < 4; ++trial) {
    StructureOptions opt;
    opt.P = 20000;
    opt.rap_N = 20000;
    const std::uint64_t N = uniform(g, 2000, 20000);
    opt.u_grid = {N};
    auto f = trial < 2 ? fn(trial ? "moebius" : "liouville") : xi_fn("lambda_xi", 1, 3);
    auto sp = structure_pair(f, Target::parse(zs[trial]), N, opt);
    CHECK(sp.subset);
    CHECK(std::includes(sp.R.members.begin(), sp.R.members.end(), sp.E.members.begin(), sp.E.members.end()));
    CHECK(std::abs(sp.u_mean) <= 2.0 / std::sqrt(static_cast<double>(N)));
  }
  auto rat = structure_pair(fn("moebius"), Target::zero(), 5000);
  CHECK(rat.rational_case);
  CHECK(rat.R.members == rat.E.members);
}

TEST_CASE("divisibility reports") {
  auto Q = named_set("squarefree", 1000000);
  auto four = divisibility_report(Q, 4, 10);
  CHECK(four.verdict == "not_divisible");
  CHECK(four.witness.value() == 4);
  for (const auto& row : four.rows)
    if (row.obstruction) CHECK(row.count == 0);

  auto one = divisibility_report(Q, 1, 10);
  CHECK(one.verdict == "divisible_evidence");
  REQUIRE(one.rows.size() == 10);
  for (const auto& row : one.rows) {
    CHECK(row.count > 0);
    CHECK_FALSE(row.obstruction);
  }

  auto E = level_set(fn("liouville"), Target::parse("1"), 1000000);
  auto lam = divisibility_report(E, 0, 6);
  for (const auto& row : lam.rows) CHECK(std::abs(row.density - 1.0 / (2.0 * row.u)) < 5e-3);
}

TEST_CASE("divisibility obstructions are sound on small shifts") {
  // Any certificate must come with an empty intersection, checked by brute force.
  auto Q = named_set("squarefree", 20000);
  for (std::uint64_t r = 0; r <= 40; ++r) {
    auto rep = divisibility_report(Q, r, 30);
    for (const auto& row : rep.rows) {
      std::uint64_t brute = 0;
      for (auto n : Q.members)
        if (n > r && (n - r) % row.u == 0) ++brute;
      CHECK(brute == row.count);
      if (row.obstruction) CHECK(brute == 0);
    }
    if (rep.verdict == "not_divisible") CHECK(rep.witness.has_value());
  }
}

TEST_CASE("sp_set") {
  auto all = sp_set([](std::uint64_t) { return true; }, 100000);
  CHECK(all == named_set("squarefree", 100000).members);
  CHECK(sp_set(std::vector<std::uint64_t>{}, 1000) == std::vector<std::uint64_t>{1});
  CHECK(sp_set(std::vector<std::uint64_t>{2, 3}, 100) == std::vector<std::uint64_t>{1, 2, 3, 6});
  auto odd = sp_set([](std::uint64_t p) { return p != 2; }, kTenMillion);
  CHECK(odd.size() == kOddSquarefree1e7);
  CHECK(std::abs(static_cast<double>(odd.size()) / 1e7 - 4.0 / (std::numbers::pi * std::numbers::pi)) < 3e-3);
}

TEST_CASE("random relative subsets") {
  auto Q = named_set("squarefree", 1000000);
  CHECK(random_relative_subset(Q, 0.0, 1).members.empty());
  CHECK(random_relative_subset(Q, 1.0, 1).members == Q.members);
  CHECK(random_relative_subset(Q, 0.5, 9).members == random_relative_subset(Q, 0.5, 9).members);
  CHECK_THROWS_AS(random_relative_subset(Q, 1.5, 1), Error);
  const double dR = Q.density();
  for (std::uint64_t seed : {1ULL, 2ULL}) {
    auto E = random_relative_subset(Q, 0.5, seed);
    CHECK(std::includes(Q.members.begin(), Q.members.end(), E.members.begin(), E.members.end()));
    CHECK(std::abs(E.density() - dR / 2) <= 3 * 0.5 * std::sqrt(dR) / 1000.0);
    auto u = relative_uniformity_function(E, Q);
    CHECK(gowers_fast(u, 2) < 0.05);
  }
}

TEST_CASE("named sets") {
  for (const auto& name : named_set_names()) {
    auto E = named_set(name, 1000);
    CHECK(E.N == 1000);
  }
  CHECK(named_set("naturals", 50).members == iota_set(50));
  auto plus = named_set("moebius_plus", 1000).members.size();
  auto minus = named_set("moebius_minus", 1000).members.size();
  CHECK(plus + minus == named_set("squarefree", 1000).members.size());
  CHECK_THROWS_AS(named_set("primes", 10), Error);
}
