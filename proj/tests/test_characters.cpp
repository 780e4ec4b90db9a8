#include <doctest.h>

#include <set>

#include "multfun/characters.hpp"
#include "multfun/error.hpp"
#include "test_support.hpp"

using namespace multfun;
using namespace testing_support;

TEST_CASE("small moduli") {
  auto one = characters_mod(1);
  REQUIRE(one.size() == 1);
  CHECK(one[0](7) == cplx(1, 0));

  auto four = characters_mod(4);
  REQUIRE(four.size() == 2);
  CHECK(four[0].is_principal);
  CHECK(four[1](3) == cplx(-1, 0));

  auto five = characters_mod(5);
  REQUIRE(five.size() == 4);
  std::set<std::pair<long, long>> at2;
  for (const auto& chi : five) {
    auto v = chi(2);
    CHECK(std::abs(std::pow(v, 4) - 1.0) < 1e-12);
    at2.insert({std::lround(v.real()), std::lround(v.imag())});
  }
  CHECK(at2.size() == 4);
  CHECK_THROWS_AS(characters_mod(0), Error);
}

TEST_CASE("character count equals phi") {
  for (std::uint64_t q = 1; q <= 200; ++q) CHECK(characters_mod(q).size() == euler_phi(q));
}

TEST_CASE("table invariants") {
  for (std::uint64_t q = 1; q <= 60; ++q) {
    for (const auto& chi : characters_mod(q)) {
      for (std::uint64_t n = 0; n < 2 * q; ++n) {
        CHECK(chi(n + q) == chi(n));
        CHECK((chi(n) == cplx(0, 0)) == (gcd(n, q) != 1));
        if (gcd(n, q) == 1) CHECK(std::abs(std::pow(chi(n), static_cast<int>(chi.phi)) - 1.0) < 1e-9);
      }
      for (std::uint64_t n = 1; n <= 2 * q; ++n)
        for (std::uint64_t m = 1; m <= 2 * q; ++m) REQUIRE(std::abs(chi(n * m) - chi(n) * chi(m)) < 1e-12);
    }
  }
}

TEST_CASE("orthogonality") {
  for (std::uint64_t q = 1; q <= 50; ++q) {
    auto chars = characters_mod(q);
    for (std::size_t i = 0; i < chars.size(); ++i)
      for (std::size_t j = 0; j < chars.size(); ++j) {
        cplx s = 0;
        for (std::uint64_t n = 1; n <= q; ++n) s += chars[i](n) * std::conj(chars[j](n));
        if (i == j)
          CHECK(std::abs(s - static_cast<double>(euler_phi(q))) < 1e-9);
        else
          CHECK(std::abs(s) < 1e-9);
      }
  }
}

TEST_CASE("character_mod matches the full list") {
  for (std::uint64_t q : {7u, 12u, 16u, 45u}) {
    auto all = characters_mod(q);
    for (std::size_t i = 0; i < all.size(); ++i) {
      auto c = character_mod(q, i);
      CHECK(c.index == i);
      for (std::uint64_t n = 0; n < q; ++n) CHECK(c(n) == all[i](n));
    }
  }
}

TEST_CASE("induction") {
  auto p6 = induce(principal_character(1), 6);
  CHECK(p6.modulus == 6);
  CHECK(p6.is_principal);
  for (std::uint64_t n = 0; n < 6; ++n) CHECK(p6(n) == cplx(gcd(n, 6) == 1 ? 1 : 0, 0));

  auto chi4 = characters_mod(4)[1];
  auto chi8 = induce(chi4, 8);
  CHECK(chi8(3) == cplx(-1, 0));
  for (std::uint64_t n = 0; n < 8; n += 2) CHECK(chi8(n) == cplx(0, 0));
  CHECK_THROWS_AS(induce(chi4, 6), Error);
}

TEST_CASE("indicator decomposition examples") {
  auto d41 = indicator_decomposition(4, 1);
  REQUIRE(d41.size() == 2);
  CHECK(std::abs(d41[0].coefficient - 0.5) < 1e-15);
  CHECK(std::abs(d41[1].coefficient - 0.5) < 1e-15);

  auto d32 = indicator_decomposition(3, 2);
  REQUIRE(d32.size() == 2);
  CHECK(d32[1].chi(2) == cplx(-1, 0));
  CHECK(std::abs(d32[1].coefficient + 0.5) < 1e-15);

  auto d10 = indicator_decomposition(1, 0);
  REQUIRE(d10.size() == 1);
  CHECK(d10[0].coefficient == cplx(1, 0));
  CHECK_THROWS_AS(indicator_decomposition(4, 2), Error);
}

TEST_CASE("indicator reconstruction on random pairs") {
  auto g = rng(3);
  int done = 0;
  while (done < 20) {
    auto q = uniform(g, 1, 60), r = uniform(g, 0, q - 1);
    if (gcd(q, r) != 1) continue;
    ++done;
    auto terms = indicator_decomposition(q, r);
    for (std::uint64_t n = 1; n <= 10 * q; ++n) {
      if (gcd(n, q) != 1) continue;
      cplx s = 0;
      for (const auto& t : terms) s += t.coefficient * t.chi(n);
      CHECK(std::abs(s - cplx(n % q == r % q ? 1 : 0, 0)) < 1e-12);
    }
  }
}

TEST_CASE("generating character") {
  auto q = 7u;
  auto idx = generating_character_index(q);
  CHECK(character_mod(q, idx).order == 6);
  CHECK_THROWS_AS(generating_character_index(8), Error);
}
