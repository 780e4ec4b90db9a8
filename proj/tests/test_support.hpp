#pragma once

#include <cstdint>
#include <random>

#include "multfun/mf_core.hpp"

namespace testing_support {

// Hand-rolled generators for property tests; fixed seeds keep failures reproducible.
inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline std::uint64_t uniform(std::mt19937_64& g, std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(g);
}

// Omega(n) and squarefreeness by trial division, independent of the library.
inline int big_omega(std::uint64_t n) {
  int c = 0;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    while (n % d == 0) {
      n /= d;
      ++c;
    }
  return n > 1 ? c + 1 : c;
}

inline bool squarefree(std::uint64_t n) {
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % (d * d) == 0) return false;
  return true;
}

inline int moebius(std::uint64_t n) {
  if (!squarefree(n)) return 0;
  return big_omega(n) % 2 ? -1 : 1;
}

inline std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
  while (b) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

inline multfun::MultiplicativeFunction fn(const char* name) { return multfun::builtin(name, {}); }

inline multfun::MultiplicativeFunction xi_fn(const char* name, std::int64_t a, std::int64_t b) {
  multfun::Params p;
  p.xi = multfun::Rational(a, b);
  return multfun::builtin(name, p);
}

}  // namespace testing_support
