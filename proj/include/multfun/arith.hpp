#pragma once

#include <complex>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace multfun {

using cplx = std::complex<double>;

/// e(x) = exp(2 pi i x), with x reduced mod 1 before the trig call.
cplx unit(double turns);
cplx unit(long double turns);

/// e(num/den) evaluated from the exact residue num mod den.
cplx unit_fraction(std::int64_t num, std::int64_t den);

/// Normalized fraction num/den with den > 0 and gcd(num, den) = 1.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d);

  /// Representative of this value mod 1 in [0, 1).
  Rational mod1() const;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;

  /// Parses "a/b" or an integer "a".
  static Rational parse(std::string_view text);

  friend bool operator==(const Rational&, const Rational&) = default;
};

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m);

/// Deterministic Miller-Rabin for all 64-bit inputs.
bool is_prime(std::uint64_t n);

/// Prime factorization as (p, k) pairs in ascending order of p. n >= 1.
std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n);

std::uint64_t euler_phi(std::uint64_t n);

/// All primes <= limit, ascending.
std::vector<std::uint32_t> primes_up_to(std::uint64_t limit);

/// Strict decimal parse of a positive 64-bit integer; throws on overflow or junk.
std::uint64_t parse_u64(std::string_view text);

/// Roughly geometric integer grid from lo to hi inclusive, `per_decade` points per factor 10.
std::vector<std::uint64_t> geometric_grid(std::uint64_t lo, std::uint64_t hi, int per_decade);

inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace multfun
