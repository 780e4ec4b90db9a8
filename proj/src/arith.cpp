#include "multfun/arith.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "multfun/error.hpp"

namespace multfun {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::input: return "input";
    case ErrorKind::resource: return "resource";
    case ErrorKind::search: return "search";
    case ErrorKind::unreliable: return "unreliable";
  }
  return "unknown";
}

cplx unit(double turns) {
  double frac = turns - std::floor(turns);
  double angle = 2.0 * std::numbers::pi * frac;
  return {std::cos(angle), std::sin(angle)};
}

cplx unit(long double turns) {
  long double frac = turns - std::floor(turns);
  long double angle = 2.0L * std::numbers::pi_v<long double> * frac;
  return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
}

cplx unit_fraction(std::int64_t num, std::int64_t den) {
  std::int64_t r = mod_floor(num, den);
  if (r == 0) return {1.0, 0.0};
  // Exact values at the quarter turns keep level-set arithmetic clean.
  if (2 * r == den) return {-1.0, 0.0};
  if (4 * r == den) return {0.0, 1.0};
  if (4 * r == 3 * den) return {0.0, -1.0};
  long double angle = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(r) /
                      static_cast<long double>(den);
  return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
}

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw_input("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  std::int64_t g = std::gcd(n, d);
  if (g == 0) g = 1;
  num = n / g;
  den = d / g;
}

Rational Rational::mod1() const { return Rational(mod_floor(num, den), den); }

std::string Rational::str() const {
  return std::to_string(num) + "/" + std::to_string(den);
}

Rational Rational::parse(std::string_view text) {
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    if (s.empty()) throw_input("empty integer in rational '" + std::string(text) + "'");
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw_input("malformed rational '" + std::string(text) + "'");
    return v;
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text), 1);
  std::int64_t d = parse_int(text.substr(slash + 1));
  if (d == 0) throw_input("rational with zero denominator: '" + std::string(text) + "'");
  return Rational(parse_int(text.substr(0, slash)), d);
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  a %= m;
  while (e > 0) {
    if (e & 1) result = mulmod(result, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return result;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace {

std::uint64_t pollard_rho(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  for (std::uint64_t c = 1;; ++c) {
    auto step = [&](std::uint64_t x) { return (mulmod(x, x, n) + c) % n; };
    std::uint64_t x = 2, y = 2, d = 1;
    while (d == 1) {
      x = step(x);
      y = step(step(y));
      d = std::gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

void factor_into(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  std::uint64_t d = pollard_rho(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
  if (n == 0) throw_input("cannot factor 0");
  std::vector<std::uint64_t> primes;
  for (std::uint64_t p = 2; p < 1000 && p * p <= n; ++p) {
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  factor_into(n, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<std::pair<std::uint64_t, unsigned>> result;
  for (std::uint64_t p : primes) {
    if (!result.empty() && result.back().first == p)
      ++result.back().second;
    else
      result.emplace_back(p, 1);
  }
  return result;
}

std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t phi = n;
  for (auto [p, k] : factorize(n)) phi = phi / p * (p - 1);
  return phi;
}

std::vector<std::uint32_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint32_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

std::uint64_t parse_u64(std::string_view text) {
  std::uint64_t v = 0;
  if (text.empty()) throw_input("expected a positive integer, got an empty string");
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec == std::errc::result_out_of_range)
    throw_input("integer '" + std::string(text) + "' does not fit in 64 bits");
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw_input("malformed integer '" + std::string(text) + "'");
  return v;
}

std::vector<std::uint64_t> geometric_grid(std::uint64_t lo, std::uint64_t hi, int per_decade) {
  std::vector<std::uint64_t> grid;
  if (lo == 0) lo = 1;
  if (hi < lo) return grid;
  double step = std::pow(10.0, 1.0 / per_decade);
  double x = static_cast<double>(lo);
  while (x < static_cast<double>(hi)) {
    auto v = static_cast<std::uint64_t>(std::llround(x));
    if (grid.empty() || v > grid.back()) grid.push_back(v);
    x *= step;
  }
  if (grid.empty() || grid.back() != hi) grid.push_back(hi);
  return grid;
}

}  // namespace multfun
