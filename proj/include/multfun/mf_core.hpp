#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "multfun/arith.hpp"
#include "multfun/characters.hpp"

namespace multfun {

/// Exact value of a catalog function: zero, or e(root / order) * y^ypow where
/// y = e(gamma) is a generic unit introduced by zero repair.
struct ExactValue {
  bool zero = false;
  std::int64_t root = 0;
  std::int64_t ypow = 0;

  static ExactValue zero_value() { return {true, 0, 0}; }
  static ExactValue unit_root(std::int64_t r) { return {false, r, 0}; }
  friend bool operator==(const ExactValue&, const ExactValue&) = default;
};

ExactValue exact_multiply(const ExactValue& a, const ExactValue& b, std::int64_t order);

struct PrimePowerSpec {
  /// Value at p^k, k >= 1.
  std::function<cplx(std::uint64_t, unsigned)> rule;
  /// Exact value at p^k; empty when the function only has a float path.
  std::function<ExactValue(std::uint64_t, unsigned)> exact_rule;
  /// Denominator for ExactValue::root; > 0 iff exact_rule is set.
  std::int64_t root_order = 0;
  /// y = e(y_turns) for ExactValue::ypow.
  double y_turns = 0.0;
  /// f(p^k) = f(p)^k; the rules are then consulted only at k = 1.
  bool completely_multiplicative = false;
  /// Disables the |f| <= 1 check.
  bool unbounded = false;
};

/// Parameters echoed in reports. Rational xi keeps the exact path open.
struct Params {
  std::optional<Rational> xi;
  std::optional<double> xi_real;
  std::uint64_t modulus = 0;
  std::size_t index = 0;
  std::string path;
};

class MultiplicativeFunction {
 public:
  MultiplicativeFunction(std::string name, Params params, PrimePowerSpec spec);

  const std::string& name() const { return name_; }
  const Params& params() const { return params_; }
  const PrimePowerSpec& spec() const { return spec_; }
  /// Name with parameters, e.g. "lambda_xi(1/3)".
  std::string label() const;

  bool has_exact() const { return static_cast<bool>(spec_.exact_rule); }
  std::int64_t root_order() const { return spec_.root_order; }
  bool completely_multiplicative() const { return spec_.completely_multiplicative; }

  cplx at_prime_power(std::uint64_t p, unsigned k) const;
  std::optional<ExactValue> exact_at_prime_power(std::uint64_t p, unsigned k) const;
  cplx to_complex(const ExactValue& v) const;

  /// n -> f(n)^m.
  MultiplicativeFunction power(unsigned m) const;
  /// n -> |f(n)|.
  MultiplicativeFunction modulus_function() const;
  MultiplicativeFunction conjugate() const;

  /// Programmatic construction from a float rule.
  static MultiplicativeFunction from_rule(std::string name, std::function<cplx(std::uint64_t, unsigned)> rule,
                                          bool completely_multiplicative = false);

 private:
  std::string name_;
  Params params_;
  PrimePowerSpec spec_;
};

cplx eval_at(const MultiplicativeFunction& f, std::uint64_t n);
std::optional<ExactValue> eval_exact(const MultiplicativeFunction& f, std::uint64_t n);

/// f(1..N) with the smallest-prime-factor table that produced it.
class SieveTable {
 public:
  std::uint64_t size() const { return n_; }
  cplx operator[](std::uint64_t n) const { return values_[n]; }
  /// f(1), ..., f(N): element i holds f(i + 1).
  std::span<const cplx> values() const { return {values_.data() + 1, n_}; }
  std::uint32_t spf(std::uint64_t n) const { return spf_[n]; }

  bool has_exact() const { return !root_.empty(); }
  std::int64_t root_order() const { return root_order_; }
  /// Exact root numerator at n, or -1 where f(n) = 0. Requires has_exact().
  std::int32_t exact_root(std::uint64_t n) const { return root_[n]; }
  /// Power of y at n (0 when the function carries no y).
  std::int32_t exact_ypow(std::uint64_t n) const { return ypow_.empty() ? 0 : ypow_[n]; }
  std::optional<ExactValue> exact(std::uint64_t n) const;

  const std::string& source() const { return source_; }

 private:
  friend SieveTable sieve_range(const MultiplicativeFunction& f, std::uint64_t N);
  std::uint64_t n_ = 0;
  std::vector<cplx> values_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::int32_t> root_;
  std::vector<std::int32_t> ypow_;
  std::int64_t root_order_ = 0;
  std::string source_;
};

/// Sieve cap in bytes; MULTFUN_MEM_CAP_MB overrides the 4096 MB default.
std::uint64_t memory_cap_bytes();

SieveTable sieve_range(const MultiplicativeFunction& f, std::uint64_t N);

/// Smallest prime factor of every n <= N (spf[0] = 0, spf[1] = 1).
std::vector<std::uint32_t> smallest_prime_factors(std::uint64_t N);

const std::vector<std::string>& catalog_names();
MultiplicativeFunction builtin(std::string_view name, const Params& params);

MultiplicativeFunction dirichlet_character_function(const DirichletCharacter& chi);
/// Constant function 1 (the principal character mod 1).
MultiplicativeFunction constant_one();

/// Custom function from the `p k re im` text format.
MultiplicativeFunction custom_from_text(std::string_view text, std::string name = "custom_file");
MultiplicativeFunction custom_from_file(const std::string& path);

}  // namespace multfun
