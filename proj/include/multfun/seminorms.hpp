#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "multfun/arith.hpp"
#include "multfun/mf_core.hpp"

namespace multfun {

// All sequence arguments are f(1), ..., f(N): element i holds f(i + 1).

/// (1/N) sum |f(n)|.
double besicovitch_seminorm(std::span<const cplx> values);

struct ProfilePoint {
  std::uint64_t N;
  double value;
};

/// besicovitch_seminorm of every prefix on a geometric grid ending at N.
std::vector<ProfilePoint> besicovitch_profile(std::span<const cplx> values, int per_decade = 4);

/// (1/N) sum f(n) e(-n theta).
cplx fourier_coefficient(std::span<const cplx> values, double theta);
/// Same with the phase taken from n*a mod q exactly.
cplx fourier_coefficient(std::span<const cplx> values, const Rational& theta);

struct SpectrumPoint {
  Rational theta;
  double magnitude;
  cplx value;
};

struct SpectrumScan {
  std::uint64_t N = 0;
  std::uint64_t q_max = 0;
  double threshold = 0.0;
  /// Every reduced a/q with q <= q_max whose magnitude exceeds threshold, by q then a.
  std::vector<SpectrumPoint> points;
};

/// Default empirical spectrum threshold 5 N^(-1/3).
double default_spectrum_threshold(std::uint64_t N);

SpectrumScan spectrum_scan(std::span<const cplx> values, std::uint64_t q_max,
                           std::optional<double> threshold = std::nullopt);

struct PeriodicApproximant {
  std::uint64_t period = 1;
  /// values[r] is the mean of f over n = r mod period.
  std::vector<cplx> values;
  /// (1/N) sum |f(n) - P(n)|.
  double residual = 0.0;
};

/// Requires 1 <= m <= N/10.
PeriodicApproximant periodic_approximant(std::span<const cplx> values, std::uint64_t m);

/// Literal cube sum over Z/(2^s N)Z, skipping terms with a vertex outside the support.
double gowers_direct(std::span<const cplx> values, unsigned s);

/// s in {1, 2, 3}; Fourier identity for s = 2 and the difference recursion for s = 3.
double gowers_fast(std::span<const cplx> values, unsigned s);

/// Term count gowers_direct would visit, for budget checks.
double gowers_direct_cost(std::span<const cplx> values, unsigned s);

struct GowersEntry {
  std::uint64_t N;
  std::uint64_t Ntilde;
  double value;
  std::string method;
  /// Inequality check: value^(2^(s+1)) against (1/N) sum |f(n)|.
  double bound_lhs;
  double bound_rhs;
  bool bound_ok;
};

struct GowersReport {
  std::string source;
  unsigned s = 2;
  std::vector<GowersEntry> entries;
  bool strictly_decreasing = false;
  bool inequality_holds = true;
};

GowersReport uniformity_profile(const MultiplicativeFunction& f, unsigned s, const std::vector<std::uint64_t>& N_grid);
GowersReport uniformity_profile(std::span<const cplx> values, unsigned s, const std::vector<std::uint64_t>& N_grid,
                                std::string source);

}  // namespace multfun
