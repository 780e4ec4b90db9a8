#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace multfun {

/// Product of cyclic groups Z/m_1 x ... x Z/m_k with T adding 1 in every factor.
struct FiniteSystem {
  std::vector<std::uint64_t> moduli;

  std::uint64_t size() const;
  /// Parses "4" or "2x3".
  static FiniteSystem parse(const std::string& text);
};

/// Subset of a FiniteSystem as a membership bitmap over mixed-radix indices.
struct FiniteSet {
  FiniteSystem system;
  std::vector<char> member;

  std::uint64_t count() const;
  double measure() const;
  /// Points are tuples with one coordinate per factor.
  static FiniteSet from_points(const FiniteSystem& system, const std::vector<std::vector<std::int64_t>>& points);
  /// "0" or "0,1;1,2": points separated by ';', coordinates by ','.
  static FiniteSet parse(const FiniteSystem& system, const std::string& text);
};

/// T^{-a} A, i.e. {x : x + a in A} in every factor.
FiniteSet preimage(const FiniteSet& A, std::int64_t a);

struct Arc {
  double lo, hi;  // [lo, hi)
};

/// Disjoint sorted half-open arcs in [0, 1).
struct ArcSet {
  std::vector<Arc> arcs;

  double measure() const;
  bool contains(double x) const;
  /// Accepts wrapping arcs (lo > hi) and overlaps; splits and merges them.
  static ArcSet normalize(std::vector<Arc> raw);
  /// "0:0.1" or "0:0.1;0.5:0.6".
  static ArcSet parse(const std::string& text);
};

struct TorusRotation {
  double alpha = 0.0;
  std::string alpha_tag;
};

/// A - t mod 1, which is T^{-a} A when t = frac(a alpha).
ArcSet translate(const ArcSet& A, double t);

using System = std::variant<FiniteSystem, TorusRotation>;
using SetA = std::variant<FiniteSet, ArcSet>;

/// Integer polynomials with zero constant term; coefficient i multiplies n^i.
struct PolynomialFamily {
  std::vector<std::vector<std::int64_t>> polys;

  /// "n", "n^2+3n", "n;2n": polynomials separated by ';'.
  static PolynomialFamily parse(const std::string& text);
  std::size_t size() const { return polys.size(); }
  std::string str() const;
};

/// p(n) mod m, exact.
std::uint64_t poly_mod(const std::vector<std::int64_t>& p, std::uint64_t n, std::uint64_t m);
/// frac(p(n) alpha) by Horner on the circle; error grows like n^deg * 1e-19.
double poly_frac(const std::vector<std::int64_t>& p, std::uint64_t n, double alpha);

/// #{x in A : T^{a_i} x in A for all i}, exact.
std::uint64_t intersection_count(const FiniteSet& A, const std::vector<std::uint64_t>& shift_residues);
/// mu(A n T^{-a_1} A n ... n T^{-a_l} A).
double intersection_measure(const FiniteSet& A, const std::vector<std::int64_t>& shifts);
double intersection_measure(const TorusRotation& T, const ArcSet& A, const std::vector<std::int64_t>& shifts);

struct RunningPoint {
  std::uint64_t J;
  double average;
  /// Exact average numerator / denominator on finite systems.
  std::optional<std::uint64_t> numerator, denominator;
};

struct RecurrenceReport {
  std::string kind;  // recurrence | convergence
  std::string system;
  std::string set;
  std::string polys;
  std::string sequence;
  std::uint64_t J_max = 0;
  std::uint64_t used = 0;
  bool truncated = false;
  std::vector<RunningPoint> running;
  double tail_estimate = 0.0;
  double floor = 0.0;
  /// max - min of the running averages over the last decade of the grid.
  double oscillation = 0.0;
  std::string positivity;  // positive_evidence | zero_evidence | inconclusive
  bool all_zero = false;
  std::optional<std::string> certificate;
};

/// Geometric J-grid, ten points per decade, ending at J_max.
std::vector<std::uint64_t> j_grid(std::uint64_t J_max);

/// {n - r : n in E, n > r}.
std::vector<std::uint64_t> shift_sequence(const std::vector<std::uint64_t>& E, std::uint64_t r);

RecurrenceReport recurrence_average(const System& system, const SetA& A, const PolynomialFamily& polys,
                                    const std::vector<std::uint64_t>& E, std::uint64_t J_max,
                                    std::optional<double> floor = std::nullopt);

/// Averages of mu-integrals of f * prod_i f(T^{p_i(n)} .) with f given on the points of a FiniteSystem.
/// An empty observable means the indicator of A. Torus systems accept only indicators.
RecurrenceReport convergence_average(const System& system, const SetA& A, const PolynomialFamily& polys,
                                     const std::vector<std::uint64_t>& E, std::uint64_t J_max,
                                     const std::vector<double>& observable = {});

}  // namespace multfun
