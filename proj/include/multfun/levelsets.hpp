#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "multfun/mf_core.hpp"
#include "multfun/pretentious.hpp"

namespace multfun {

/// Level-set target z. Roots of unity stay exact; other values need a tolerance.
struct Target {
  enum class Kind { zero, root, value };
  Kind kind = Kind::zero;
  /// z = e(root) for Kind::root, reduced mod 1.
  Rational root;
  /// z for Kind::value.
  cplx value{0.0, 0.0};
  std::optional<double> tol;
  std::string text;

  /// "0", "1", "-1", "i", "-i", "a/b" (meaning e(a/b)), a real, or "re,im".
  static Target parse(const std::string& text, std::optional<double> tol = std::nullopt);
  static Target zero();
  static Target unit_root(Rational r);

  cplx complex_value() const;
  bool is_zero() const { return kind == Kind::zero; }
  /// z^k, exact when z is.
  Target power(unsigned k) const;
};

struct LevelSet {
  std::string source;
  std::shared_ptr<const MultiplicativeFunction> function;
  Target target;
  bool exact = false;
  std::uint64_t N = 0;
  std::vector<std::uint64_t> members;

  double density() const { return N == 0 ? 0.0 : static_cast<double>(members.size()) / static_cast<double>(N); }
  bool contains(std::uint64_t n) const;
};

LevelSet level_set(const MultiplicativeFunction& f, const Target& z, std::uint64_t N);
LevelSet level_set(const SieveTable& table, const MultiplicativeFunction& f, const Target& z);

/// Bit n-1 of the bitmap is set iff n is a member; bytes little-endian, LSB first.
void write_bitmap(const LevelSet& E, std::ostream& out);
/// One decimal member per line.
void write_text(const LevelSet& E, std::ostream& out);

struct DensityCell {
  std::uint64_t q, r;
  std::uint64_t count;
  /// count / N.
  double density;
  /// count / #{n <= N : n = r mod q}.
  double relative;
};

struct DensityProfile {
  std::uint64_t N = 0;
  std::uint64_t count = 0;
  double density = 0.0;
  std::uint64_t q_max = 0;
  std::vector<DensityCell> cells;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> empty_cells;
};

DensityProfile density_profile(const LevelSet& E, std::uint64_t q_max);

struct ConcentrationPoint {
  cplx z;
  /// Exact value e(root) when the function has an exact path and no y-part.
  std::optional<Rational> root;
  /// Sum of 1/p over p <= P with f(p) = z.
  double mass = 0.0;
  /// Same over (100, P], compared against the bands.
  double window_mass = 0.0;
  std::string status;  // point | inconclusive
};

struct ConcentrationAnalysis {
  std::string source;
  std::uint64_t P = 0;
  std::uint64_t k_max = 0;
  double point_band = 0.0;
  double floor_band = 0.1;
  std::vector<ConcentrationPoint> points;
  std::vector<ConcentrationPoint> undecided;
  std::size_t buckets = 0;
  bool unbounded = false;
  /// Order L of the group of L-th roots of unity generated by the points.
  std::uint64_t group_order = 0;
  double tail = 0.0;
  WindowTest tail_window;
  std::string verdict;  // concentrated | not_concentrated | inconclusive

  std::vector<Rational> group() const;
};

ConcentrationAnalysis concentration_analysis(const MultiplicativeFunction& f, std::uint64_t P, std::uint64_t k_max);

struct ZeroRepair {
  MultiplicativeFunction g;
  bool changed = false;
  /// y = e(gamma).
  double gamma = 0.0;
  unsigned candidate = 0;
  std::uint64_t verify_N = 0;
  bool verified = false;
  std::vector<std::string> warnings;
};

/// Replaces zeros of f at prime powers by y = e(gamma) without changing E(f, z).
ZeroRepair zero_repair(const MultiplicativeFunction& f, const Target& z, std::uint64_t verify_N = 10000);

struct KChiResult {
  bool found = false;
  bool fallback = false;
  unsigned k = 0;
  std::uint64_t modulus = 1;
  std::size_t index = 0;
  double distance = 0.0;
  WindowTest window;
  std::string message;
};

KChiResult find_k_and_character(const MultiplicativeFunction& g, unsigned k_max, std::uint64_t Q_max,
                                std::uint64_t P, std::optional<std::uint64_t> group_order = std::nullopt);

struct StructureOptions {
  unsigned k_max = 24;
  std::uint64_t Q_max = 60;
  std::uint64_t P = 100000;
  std::vector<std::uint64_t> u_grid;  // empty: decades up to N
  bool with_u3 = false;
  std::uint64_t u3_limit = 4096;
  std::uint64_t verify_N = 10000;
  std::uint64_t rap_N = 1000000;
};

struct UNorm {
  std::uint64_t N;
  unsigned s;
  double value;
};

struct StructurePair {
  LevelSet E;
  LevelSet R;
  bool rational_case = false;
  std::optional<ZeroRepair> repair;
  std::optional<ConcentrationAnalysis> concentration;
  KChiResult kchi;
  double dE = 0.0, dR = 0.0;
  bool subset = false;
  double u_mean = 0.0;
  std::vector<UNorm> u_norms;
  std::optional<RapVerdict> rap;
};

StructurePair structure_pair(const MultiplicativeFunction& f, const Target& z, std::uint64_t N,
                             const StructureOptions& opt = {});

/// d_R 1_E - d_E 1_R on [N] with the densities of the same truncation.
std::vector<cplx> relative_uniformity_function(const LevelSet& E, const LevelSet& R);

struct DivisibilityRow {
  std::uint64_t u;
  std::uint64_t count;
  double density;
  /// Symbolic reason (E - r) meets uN in nothing, if one exists.
  std::optional<std::string> obstruction;
};

struct DivisibilityReport {
  std::string E_name;
  std::uint64_t r = 0;
  std::uint64_t N = 0;
  double density_floor = 1e-3;
  std::vector<DivisibilityRow> rows;
  std::string verdict;  // divisible_evidence | not_divisible | inconclusive
  std::optional<std::uint64_t> witness;
};

DivisibilityReport divisibility_report(const LevelSet& E, std::uint64_t r, std::uint64_t u_max);

/// Squarefree n <= N whose prime factors all satisfy `allowed` (1 included).
std::vector<std::uint64_t> sp_set(const std::function<bool(std::uint64_t)>& allowed, std::uint64_t N);
std::vector<std::uint64_t> sp_set(const std::vector<std::uint64_t>& primes, std::uint64_t N);

LevelSet random_relative_subset(const LevelSet& R, double p, std::uint64_t seed);

/// Named sets: squarefree (E(mu^2, 1)), liouville_plus / liouville_minus (E(lambda, +-1)),
/// moebius_plus / moebius_minus, naturals.
LevelSet named_set(const std::string& name, std::uint64_t N);
const std::vector<std::string>& named_set_names();

}  // namespace multfun
