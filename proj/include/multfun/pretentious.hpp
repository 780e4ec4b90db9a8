#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "multfun/characters.hpp"
#include "multfun/mf_core.hpp"

namespace multfun {

enum class Trend { plateau, diverging, inconclusive };
const char* to_string(Trend t) noexcept;

/// Increment of a prime sum over the window (lo, hi], judged against the
/// Mertens mass sum 1/p over the same window.
struct WindowTest {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  double real_increment = 0.0;
  double imag_increment = 0.0;
  double mertens = 0.0;
  Trend trend = Trend::inconclusive;
  /// Real plateau and |imag_increment| below the same threshold.
  bool complex_plateau = false;
};

/// Plateau below this increment; divergence at or above `kDivergenceBand` times the Mertens mass.
inline constexpr double kPlateauIncrement = 0.05;
inline constexpr double kDivergenceBand = 0.5;

/// (P/100, P] at t = 0; widened for small |t| so the window covers a full turn of p^(it).
std::pair<std::uint64_t, std::uint64_t> distance_window(std::uint64_t P, double t);

struct DistanceProfile {
  std::string f_name;
  std::string g_name;
  double t = 0.0;
  std::vector<std::uint64_t> P_grid;
  /// D^2(f, g n^{it}; P) at each grid point.
  std::vector<double> partial;
  WindowTest window;
  double value() const { return partial.back(); }
};

/// Partial sums of sum_{p <= P} (1 - Re f(p) conj(g(p) p^{it})) / p on a grid of ratio sqrt(10).
DistanceProfile pretentious_distance(const MultiplicativeFunction& f, const MultiplicativeFunction& g,
                                     std::uint64_t P, double t = 0.0);

struct EulerProduct {
  std::vector<std::uint64_t> P_grid;
  std::vector<cplx> partial;
  /// Relative change over the last decade exceeded 1e-3.
  bool unsettled = false;
  cplx value() const { return partial.back(); }
};

EulerProduct euler_product_mean(const MultiplicativeFunction& f, std::uint64_t P);

struct ApMean {
  std::uint64_t q = 1, r = 0, N = 0;
  /// Number of terms floor(N/q).
  std::uint64_t terms = 0;
  cplx direct;
  /// Character-sum path; present when gcd(q, r) = 1.
  std::optional<cplx> decomposition;
};

/// Mean of f(qn + r) over 1 <= n <= floor(N/q).
ApMean ap_mean(const MultiplicativeFunction& f, std::uint64_t q, std::uint64_t r, std::uint64_t N);
/// Same, reusing a table that covers N + q.
ApMean ap_mean(const SieveTable& table, std::uint64_t q, std::uint64_t r, std::uint64_t N, bool with_decomposition = true);

struct TGrid {
  double lo = -10.0;
  double hi = 10.0;
  std::size_t count = 201;
  std::vector<double> values() const;
  /// Parses "lo:hi:count".
  static TGrid parse(const std::string& text);
};

struct MeanValueReport {
  std::string f_name;
  std::uint64_t P = 0;
  std::uint64_t N = 0;
  std::vector<std::pair<std::uint64_t, cplx>> empirical;
  std::vector<std::pair<std::uint64_t, cplx>> euler;
  bool euler_unsettled = false;
  std::string halasz_case;
  /// Smallest k <= 20 with f(2^k) != -1.
  std::optional<unsigned> witness_k;
  WindowTest untwisted;
  double best_t = 0.0;
  double best_t_distance = 0.0;
  WindowTest best_t_window;
  bool two_adic_match = false;
  bool every_t_diverges = false;
};

MeanValueReport halasz_classify(const MultiplicativeFunction& f, std::uint64_t P, const TGrid& t_grid, std::uint64_t N);

struct CharacterHit {
  std::uint64_t modulus = 1;
  std::size_t index = 0;
  double t = 0.0;
  double distance = 0.0;
  WindowTest window;
};

struct AperiodicityVerdict {
  std::string verdict;  // aperiodic_evidence | periodic_structure | inconclusive
  bool heuristic = true;
  std::optional<CharacterHit> hit;
  CharacterHit closest;
  std::size_t candidates = 0;
  std::size_t diverging = 0;
  /// max |ap_mean(f, q, r, N)| over q <= 10.
  double max_ap_mean = 0.0;
  std::uint64_t ap_N = 0;
};

AperiodicityVerdict aperiodicity_test(const MultiplicativeFunction& f, std::uint64_t Q_max, const TGrid& t_grid,
                                      std::uint64_t P, std::uint64_t N = 1000000);

struct RapVerdict {
  std::string verdict;  // rap_trivial | rap_pretends | not_besicovitch
  std::optional<CharacterHit> chi;
  WindowTest modulus_window;
  double besicovitch = 0.0;
  std::uint64_t N = 0;
};

RapVerdict rap_test(const MultiplicativeFunction& f, std::uint64_t Q_max, std::uint64_t P, std::uint64_t N);

/// First character (modulus, then index) with a plateauing untwisted profile D^2(f, chi; P).
std::optional<CharacterHit> first_pretended_character(const MultiplicativeFunction& f, std::uint64_t Q_max,
                                                      std::uint64_t P);

}  // namespace multfun
