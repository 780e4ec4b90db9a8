#include "multfun/seminorms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "multfun/error.hpp"
#include "multfun/fft.hpp"
#include "multfun/parallel.hpp"

namespace multfun {

namespace {

constexpr double kDirectBudget = 2e9;
constexpr double kFastBudget = 4e10;

void require_nonempty(std::span<const cplx> values) {
  if (values.empty()) throw_input("empty sequence");
}

// sum over x + y = z + w of g(x) g(y) conj(g(z) g(w)) on Z, which is the U^2
// cube sum on any cyclic group of length >= 2|g| - 1.
double additive_quadruple_sum(std::span<const cplx> g) {
  std::vector<cplx> a(next_pow2(2 * g.size()), cplx(0.0, 0.0));
  std::copy(g.begin(), g.end(), a.begin());
  dft_inplace(a);
  double total = 0.0;
  for (const auto& v : a) {
    double m = std::norm(v);
    total += m * m;
  }
  return total / static_cast<double>(a.size());
}

double interval_quadruples(double L) { return (2.0 * L * L * L + L) / 3.0; }

// f and conj(f) have equal norms; feeding both through the same orientation
// makes the computed values bitwise equal too.
std::vector<cplx> canonical_orientation(std::span<const cplx> values) {
  std::vector<cplx> out(values.begin(), values.end());
  auto first = std::find_if(out.begin(), out.end(), [](const cplx& v) { return v.imag() != 0.0; });
  if (first != out.end() && first->imag() < 0.0)
    for (auto& v : out) v = std::conj(v);
  return out;
}

}  // namespace

double besicovitch_seminorm(std::span<const cplx> values) {
  require_nonempty(values);
  double s = 0.0;
  for (const auto& v : values) s += std::abs(v);
  return s / static_cast<double>(values.size());
}

std::vector<ProfilePoint> besicovitch_profile(std::span<const cplx> values, int per_decade) {
  require_nonempty(values);
  std::vector<ProfilePoint> out;
  double s = 0.0;
  std::size_t done = 0;
  for (auto N : geometric_grid(std::min<std::uint64_t>(10, values.size()), values.size(), per_decade)) {
    for (; done < N; ++done) s += std::abs(values[done]);
    out.push_back({N, s / static_cast<double>(N)});
  }
  return out;
}

cplx fourier_coefficient(std::span<const cplx> values, double theta) {
  require_nonempty(values);
  cplx s(0.0, 0.0);
  for (std::size_t i = 0; i < values.size(); ++i)
    s += values[i] * unit(-static_cast<long double>(i + 1) * static_cast<long double>(theta));
  return s / static_cast<double>(values.size());
}

cplx fourier_coefficient(std::span<const cplx> values, const Rational& theta) {
  require_nonempty(values);
  const Rational t = theta.mod1();
  std::vector<cplx> phase(static_cast<std::size_t>(t.den));
  for (std::int64_t r = 0; r < t.den; ++r) phase[r] = unit_fraction(-r * t.num, t.den);
  cplx s(0.0, 0.0);
  for (std::size_t i = 0; i < values.size(); ++i) s += values[i] * phase[(i + 1) % t.den];
  return s / static_cast<double>(values.size());
}

double default_spectrum_threshold(std::uint64_t N) { return 5.0 * std::pow(static_cast<double>(N), -1.0 / 3.0); }

SpectrumScan spectrum_scan(std::span<const cplx> values, std::uint64_t q_max, std::optional<double> threshold) {
  require_nonempty(values);
  if (q_max == 0) throw_input("spectrum scan needs q_max >= 1");
  SpectrumScan scan;
  scan.N = values.size();
  scan.q_max = q_max;
  scan.threshold = threshold.value_or(default_spectrum_threshold(scan.N));
  const double invN = 1.0 / static_cast<double>(values.size());

  std::vector<std::vector<SpectrumPoint>> per_q(q_max);
  parallel_for(q_max, [&](std::size_t qi) {
    const auto q = static_cast<std::int64_t>(qi + 1);
    std::vector<cplx> residue(q, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < values.size(); ++i) residue[(i + 1) % q] += values[i];
    for (std::int64_t a = 0; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      cplx s(0.0, 0.0);
      for (std::int64_t r = 0; r < q; ++r) s += residue[r] * unit_fraction(-r * a, q);
      s *= invN;
      if (std::abs(s) > scan.threshold) per_q[qi].push_back({Rational(a, q), std::abs(s), s});
    }
  });
  for (auto& v : per_q) scan.points.insert(scan.points.end(), v.begin(), v.end());
  return scan;
}

PeriodicApproximant periodic_approximant(std::span<const cplx> values, std::uint64_t m) {
  require_nonempty(values);
  if (m == 0) throw_input("period must be >= 1");
  if (m > values.size() / 10)
    throw Error(ErrorKind::unreliable, "period " + std::to_string(m) + " exceeds N/10 = " +
                                           std::to_string(values.size() / 10) + "; residue means would be too noisy");
  PeriodicApproximant p;
  p.period = m;
  p.values.assign(m, cplx(0.0, 0.0));
  std::vector<std::uint64_t> count(m, 0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    p.values[(i + 1) % m] += values[i];
    ++count[(i + 1) % m];
  }
  for (std::uint64_t r = 0; r < m; ++r) p.values[r] /= static_cast<double>(count[r]);
  double res = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) res += std::abs(values[i] - p.values[(i + 1) % m]);
  p.residual = res / static_cast<double>(values.size());
  return p;
}

double gowers_direct_cost(std::span<const cplx> values, unsigned s) {
  double support = 0.0;
  for (const auto& v : values) support += v != cplx(0.0, 0.0);
  // The interval normalizer always runs over the full support [N].
  const double n = static_cast<double>(values.size());
  return (std::pow(support, s + 1) + std::pow(n, s + 1)) * std::pow(2.0, s);
}

namespace {

// Sum over (n, h_1..h_s) in (Z/Ntilde)^(s+1) of the cube product, visiting only
// tuples where n and every n + h_i lie in the support.
cplx cube_sum(const std::vector<cplx>& g, const std::vector<std::uint64_t>& support, unsigned s) {
  const std::uint64_t M = g.size();
  const std::size_t vertices = std::size_t{1} << s;
  std::vector<std::uint64_t> h(s);
  std::vector<bool> conj_at(vertices);
  for (std::size_t w = 0; w < vertices; ++w) conj_at[w] = (s - std::popcount(w)) % 2 == 1;

  cplx total(0.0, 0.0);
  std::vector<std::size_t> pick(s, 0);
  for (std::uint64_t n : support) {
    std::fill(pick.begin(), pick.end(), 0);
    while (true) {
      for (unsigned i = 0; i < s; ++i) h[i] = (support[pick[i]] + M - n) % M;
      cplx prod(1.0, 0.0);
      for (std::size_t w = 0; w < vertices && prod != cplx(0.0, 0.0); ++w) {
        std::uint64_t x = n;
        for (unsigned i = 0; i < s; ++i)
          if (w >> i & 1U) x += h[i];
        cplx v = g[x % M];
        prod *= conj_at[w] ? std::conj(v) : v;
      }
      total += prod;
      unsigned i = 0;
      while (i < s && ++pick[i] == support.size()) pick[i++] = 0;
      if (i == s) break;
    }
  }
  return total;
}

}  // namespace

double gowers_direct(std::span<const cplx> input, unsigned s) {
  require_nonempty(input);
  const auto canonical = canonical_orientation(input);
  std::span<const cplx> values(canonical);
  if (s == 0) throw_input("Gowers degree s must be >= 1");
  if (s > 16) throw_input("Gowers degree s too large");
  const double cost = gowers_direct_cost(values, s);
  if (cost > kDirectBudget)
    throw_resource("direct Gowers sum needs ~" + std::to_string(static_cast<long long>(cost)) +
                   " vertex products; use the fast method");
  const std::uint64_t N = values.size();
  const std::uint64_t Nt = N << s;
  std::vector<cplx> g(Nt, cplx(0.0, 0.0)), one(Nt, cplx(0.0, 0.0));
  std::vector<std::uint64_t> support, all(N);
  for (std::uint64_t i = 0; i < N; ++i) {
    g[i] = values[i];
    one[i] = cplx(1.0, 0.0);
    all[i] = i;
    if (values[i] != cplx(0.0, 0.0)) support.push_back(i);
  }
  if (support.empty()) return 0.0;
  const double num = std::max(0.0, cube_sum(g, support, s).real());
  const double den = cube_sum(one, all, s).real();
  return std::pow(num / den, 1.0 / static_cast<double>(std::size_t{1} << s));
}

double gowers_fast(std::span<const cplx> input, unsigned s) {
  require_nonempty(input);
  const auto canonical = canonical_orientation(input);
  std::span<const cplx> values(canonical);
  const std::size_t N = values.size();
  if (s == 1) {
    cplx sum = std::accumulate(values.begin(), values.end(), cplx(0.0, 0.0));
    return std::abs(sum) / static_cast<double>(N);
  }
  if (s == 2) {
    const double q = additive_quadruple_sum(values);
    return std::pow(std::max(0.0, q) / interval_quadruples(static_cast<double>(N)), 0.25);
  }
  if (s == 3) {
    double cost = 0.0;
    for (std::size_t d = 0; d < N; ++d) {
      double m = static_cast<double>(next_pow2(2 * (N - d)));
      cost += m * std::log2(std::max(2.0, m));
    }
    if (cost > kFastBudget)
      throw_resource("U^3 recursion at N = " + std::to_string(N) + " exceeds the transform budget");
    // h and -h give conjugate, shifted difference functions with equal U^2 sums.
    std::vector<double> per_shift(N, 0.0);
    parallel_for(N, [&](std::size_t d) {
      const std::size_t L = N - d;
      std::vector<cplx> diff(L);
      bool nonzero = false;
      for (std::size_t n = 0; n < L; ++n) {
        diff[n] = values[n + d] * std::conj(values[n]);
        nonzero = nonzero || diff[n] != cplx(0.0, 0.0);
      }
      if (nonzero) per_shift[d] = additive_quadruple_sum(diff);
    });
    double num = 0.0, den = 0.0;
    for (std::size_t d = 0; d < N; ++d) {
      const double weight = d == 0 ? 1.0 : 2.0;
      num += weight * per_shift[d];
      den += weight * interval_quadruples(static_cast<double>(N - d));
    }
    return std::pow(std::max(0.0, num) / den, 0.125);
  }
  throw_input("fast Gowers norms support s in {1, 2, 3}; got s = " + std::to_string(s));
}

GowersReport uniformity_profile(std::span<const cplx> values, unsigned s, const std::vector<std::uint64_t>& N_grid,
                                std::string source) {
  if (N_grid.empty()) throw_input("empty N grid");
  if (!std::is_sorted(N_grid.begin(), N_grid.end()) || N_grid.front() == 0)
    throw_input("N grid must be positive and ascending");
  if (N_grid.back() > values.size()) throw_input("N grid exceeds the available values");
  GowersReport report;
  report.source = std::move(source);
  report.s = s;
  const double exponent = static_cast<double>(std::size_t{1} << (s + 1));
  for (auto N : N_grid) {
    auto prefix = values.first(N);
    GowersEntry e;
    e.N = N;
    e.Ntilde = N << s;
    e.value = gowers_fast(prefix, s);
    e.method = "fast";
    e.bound_lhs = std::pow(e.value, exponent);
    e.bound_rhs = besicovitch_seminorm(prefix);
    e.bound_ok = e.bound_lhs <= e.bound_rhs + 1e-9;
    report.inequality_holds = report.inequality_holds && e.bound_ok;
    report.entries.push_back(e);
  }
  report.strictly_decreasing = report.entries.size() > 1;
  for (std::size_t i = 1; i < report.entries.size(); ++i)
    report.strictly_decreasing = report.strictly_decreasing && report.entries[i].value < report.entries[i - 1].value;
  return report;
}

GowersReport uniformity_profile(const MultiplicativeFunction& f, unsigned s, const std::vector<std::uint64_t>& N_grid) {
  if (N_grid.empty()) throw_input("empty N grid");
  auto table = sieve_range(f, *std::max_element(N_grid.begin(), N_grid.end()));
  return uniformity_profile(table.values(), s, N_grid, f.label());
}

}  // namespace multfun
