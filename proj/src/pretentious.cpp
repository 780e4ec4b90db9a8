#include "multfun/pretentious.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "multfun/error.hpp"
#include "multfun/parallel.hpp"

namespace multfun {

const char* to_string(Trend t) noexcept {
  switch (t) {
    case Trend::plateau: return "plateau";
    case Trend::diverging: return "diverging";
    case Trend::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct PrimeSet {
  std::vector<std::uint64_t> p;
  std::vector<double> inv;
  std::vector<double> logp;
};

PrimeSet prime_set(std::uint64_t P) {
  PrimeSet s;
  for (auto q : primes_up_to(P)) {
    s.p.push_back(q);
    s.inv.push_back(1.0 / static_cast<double>(q));
    s.logp.push_back(std::log(static_cast<double>(q)));
  }
  return s;
}

std::vector<cplx> at_primes(const MultiplicativeFunction& f, const PrimeSet& ps) {
  std::vector<cplx> v(ps.p.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.at_prime_power(ps.p[i], 1);
  return v;
}

// Neumaier summation; the mean paths below compare to 1e-12.
class Accumulator {
 public:
  void add(double x) {
    double t = sum_ + x;
    comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0, comp_ = 0.0;
};

struct ComplexAccumulator {
  Accumulator re, im;
  void add(cplx z) {
    re.add(z.real());
    im.add(z.imag());
  }
  cplx value() const { return {re.value(), im.value()}; }
};

WindowTest judge(std::uint64_t lo, std::uint64_t hi, double real_inc, double imag_inc, double mertens) {
  WindowTest w;
  w.lo = lo;
  w.hi = hi;
  w.real_increment = real_inc;
  w.imag_increment = imag_inc;
  w.mertens = mertens;
  if (real_inc < kPlateauIncrement)
    w.trend = Trend::plateau;
  else if (real_inc >= kDivergenceBand * mertens)
    w.trend = Trend::diverging;
  else
    w.trend = Trend::inconclusive;
  w.complex_plateau = w.trend == Trend::plateau && std::abs(imag_inc) < kPlateauIncrement;
  return w;
}

// 1 - cos(2 pi |d|) from the exact phase difference of two exact prime values.
std::optional<double> exact_term(const MultiplicativeFunction& f, const MultiplicativeFunction& g, std::uint64_t p) {
  auto a = f.exact_at_prime_power(p, 1);
  auto b = g.exact_at_prime_power(p, 1);
  if (!a || !b) return std::nullopt;
  if (a->zero || b->zero) return 1.0;
  const long double ya = a->ypow == 0 ? 0.0L : static_cast<long double>(a->ypow) * f.spec().y_turns;
  const long double yb = b->ypow == 0 ? 0.0L : static_cast<long double>(b->ypow) * g.spec().y_turns;
  const std::int64_t oa = f.root_order(), ob = g.root_order();
  const std::int64_t den = oa / std::gcd(oa, ob) * ob;
  std::int64_t num = mod_floor(a->root * (den / oa) - b->root * (den / ob), den);
  if (2 * num > den) num -= den;
  if (ya == yb) {
    if (num == 0) return 0.0;
    if (2 * num == den || 2 * num == -den) return 2.0;
    const long double d = std::abs(static_cast<long double>(num) / static_cast<long double>(den));
    return static_cast<double>(1.0L - std::cos(2.0L * std::numbers::pi_v<long double> * d));
  }
  long double d = static_cast<long double>(num) / static_cast<long double>(den) + (ya - yb);
  d -= std::round(d);
  return static_cast<double>(1.0L - std::cos(2.0L * std::numbers::pi_v<long double> * std::abs(d)));
}

std::vector<std::uint64_t> cutoff_grid(std::uint64_t P) {
  auto g = geometric_grid(std::min<std::uint64_t>(10, P), P, 2);
  return g;
}

}  // namespace

std::pair<std::uint64_t, std::uint64_t> distance_window(std::uint64_t P, double t) {
  double lo = static_cast<double>(P) / 100.0;
  if (t != 0.0) lo = std::min(lo, static_cast<double>(P) * std::exp(-kTwoPi / std::abs(t)));
  auto l = static_cast<std::uint64_t>(std::max(2.0, std::floor(lo)));
  if (l >= P) l = P > 2 ? P - 1 : 1;
  return {l, P};
}

DistanceProfile pretentious_distance(const MultiplicativeFunction& f, const MultiplicativeFunction& g,
                                     std::uint64_t P, double t) {
  if (P < 2) throw_input("prime cutoff P must be >= 2");
  DistanceProfile prof;
  prof.f_name = f.label();
  prof.g_name = g.label();
  prof.t = t;
  prof.P_grid = cutoff_grid(P);
  const auto ps = prime_set(P);
  const auto [lo, hi] = distance_window(P, t);
  const bool exact = t == 0.0 && f.has_exact() && g.has_exact();

  double sum = 0.0, win_re = 0.0, win_im = 0.0, mertens = 0.0;
  std::size_t next_cut = 0;
  for (std::size_t i = 0; i < ps.p.size(); ++i) {
    const std::uint64_t p = ps.p[i];
    while (next_cut < prof.P_grid.size() && prof.P_grid[next_cut] < p) {
      prof.partial.push_back(sum);
      ++next_cut;
    }
    const cplx a = f.at_prime_power(p, 1), b = g.at_prime_power(p, 1);
    // Re and Im of a * conj(b * p^{it}), written out so swapping f and g is bitwise symmetric.
    double re = a.real() * b.real() + a.imag() * b.imag();
    double im = a.imag() * b.real() - a.real() * b.imag();
    if (t != 0.0) {
      const double c = std::cos(t * ps.logp[i]), s = std::sin(t * ps.logp[i]);
      const double r2 = re * c + im * s, i2 = im * c - re * s;
      re = r2;
      im = i2;
    }
    double term = 1.0 - re;
    if (exact)
      if (auto e = exact_term(f, g, p)) term = *e;
    sum += term * ps.inv[i];
    if (p > lo && p <= hi) {
      win_re += term * ps.inv[i];
      win_im += im * ps.inv[i];
      mertens += ps.inv[i];
    }
  }
  while (prof.partial.size() < prof.P_grid.size()) prof.partial.push_back(sum);
  prof.window = judge(lo, hi, win_re, win_im, mertens);
  return prof;
}

EulerProduct euler_product_mean(const MultiplicativeFunction& f, std::uint64_t P) {
  if (P < 2) throw_input("prime cutoff P must be >= 2");
  EulerProduct e;
  e.P_grid = cutoff_grid(P);
  const auto ps = prime_set(P);
  cplx prod(1.0, 0.0), at_decade(1.0, 0.0);
  const std::uint64_t decade = P / 10;
  std::size_t next_cut = 0;
  for (std::uint64_t p : ps.p) {
    while (next_cut < e.P_grid.size() && e.P_grid[next_cut] < p) {
      e.partial.push_back(prod);
      ++next_cut;
    }
    const double pd = static_cast<double>(p);
    if (f.completely_multiplicative()) {
      prod *= (1.0 - 1.0 / pd) / (1.0 - f.at_prime_power(p, 1) / pd);
    } else {
      // Tail sum_{m > M} p^-m = p^-M / (p - 1) below 1e-15.
      cplx inner(1.0, 0.0);
      double w = 1.0;
      for (unsigned m = 1;; ++m) {
        w /= pd;
        inner += w * f.at_prime_power(p, m);
        if (w / (pd - 1.0) < 1e-15 || m >= 64) break;
      }
      prod *= (1.0 - 1.0 / pd) * inner;
    }
    if (p <= decade) at_decade = prod;
  }
  while (e.partial.size() < e.P_grid.size()) e.partial.push_back(prod);
  if (decade >= 2) {
    const double scale = std::max(std::abs(prod), 1e-12);
    e.unsettled = std::abs(prod - at_decade) / scale > 1e-3;
  }
  return e;
}

ApMean ap_mean(const SieveTable& table, std::uint64_t q, std::uint64_t r, std::uint64_t N, bool with_decomposition) {
  if (q == 0) throw_input("modulus q must be >= 1");
  if (r >= q) throw_input("residue r must satisfy 0 <= r < q");
  if (N < q) throw_input("need N >= q");
  ApMean out;
  out.q = q;
  out.r = r;
  out.N = N;
  out.terms = N / q;
  const std::uint64_t last = q * out.terms + r;
  if (table.size() < last) throw_input("sieve table too short for the progression");
  const double K = static_cast<double>(out.terms);

  ComplexAccumulator direct;
  for (std::uint64_t n = 1; n <= out.terms; ++n) direct.add(table[q * n + r]);
  out.direct = direct.value() / K;

  if (with_decomposition && std::gcd(q, r) == 1) {
    ComplexAccumulator total;
    for (const auto& term : indicator_decomposition(q, r)) {
      ComplexAccumulator s;
      for (std::uint64_t m = q + r; m <= last; ++m) {
        const cplx c = term.chi(m);
        if (c != cplx(0.0, 0.0)) s.add(table[m] * c);
      }
      total.add(term.coefficient * s.value());
    }
    out.decomposition = total.value() / K;
  }
  return out;
}

ApMean ap_mean(const MultiplicativeFunction& f, std::uint64_t q, std::uint64_t r, std::uint64_t N) {
  if (q == 0) throw_input("modulus q must be >= 1");
  if (r >= q) throw_input("residue r must satisfy 0 <= r < q");
  if (N < q) throw_input("need N >= q");
  return ap_mean(sieve_range(f, N + q), q, r, N);
}

std::vector<double> TGrid::values() const {
  if (count == 0) throw_input("t grid needs at least one point");
  if (count == 1) return {lo};
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i)
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return v;
}

TGrid TGrid::parse(const std::string& text) {
  std::istringstream in(text);
  std::string a, b, c;
  if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, c))
    throw_input("t grid must be lo:hi:count, got '" + text + "'");
  TGrid g;
  try {
    std::size_t used = 0;
    g.lo = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(a);
    g.hi = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(b);
  } catch (const std::exception&) {
    throw_input("t grid bounds must be numbers, got '" + text + "'");
  }
  g.count = parse_u64(c);
  if (!(g.lo <= g.hi) || g.count == 0) throw_input("t grid needs lo <= hi and count >= 1");
  return g;
}

namespace {

struct TwistScan {
  double t;
  double distance;
  WindowTest window;
};

TwistScan twisted_against_one(const std::vector<cplx>& fp, const PrimeSet& ps, std::uint64_t P, double t) {
  const auto [lo, hi] = distance_window(P, t);
  double sum = 0.0, wr = 0.0, wi = 0.0, m = 0.0;
  for (std::size_t i = 0; i < fp.size(); ++i) {
    const double c = std::cos(t * ps.logp[i]), s = std::sin(t * ps.logp[i]);
    const double re = fp[i].real() * c + fp[i].imag() * s;
    const double im = fp[i].imag() * c - fp[i].real() * s;
    const double term = (1.0 - re) * ps.inv[i];
    sum += term;
    if (ps.p[i] > lo && ps.p[i] <= hi) {
      wr += term;
      wi += im * ps.inv[i];
      m += ps.inv[i];
    }
  }
  return {t, sum, judge(lo, hi, wr, wi, m)};
}

}  // namespace

MeanValueReport halasz_classify(const MultiplicativeFunction& f, std::uint64_t P, const TGrid& t_grid, std::uint64_t N) {
  if (P < 2) throw_input("prime cutoff P must be >= 2");
  if (N < 1) throw_input("N must be >= 1");
  MeanValueReport rep;
  rep.f_name = f.label();
  rep.P = P;
  rep.N = N;

  {
    auto table = sieve_range(f, N);
    ComplexAccumulator acc;
    std::uint64_t done = 0;
    for (auto cut : geometric_grid(std::min<std::uint64_t>(10, N), N, 1)) {
      for (; done < cut; ++done) acc.add(table[done + 1]);
      rep.empirical.emplace_back(cut, acc.value() / static_cast<double>(cut));
    }
  }

  const auto ps = prime_set(P);
  const auto fp = at_primes(f, ps);
  std::vector<cplx> two_powers(21);
  for (unsigned k = 1; k <= 20; ++k) {
    two_powers[k] = f.at_prime_power(2, k);
    if (!rep.witness_k && std::abs(two_powers[k] + 1.0) > 1e-9) rep.witness_k = k;
  }
  rep.untwisted = pretentious_distance(f, constant_one(), P, 0.0).window;

  if (rep.witness_k && rep.untwisted.complex_plateau) {
    rep.halasz_case = "case_i";
    auto e = euler_product_mean(f, P);
    for (std::size_t i = 0; i < e.P_grid.size(); ++i) rep.euler.emplace_back(e.P_grid[i], e.partial[i]);
    rep.euler_unsettled = e.unsettled;
    return rep;
  }

  auto coarse = t_grid.values();
  std::vector<TwistScan> scans(coarse.size());
  parallel_for(coarse.size(), [&](std::size_t i) { scans[i] = twisted_against_one(fp, ps, P, coarse[i]); });
  auto better = [](const TwistScan& a, const TwistScan& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.t < b.t);
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < scans.size(); ++i)
    if (better(scans[i], scans[best])) best = i;

  double step = t_grid.count > 1 ? (t_grid.hi - t_grid.lo) / static_cast<double>(t_grid.count - 1) : 0.0;
  double fine = step;
  if (step > 0.0) {
    const double centre = scans[best].t;
    fine = step / 10.0;
    std::vector<TwistScan> refined(21);
    parallel_for(21, [&](std::size_t i) {
      const double t = i == 10 ? centre : centre + fine * (static_cast<double>(i) - 10.0);
      refined[i] = twisted_against_one(fp, ps, P, t);
    });
    TwistScan winner = scans[best];
    for (const auto& r : refined)
      if (better(r, winner)) winner = r;
    scans.insert(scans.end(), refined.begin(), refined.end());
    best = 0;
    for (std::size_t i = 1; i < scans.size(); ++i)
      if (better(scans[i], scans[best])) best = i;
  }
  rep.best_t = scans[best].t;
  rep.best_t_distance = scans[best].distance;
  rep.best_t_window = scans[best].window;
  rep.every_t_diverges = std::all_of(scans.begin(), scans.end(),
                                     [](const TwistScan& s) { return s.window.trend == Trend::diverging; });

  if (rep.best_t_window.trend == Trend::plateau) {
    rep.two_adic_match = true;
    for (unsigned k = 1; k <= 20; ++k) {
      const cplx target = -std::polar(1.0, rep.best_t * k * std::numbers::ln2);
      const double tol = 1e-6 + k * std::numbers::ln2 * fine;
      if (std::abs(two_powers[k] - target) > tol) rep.two_adic_match = false;
    }
    rep.halasz_case = rep.two_adic_match ? "case_iii" : "inconclusive";
  } else {
    rep.halasz_case = rep.every_t_diverges ? "case_iv" : "inconclusive";
  }
  return rep;
}

namespace {

struct CharacterScanInput {
  const PrimeSet* ps;
  const std::vector<cplx>* fp;
  std::uint64_t P;
};

// D^2(f, chi n^{it}; P) and its window for every character of modulus <= Q_max, in
// (modulus, index) order.
std::vector<CharacterHit> scan_characters(const CharacterScanInput& in, std::uint64_t Q_max, double t,
                                          const std::vector<std::vector<DirichletCharacter>>& chars) {
  const auto& ps = *in.ps;
  const auto [lo, hi] = distance_window(in.P, t);
  std::vector<cplx> w(ps.p.size());
  double S = 0.0, M = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    cplx v = (*in.fp)[i];
    if (t != 0.0) v *= std::polar(1.0, -t * ps.logp[i]);
    w[i] = v * ps.inv[i];
    S += ps.inv[i];
    if (ps.p[i] > lo && ps.p[i] <= hi) M += ps.inv[i];
  }
  std::vector<CharacterHit> out;
  for (std::uint64_t q = 1; q <= Q_max; ++q) {
    std::vector<cplx> A(q, cplx(0.0, 0.0)), W(q, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < w.size(); ++i) {
      const std::uint64_t r = ps.p[i] % q;
      A[r] += w[i];
      if (ps.p[i] > lo && ps.p[i] <= hi) W[r] += w[i];
    }
    for (const auto& chi : chars[q]) {
      cplx a(0.0, 0.0), b(0.0, 0.0);
      for (std::uint64_t r = 0; r < q; ++r) {
        if (chi.exponent[r] < 0) continue;
        const cplx c = std::conj(chi.table[r]);
        a += A[r] * c;
        b += W[r] * c;
      }
      CharacterHit h;
      h.modulus = q;
      h.index = chi.index;
      h.t = t;
      h.distance = S - a.real();
      h.window = judge(lo, hi, M - b.real(), b.imag(), M);
      out.push_back(h);
    }
  }
  return out;
}

std::vector<std::vector<DirichletCharacter>> character_table(std::uint64_t Q_max) {
  std::vector<std::vector<DirichletCharacter>> chars(Q_max + 1);
  for (std::uint64_t q = 1; q <= Q_max; ++q) chars[q] = characters_mod(q);
  return chars;
}

void refine_hit(const MultiplicativeFunction& f, std::uint64_t P, CharacterHit& h) {
  auto chi = dirichlet_character_function(character_mod(h.modulus, h.index));
  auto prof = pretentious_distance(f, chi, P, h.t);
  h.distance = prof.value();
  h.window = prof.window;
}

}  // namespace

std::optional<CharacterHit> first_pretended_character(const MultiplicativeFunction& f, std::uint64_t Q_max,
                                                      std::uint64_t P) {
  if (Q_max == 0 || Q_max > 1000) throw_input("character search needs 1 <= Q_max <= 1000");
  if (P < 2) throw_input("prime cutoff P must be >= 2");
  const auto ps = prime_set(P);
  const auto fp = at_primes(f, ps);
  const auto chars = character_table(Q_max);
  for (auto& h : scan_characters({&ps, &fp, P}, Q_max, 0.0, chars)) {
    if (!h.window.complex_plateau) continue;
    refine_hit(f, P, h);
    if (h.window.complex_plateau) return h;
  }
  return std::nullopt;
}

AperiodicityVerdict aperiodicity_test(const MultiplicativeFunction& f, std::uint64_t Q_max, const TGrid& t_grid,
                                      std::uint64_t P, std::uint64_t N) {
  if (Q_max == 0 || Q_max > 100) throw_input("aperiodicity search needs 1 <= Q_max <= 100");
  if (P < 2) throw_input("prime cutoff P must be >= 2");
  const auto ps = prime_set(P);
  const auto fp = at_primes(f, ps);
  const auto chars = character_table(Q_max);
  const auto ts = t_grid.values();

  std::vector<std::vector<CharacterHit>> per_t(ts.size());
  parallel_for(ts.size(), [&](std::size_t i) { per_t[i] = scan_characters({&ps, &fp, P}, Q_max, ts[i], chars); });

  AperiodicityVerdict v;
  // Distances within 1e-9 count as ties, resolved by modulus, then index, then t.
  auto before = [](const CharacterHit& a, const CharacterHit& b) {
    if (std::abs(a.distance - b.distance) > 1e-9) return a.distance < b.distance;
    if (a.modulus != b.modulus) return a.modulus < b.modulus;
    if (a.index != b.index) return a.index < b.index;
    return a.t < b.t;
  };
  std::optional<CharacterHit> hit;
  bool have_closest = false;
  for (const auto& hits : per_t)
    for (const auto& h : hits) {
      ++v.candidates;
      if (h.window.trend == Trend::diverging) ++v.diverging;
      if (!have_closest || before(h, v.closest)) {
        v.closest = h;
        have_closest = true;
      }
      if (h.window.trend == Trend::plateau && (!hit || before(h, *hit))) hit = h;
    }
  refine_hit(f, P, v.closest);
  if (hit) {
    refine_hit(f, P, *hit);
    v.verdict = "periodic_structure";
    v.hit = hit;
  } else if (v.diverging == v.candidates) {
    v.verdict = "aperiodic_evidence";
  } else {
    v.verdict = "inconclusive";
  }

  v.ap_N = N;
  auto table = sieve_range(f, N + 10);
  for (std::uint64_t q = 1; q <= std::min<std::uint64_t>(10, N); ++q)
    for (std::uint64_t r = 0; r < q; ++r)
      v.max_ap_mean = std::max(v.max_ap_mean, std::abs(ap_mean(table, q, r, N, false).direct));
  return v;
}

RapVerdict rap_test(const MultiplicativeFunction& f, std::uint64_t Q_max, std::uint64_t P, std::uint64_t N) {
  if (P < 2) throw_input("prime cutoff P must be >= 2");
  RapVerdict v;
  v.N = N;
  auto modulus = f.modulus_function();
  v.modulus_window = pretentious_distance(modulus, constant_one(), P, 0.0).window;
  {
    auto table = sieve_range(modulus, N);
    Accumulator acc;
    for (auto x : table.values()) acc.add(x.real());
    v.besicovitch = acc.value() / static_cast<double>(N);
  }
  if (v.modulus_window.trend == Trend::diverging) {
    v.verdict = "rap_trivial";
    return v;
  }
  v.chi = first_pretended_character(f, Q_max, P);
  v.verdict = v.chi ? "rap_pretends" : "not_besicovitch";
  return v;
}

}  // namespace multfun
