#include "multfun/levelsets.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <tuple>

#include "multfun/error.hpp"
#include "multfun/seminorms.hpp"

namespace multfun {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

Target from_complex(cplx z, std::optional<double> tol, std::string text) {
  Target t;
  t.tol = tol;
  t.text = std::move(text);
  if (z.imag() == 0.0 && (z.real() == 0.0 || z.real() == 1.0 || z.real() == -1.0)) {
    if (z.real() == 0.0) {
      t.kind = Target::Kind::zero;
    } else {
      t.kind = Target::Kind::root;
      t.root = z.real() == 1.0 ? Rational(0, 1) : Rational(1, 2);
    }
    return t;
  }
  t.kind = Target::Kind::value;
  t.value = z;
  return t;
}

}  // namespace

Target Target::parse(const std::string& raw, std::optional<double> tol) {
  const std::string text = trim(raw);
  if (text.empty()) throw_input("empty level-set target");
  if (tol && !(*tol >= 0.0)) throw_input("tolerance must be nonnegative");
  if (text == "i" || text == "-i") {
    Target t = unit_root(Rational(text == "i" ? 1 : 3, 4));
    t.tol = tol;
    t.text = text;
    return t;
  }
  if (auto comma = text.find(','); comma != std::string::npos) {
    auto re = parse_double(trim(text.substr(0, comma)));
    auto im = parse_double(trim(text.substr(comma + 1)));
    if (!re || !im) throw_input("target '" + text + "' is not of the form re,im");
    return from_complex({*re, *im}, tol, text);
  }
  if (text.find('/') != std::string::npos) {
    Target t = unit_root(Rational::parse(text));
    t.tol = tol;
    t.text = text;
    return t;
  }
  auto v = parse_double(text);
  if (!v) throw_input("cannot parse level-set target '" + text + "'");
  return from_complex({*v, 0.0}, tol, text);
}

Target Target::zero() {
  Target t;
  t.text = "0";
  return t;
}

Target Target::unit_root(Rational r) {
  Target t;
  t.kind = Kind::root;
  t.root = r.mod1();
  t.text = t.root.num == 0 ? "1" : t.root.str();
  return t;
}

cplx Target::complex_value() const {
  switch (kind) {
    case Kind::zero: return {0.0, 0.0};
    case Kind::root: return unit_fraction(root.num, root.den);
    case Kind::value: return value;
  }
  return {};
}

Target Target::power(unsigned k) const {
  Target t = *this;
  t.text = "(" + text + ")^" + std::to_string(k);
  if (kind == Kind::root) t.root = Rational(root.num * static_cast<std::int64_t>(k), root.den).mod1();
  if (kind == Kind::value) {
    t.value = std::pow(value, static_cast<int>(k));
    if (tol) t.tol = *tol * k * std::pow(std::max(1.0, std::abs(value)), k);
  }
  return t;
}

bool LevelSet::contains(std::uint64_t n) const { return std::binary_search(members.begin(), members.end(), n); }

LevelSet level_set(const SieveTable& table, const MultiplicativeFunction& f, const Target& z) {
  LevelSet E;
  E.source = f.label();
  E.function = std::make_shared<const MultiplicativeFunction>(f);
  E.target = z;
  E.N = table.size();
  const std::uint64_t N = table.size();

  auto float_path = [&] {
    if (!z.tol) throw_input("target '" + z.text + "' needs an explicit tolerance (--tol) on the float path");
    const cplx w = z.complex_value();
    for (std::uint64_t n = 1; n <= N; ++n)
      if (std::abs(table[n] - w) <= *z.tol) E.members.push_back(n);
  };

  switch (z.kind) {
    case Target::Kind::zero:
      // Zeros come from zero factors and are exact in either representation.
      E.exact = true;
      for (std::uint64_t n = 1; n <= N; ++n)
        if (table.has_exact() ? table.exact_root(n) < 0 : table[n] == cplx(0.0, 0.0)) E.members.push_back(n);
      break;
    case Target::Kind::root:
      if (table.has_exact()) {
        E.exact = true;
        const std::int64_t order = table.root_order();
        if (order % z.root.den != 0) break;  // not an order-th root of unity
        const auto want = static_cast<std::int32_t>(z.root.num * (order / z.root.den));
        for (std::uint64_t n = 1; n <= N; ++n)
          if (table.exact_root(n) == want && table.exact_ypow(n) == 0) E.members.push_back(n);
      } else {
        float_path();
      }
      break;
    case Target::Kind::value:
      if (table.has_exact() && !z.tol) {
        // Exact values are 0 or on the unit circle.
        if (std::abs(z.value) != 1.0) {
          E.exact = true;
          break;
        }
        throw_input("target '" + z.text + "' is not an exact root of unity; pass a/b or a tolerance");
      }
      float_path();
      break;
  }
  return E;
}

LevelSet level_set(const MultiplicativeFunction& f, const Target& z, std::uint64_t N) {
  return level_set(sieve_range(f, N), f, z);
}

void write_bitmap(const LevelSet& E, std::ostream& out) {
  std::vector<unsigned char> bytes((E.N + 7) / 8, 0);
  for (auto n : E.members) bytes[(n - 1) / 8] |= static_cast<unsigned char>(1U << ((n - 1) % 8));
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void write_text(const LevelSet& E, std::ostream& out) {
  for (auto n : E.members) out << n << '\n';
}

DensityProfile density_profile(const LevelSet& E, std::uint64_t q_max) {
  if (E.N == 0) throw_input("level set has no truncation");
  if (q_max == 0) throw_input("q_max must be >= 1");
  DensityProfile d;
  d.N = E.N;
  d.count = E.members.size();
  d.density = E.density();
  d.q_max = q_max;
  const double N = static_cast<double>(E.N);
  for (std::uint64_t q = 1; q <= q_max; ++q) {
    std::vector<std::uint64_t> count(q, 0);
    for (auto n : E.members) ++count[n % q];
    for (std::uint64_t r = 0; r < q; ++r) {
      const std::uint64_t size = r == 0 ? E.N / q : (r <= E.N ? (E.N - r) / q + 1 : 0);
      DensityCell c{q, r, count[r], static_cast<double>(count[r]) / N,
                    size == 0 ? 0.0 : static_cast<double>(count[r]) / static_cast<double>(size)};
      if (count[r] == 0) d.empty_cells.emplace_back(q, r);
      d.cells.push_back(c);
    }
  }
  return d;
}

std::vector<Rational> ConcentrationAnalysis::group() const {
  std::vector<Rational> g;
  if (unbounded) return g;
  for (std::uint64_t j = 0; j < group_order; ++j) g.push_back(Rational(static_cast<std::int64_t>(j),
                                                                        static_cast<std::int64_t>(group_order)));
  return g;
}

namespace {

struct Bucket {
  cplx z;
  std::optional<ExactValue> exact;
  double mass = 0.0;
  double window_mass = 0.0;
  double upper_mass = 0.0;  // over (P/100, P]
};

// Multiplicative order of a unit-modulus float, or 0 when none up to k_max.
std::uint64_t float_order(cplx z, std::uint64_t k_max) {
  if (std::abs(std::abs(z) - 1.0) > 1e-9) return 0;
  cplx w(1.0, 0.0);
  for (std::uint64_t n = 1; n <= k_max; ++n) {
    w *= z;
    if (std::abs(w - 1.0) < 1e-8) return n;
  }
  return 0;
}

}  // namespace

ConcentrationAnalysis concentration_analysis(const MultiplicativeFunction& f, std::uint64_t P, std::uint64_t k_max) {
  if (P < 1000) throw_input("concentration analysis needs P >= 1000");
  if (k_max == 0) throw_input("k_max must be >= 1");
  ConcentrationAnalysis a;
  a.source = f.label();
  a.P = P;
  a.k_max = k_max;
  a.point_band = 0.8 * (std::log(std::log(static_cast<double>(P))) - std::log(std::log(100.0)));
  const std::uint64_t upper_lo = std::max<std::uint64_t>(2, P / 100);

  const auto primes = primes_up_to(P);
  std::vector<Bucket> buckets;
  if (f.has_exact()) {
    std::map<std::tuple<bool, std::int64_t, std::int64_t>, std::size_t> index;
    for (auto p : primes) {
      auto e = *f.exact_at_prime_power(p, 1);
      auto key = std::make_tuple(e.zero, e.zero ? 0 : e.root, e.zero ? 0 : e.ypow);
      auto [it, fresh] = index.emplace(key, buckets.size());
      if (fresh) buckets.push_back({f.to_complex(e), e});
      Bucket& b = buckets[it->second];
      const double w = 1.0 / static_cast<double>(p);
      b.mass += w;
      if (p > 100) b.window_mass += w;
      if (p > upper_lo) b.upper_mass += w;
    }
  } else {
    std::vector<std::pair<cplx, std::uint64_t>> vals;
    for (auto p : primes) vals.emplace_back(f.at_prime_power(p, 1), p);
    std::sort(vals.begin(), vals.end(), [](const auto& x, const auto& y) {
      return x.first.real() < y.first.real() || (x.first.real() == y.first.real() && x.first.imag() < y.first.imag());
    });
    for (const auto& [v, p] : vals) {
      // Clusters are created in increasing real part; scan back over the 1e-9 strip.
      std::size_t hit = buckets.size();
      for (std::size_t i = buckets.size(); i-- > 0 && buckets[i].z.real() >= v.real() - 1e-9;)
        if (std::abs(buckets[i].z - v) <= 1e-9) {
          hit = i;
          break;
        }
      if (hit == buckets.size()) buckets.push_back({v, std::nullopt});
      Bucket& b = buckets[hit];
      const double w = 1.0 / static_cast<double>(p);
      b.mass += w;
      if (p > 100) b.window_mass += w;
      if (p > upper_lo) b.upper_mass += w;
    }
  }
  a.buckets = buckets.size();

  std::vector<const Bucket*> chosen;
  for (const auto& b : buckets) {
    const bool zero = b.exact ? b.exact->zero : b.z == cplx(0.0, 0.0);
    if (zero || b.window_mass < a.floor_band) continue;
    ConcentrationPoint cp;
    cp.z = b.z;
    if (b.exact && b.exact->ypow == 0) cp.root = Rational(b.exact->root, f.root_order());
    cp.mass = b.mass;
    cp.window_mass = b.window_mass;
    if (b.window_mass >= a.point_band) {
      cp.status = "point";
      a.points.push_back(cp);
      chosen.push_back(&b);
    } else {
      cp.status = "inconclusive";
      a.undecided.push_back(cp);
    }
  }

  std::uint64_t L = 1;
  for (const Bucket* b : chosen) {
    std::uint64_t ord = 0;
    if (b->exact) {
      if (b->exact->ypow == 0) {
        const auto order = static_cast<std::uint64_t>(f.root_order());
        ord = order / std::gcd(order, static_cast<std::uint64_t>(b->exact->root));
      }
    } else {
      ord = float_order(b->z, k_max);
    }
    if (ord == 0) {
      a.unbounded = true;
      break;
    }
    L = std::lcm(L, ord);
    if (L > k_max) {
      a.unbounded = true;
      break;
    }
  }
  if (!a.unbounded) a.group_order = L;

  auto in_group = [&](const Bucket& b) {
    if (a.unbounded || a.points.empty()) return false;
    if (b.exact) {
      if (b.exact->zero || b.exact->ypow != 0) return false;
      return (b.exact->root * static_cast<std::int64_t>(L)) % f.root_order() == 0;
    }
    return std::abs(std::abs(b.z) - 1.0) <= 1e-9 && std::abs(std::pow(b.z, static_cast<int>(L)) - 1.0) < 1e-8;
  };
  double tail_upper = 0.0, mertens_upper = 0.0;
  for (const auto& b : buckets) {
    mertens_upper += b.upper_mass;
    if (in_group(b)) continue;
    a.tail += b.mass;
    tail_upper += b.upper_mass;
  }
  a.tail_window.lo = upper_lo;
  a.tail_window.hi = P;
  a.tail_window.real_increment = tail_upper;
  a.tail_window.mertens = mertens_upper;
  a.tail_window.trend = tail_upper < kPlateauIncrement                 ? Trend::plateau
                        : tail_upper >= kDivergenceBand * mertens_upper ? Trend::diverging
                                                                        : Trend::inconclusive;
  a.tail_window.complex_plateau = a.tail_window.trend == Trend::plateau;

  if (a.points.empty())
    a.verdict = a.undecided.empty() ? "not_concentrated" : "inconclusive";
  else if (a.unbounded)
    a.verdict = "not_concentrated";
  else if (a.tail_window.trend == Trend::plateau)
    a.verdict = "concentrated";
  else
    a.verdict = a.tail_window.trend == Trend::diverging ? "not_concentrated" : "inconclusive";
  return a;
}

ZeroRepair zero_repair(const MultiplicativeFunction& f, const Target& z, std::uint64_t verify_N) {
  if (z.is_zero()) throw_input("zero repair needs z != 0; the z = 0 level set is handled by the rational path");
  if (verify_N == 0) throw_input("verification truncation must be >= 1");
  auto table = sieve_range(f, verify_N);
  ZeroRepair rep{f, false, 0.0, 0, verify_N, false, {}};

  std::vector<cplx> image;
  for (auto v : table.values()) {
    if (v == cplx(0.0, 0.0))
      rep.changed = true;
    else
      image.push_back(v);
  }
  auto E = level_set(table, f, z);
  if (E.members.empty())
    rep.warnings.push_back("E(f, z) is empty on [1, " + std::to_string(verify_N) + "]; its density estimate is 0");
  if (!rep.changed) {
    rep.verified = true;
    return rep;
  }

  // Observed image sorted by argument, for collision lookups of y^n * J against J.
  auto arg01 = [](cplx v) {
    double a = std::arg(v) / (2.0 * std::numbers::pi);
    return a < 0.0 ? a + 1.0 : a;
  };
  std::vector<std::pair<double, cplx>> J;
  for (auto v : image) J.emplace_back(arg01(v), v);
  std::sort(J.begin(), J.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  J.erase(std::unique(J.begin(), J.end(), [](const auto& x, const auto& y) { return std::abs(x.second - y.second) < 1e-12; }),
          J.end());
  auto collides = [&](double gamma) {
    for (unsigned n = 1; n <= 64; ++n) {
      const cplx yn = unit(static_cast<long double>(n) * gamma);
      for (const auto& [a, u] : J) {
        const cplx w = yn * u;
        const double aw = arg01(w);
        for (double shift : {-1.0, 0.0, 1.0}) {
          auto it = std::lower_bound(J.begin(), J.end(), aw + shift - 1e-9,
                                     [](const auto& x, double v) { return x.first < v; });
          for (; it != J.end() && it->first <= aw + shift + 1e-9; ++it)
            if (std::abs(it->second - w) < 1e-9) return true;
        }
      }
    }
    return false;
  };

  const long double phi = (1.0L + std::sqrt(5.0L)) / 2.0L;
  unsigned j = 1;
  long double gamma = 0.0L;
  for (;; ++j) {
    if (j > 1000) throw Error(ErrorKind::search, "no collision-free y found among 1000 golden-ratio candidates");
    gamma = static_cast<long double>(j) * phi;
    gamma -= std::floor(gamma);
    if (!collides(static_cast<double>(gamma))) break;
  }
  rep.candidate = j;
  rep.gamma = static_cast<double>(gamma);

  auto base = std::make_shared<MultiplicativeFunction>(f);
  PrimePowerSpec s;
  s.unbounded = f.spec().unbounded;
  const double y_turns = rep.gamma;
  if (f.has_exact() && f.spec().y_turns == 0.0) {
    s.root_order = f.root_order();
    s.y_turns = y_turns;
    s.exact_rule = [base](std::uint64_t p, unsigned k) {
      ExactValue v = *base->exact_at_prime_power(p, k);
      return v.zero ? ExactValue{false, 0, 1} : v;
    };
    s.rule = [base, y_turns](std::uint64_t p, unsigned k) {
      cplx v = base->at_prime_power(p, k);
      return v == cplx(0.0, 0.0) ? unit(static_cast<long double>(y_turns)) : v;
    };
  } else {
    s.rule = [base, y_turns](std::uint64_t p, unsigned k) {
      cplx v = base->at_prime_power(p, k);
      return v == cplx(0.0, 0.0) ? unit(static_cast<long double>(y_turns)) : v;
    };
  }
  rep.g = MultiplicativeFunction("repair(" + f.label() + ")", Params{}, std::move(s));

  auto Eg = level_set(rep.g, z, verify_N);
  rep.verified = Eg.members == E.members;
  if (!rep.verified)
    throw Error(ErrorKind::unreliable, "zero repair changed the level set on [1, " + std::to_string(verify_N) + "]");
  return rep;
}

KChiResult find_k_and_character(const MultiplicativeFunction& g, unsigned k_max, std::uint64_t Q_max,
                                std::uint64_t P, std::optional<std::uint64_t> group_order) {
  if (k_max == 0) throw_input("k_max must be >= 1");
  KChiResult r;
  for (unsigned k = 1; k <= k_max; ++k) {
    auto gk = k == 1 ? g : g.power(k);
    if (auto hit = first_pretended_character(gk, Q_max, P)) {
      r.found = true;
      r.k = k;
      r.modulus = hit->modulus;
      r.index = hit->index;
      r.distance = hit->distance;
      r.window = hit->window;
      return r;
    }
  }
  if (group_order && *group_order >= 1) {
    auto gk = g.power(static_cast<unsigned>(*group_order));
    auto prof = pretentious_distance(gk, constant_one(), P);
    r.found = true;
    r.fallback = true;
    r.k = static_cast<unsigned>(*group_order);
    r.distance = prof.value();
    r.window = prof.window;
    r.message = "no plateau within bounds; using the concentration-group order with the trivial character";
    return r;
  }
  r.message = "no (k, chi) with k <= " + std::to_string(k_max) + " and modulus <= " + std::to_string(Q_max) +
              " shows a plateauing distance at P = " + std::to_string(P);
  return r;
}

std::vector<cplx> relative_uniformity_function(const LevelSet& E, const LevelSet& R) {
  if (E.N != R.N) throw_input("E and R must share a truncation");
  const double dE = E.density(), dR = R.density();
  std::vector<cplx> u(E.N, cplx(0.0, 0.0));
  for (auto n : E.members) u[n - 1] += dR;
  for (auto n : R.members) u[n - 1] -= dE;
  return u;
}

StructurePair structure_pair(const MultiplicativeFunction& f, const Target& z, std::uint64_t N,
                             const StructureOptions& opt) {
  if (N < 1) throw_input("N must be >= 1");
  StructurePair sp;
  if (z.is_zero()) {
    sp.rational_case = true;
    sp.E = level_set(f, z, N);
    sp.R = sp.E;
    sp.kchi.message = "z = 0: the level set is already rational, R = E";
  } else {
    sp.repair = zero_repair(f, z, std::min(opt.verify_N, N));
    const auto& g = sp.repair->g;
    sp.concentration = concentration_analysis(g, std::max<std::uint64_t>(opt.P, 1000), opt.k_max);
    std::optional<std::uint64_t> order;
    if (!sp.concentration->unbounded && sp.concentration->group_order > 0) order = sp.concentration->group_order;
    sp.kchi = find_k_and_character(g, opt.k_max, opt.Q_max, opt.P, order);
    if (!sp.kchi.found) throw Error(ErrorKind::search, sp.kchi.message);
    auto gk = sp.kchi.k == 1 ? g : g.power(sp.kchi.k);
    sp.E = level_set(f, z, N);
    sp.R = level_set(gk, z.power(sp.kchi.k), N);
    sp.rap = rap_test(gk, opt.Q_max, opt.P, std::min(opt.rap_N, N));
  }
  sp.dE = sp.E.density();
  sp.dR = sp.R.density();
  sp.subset = std::includes(sp.R.members.begin(), sp.R.members.end(), sp.E.members.begin(), sp.E.members.end());

  auto u = relative_uniformity_function(sp.E, sp.R);
  double mean = 0.0;
  for (auto v : u) mean += v.real();
  sp.u_mean = mean / static_cast<double>(N);
  auto grid = opt.u_grid.empty() ? geometric_grid(std::min<std::uint64_t>(1000, N), N, 1) : opt.u_grid;
  for (auto n : grid) {
    if (n == 0 || n > N) throw_input("u grid points must lie in [1, N]");
    std::span<const cplx> prefix(u.data(), n);
    sp.u_norms.push_back({n, 2, gowers_fast(prefix, 2)});
    if (opt.with_u3 && n <= opt.u3_limit) sp.u_norms.push_back({n, 3, gowers_fast(prefix, 3)});
  }
  return sp;
}

namespace {

unsigned valuation(std::uint64_t n, std::uint64_t p) {
  unsigned v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

bool zero_at(const MultiplicativeFunction& f, std::uint64_t p, unsigned k) {
  if (f.has_exact()) return f.exact_at_prime_power(p, k)->zero;
  return f.at_prime_power(p, k) == cplx(0.0, 0.0);
}

std::optional<std::string> residue_obstruction(const LevelSet& E, std::uint64_t u, std::uint64_t r) {
  if (!E.function || E.target.is_zero()) return std::nullopt;
  const auto& f = *E.function;
  for (auto [p, e] : factorize(u)) {
    const std::string pe = std::to_string(p) + "^" + std::to_string(e);
    if (r == 0 || valuation(r, p) >= e) {
      // n = r + m with u | m forces p^e | n; f(n) = 0 if f vanishes at every p^j, j >= e.
      unsigned top = e;
      long double pj = std::pow(static_cast<long double>(p), static_cast<long double>(e));
      bool all_zero = pj < 9.2e18L;
      for (unsigned j = e; pj < 9.2e18L; ++j, pj *= p) {
        top = j;
        if (!zero_at(f, p, j)) {
          all_zero = false;
          break;
        }
      }
      if (all_zero)
        return pe + " divides u and r, so " + pe + " | n; f(" + std::to_string(p) + "^j) = 0 for " +
               std::to_string(e) + " <= j <= " + std::to_string(top) + " (every p^j < 2^63), hence f(n) = 0 != z";
    } else {
      const unsigned v = valuation(r, p);
      if (v > 0 && zero_at(f, p, v))
        return "n = r mod " + pe + " forces v_" + std::to_string(p) + "(n) = " + std::to_string(v) + " and f(" +
               std::to_string(p) + "^" + std::to_string(v) + ") = 0, hence f(n) = 0 != z";
    }
  }
  return std::nullopt;
}

}  // namespace

DivisibilityReport divisibility_report(const LevelSet& E, std::uint64_t r, std::uint64_t u_max) {
  if (u_max == 0) throw_input("u_max must be >= 1");
  if (2 * r >= E.N) throw_input("shift r must be below N/2");
  DivisibilityReport rep;
  rep.E_name = E.source + " = " + E.target.text;
  rep.r = r;
  rep.N = E.N;
  const double span = static_cast<double>(E.N - r);
  bool all_dense = true;
  for (std::uint64_t u = 1; u <= u_max; ++u) {
    DivisibilityRow row{u, 0, 0.0, std::nullopt};
    for (auto n : E.members)
      if (n > r && (n - r) % u == 0) ++row.count;
    row.density = static_cast<double>(row.count) / span;
    row.obstruction = residue_obstruction(E, u, r);
    if (row.obstruction && row.count != 0)
      throw Error(ErrorKind::unreliable, "residue obstruction contradicted by a member at u = " + std::to_string(u));
    if (row.obstruction && !rep.witness) rep.witness = u;
    all_dense = all_dense && row.density >= rep.density_floor;
    rep.rows.push_back(std::move(row));
  }
  rep.verdict = rep.witness ? "not_divisible" : all_dense ? "divisible_evidence" : "inconclusive";
  return rep;
}

std::vector<std::uint64_t> sp_set(const std::function<bool(std::uint64_t)>& allowed, std::uint64_t N) {
  if (N == 0) return {};
  auto spf = smallest_prime_factors(N);
  std::vector<char> ok(N + 1, 0);
  for (std::uint64_t p = 2; p <= N; ++p)
    if (spf[p] == p) ok[p] = allowed(p) ? 1 : 0;
  std::vector<std::uint64_t> out{1};
  for (std::uint64_t n = 2; n <= N; ++n) {
    std::uint64_t m = n;
    bool good = true;
    while (m > 1 && good) {
      const std::uint64_t p = spf[m];
      m /= p;
      good = ok[p] && m % p != 0;
    }
    if (good) out.push_back(n);
  }
  return out;
}

std::vector<std::uint64_t> sp_set(const std::vector<std::uint64_t>& primes, std::uint64_t N) {
  std::vector<std::uint64_t> sorted(primes);
  std::sort(sorted.begin(), sorted.end());
  for (auto p : sorted)
    if (!is_prime(p)) throw_input(std::to_string(p) + " is not prime");
  return sp_set([&](std::uint64_t p) { return std::binary_search(sorted.begin(), sorted.end(), p); }, N);
}

LevelSet random_relative_subset(const LevelSet& R, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw_input("probability must lie in [0, 1]");
  LevelSet E;
  E.source = "random_subset(" + R.source + ", p=" + std::to_string(p) + ", seed=" + std::to_string(seed) + ")";
  E.target = R.target;
  E.exact = R.exact;
  E.N = R.N;
  std::mt19937_64 gen(seed);
  const double scale = 1.0 / 9007199254740992.0;  // 2^-53
  for (auto n : R.members)
    if (static_cast<double>(gen() >> 11) * scale < p) E.members.push_back(n);
  return E;
}

const std::vector<std::string>& named_set_names() {
  static const std::vector<std::string> names = {"squarefree",   "liouville_plus", "liouville_minus",
                                                 "moebius_plus", "moebius_minus",  "naturals"};
  return names;
}

LevelSet named_set(const std::string& name, std::uint64_t N) {
  if (name == "squarefree") return level_set(builtin("mu_squared", {}), Target::unit_root(Rational(0, 1)), N);
  if (name == "liouville_plus") return level_set(builtin("liouville", {}), Target::unit_root(Rational(0, 1)), N);
  if (name == "liouville_minus") return level_set(builtin("liouville", {}), Target::unit_root(Rational(1, 2)), N);
  if (name == "moebius_plus") return level_set(builtin("moebius", {}), Target::unit_root(Rational(0, 1)), N);
  if (name == "moebius_minus") return level_set(builtin("moebius", {}), Target::unit_root(Rational(1, 2)), N);
  if (name == "naturals") return level_set(constant_one(), Target::unit_root(Rational(0, 1)), N);
  throw_input("unknown named set '" + name + "'");
}

}  // namespace multfun
