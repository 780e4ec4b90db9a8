#include "multfun/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "multfun/arith.hpp"
#include "multfun/error.hpp"
#include "multfun/parallel.hpp"

namespace multfun {

namespace {

constexpr std::uint64_t kMaxPoints = 100000000;
constexpr double kWorkBudget = 4e10;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ' && c != '\t') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::int64_t parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw_input("cannot parse " + what + " '" + s + "'");
  }
}

double parse_endpoint(const std::string& s) {
  if (s.find('/') != std::string::npos) return Rational::parse(s).value();
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw_input("cannot parse arc endpoint '" + s + "'");
  }
}

std::uint64_t reduce(std::int64_t a, std::uint64_t m) {
  const auto mm = static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(((a % mm) + mm) % mm);
}

double frac(long double x) {
  long double f = x - std::floor(x);
  return f >= 1.0L ? 0.0 : static_cast<double>(f);
}

// Points of A as coordinate tuples, plus strides for the mixed-radix index.
struct Layout {
  std::vector<std::uint64_t> stride;
  std::vector<std::vector<std::uint64_t>> points;
};

Layout layout(const FiniteSet& A) {
  Layout L;
  const auto& m = A.system.moduli;
  L.stride.assign(m.size(), 1);
  for (std::size_t i = m.size(); i-- > 1;) L.stride[i - 1] = L.stride[i] * m[i];
  for (std::uint64_t idx = 0; idx < A.member.size(); ++idx) {
    if (!A.member[idx]) continue;
    std::vector<std::uint64_t> x(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) x[i] = (idx / L.stride[i]) % m[i];
    L.points.push_back(std::move(x));
  }
  return L;
}

std::uint64_t count_with(const FiniteSet& A, const Layout& L, const std::vector<std::uint64_t>& shifts) {
  const auto& m = A.system.moduli;
  std::uint64_t count = 0;
  for (const auto& x : L.points) {
    bool in = true;
    for (std::size_t s = 0; s < shifts.size() && in; ++s) {
      std::uint64_t idx = 0;
      for (std::size_t i = 0; i < m.size(); ++i) idx += ((x[i] + shifts[s] % m[i]) % m[i]) * L.stride[i];
      in = A.member[idx] != 0;
    }
    count += in;
  }
  return count;
}

double intersect_arcs(const std::vector<ArcSet>& sets) {
  std::vector<std::pair<double, int>> events;
  for (const auto& s : sets)
    for (const auto& a : s.arcs) {
      events.emplace_back(a.lo, 1);
      events.emplace_back(a.hi, -1);
    }
  std::sort(events.begin(), events.end());
  const int need = static_cast<int>(sets.size());
  int depth = 0;
  double total = 0.0, start = 0.0;
  for (const auto& [x, d] : events) {
    if (depth == need) total += x - start;
    depth += d;
    start = x;
  }
  return total;
}

std::string system_label(const System& system) {
  std::ostringstream o;
  if (const auto* f = std::get_if<FiniteSystem>(&system)) {
    o << "cyclic(";
    for (std::size_t i = 0; i < f->moduli.size(); ++i) o << (i ? "x" : "") << f->moduli[i];
    o << ")";
  } else {
    const auto& t = std::get<TorusRotation>(system);
    o.precision(17);
    o << "torus(alpha=" << (t.alpha_tag.empty() ? "" : t.alpha_tag + "=") << t.alpha << ")";
  }
  return o.str();
}

std::string set_label(const SetA& A) {
  std::ostringstream o;
  if (const auto* f = std::get_if<FiniteSet>(&A)) {
    o << "{";
    auto L = layout(*f);
    for (std::size_t p = 0; p < L.points.size(); ++p) {
      o << (p ? ";" : "");
      for (std::size_t i = 0; i < L.points[p].size(); ++i) o << (i ? "," : "") << L.points[p][i];
    }
    o << "}";
  } else {
    o.precision(17);
    const auto& arcs = std::get<ArcSet>(A).arcs;
    for (std::size_t i = 0; i < arcs.size(); ++i) o << (i ? ";" : "") << "[" << arcs[i].lo << "," << arcs[i].hi << ")";
  }
  return o.str();
}

struct Values {
  std::vector<std::uint64_t> counts;  // finite indicator path
  std::vector<double> reals;          // torus or observable path
  std::uint64_t denominator = 0;
};

void finish(RecurrenceReport& rep, const Values& v, std::uint64_t used, std::optional<double> floor) {
  rep.used = used;
  const bool exact = !v.counts.empty();
  std::uint64_t num = 0;
  long double sum = 0.0L;
  auto grid = j_grid(used);
  std::size_t g = 0;
  for (std::uint64_t j = 0; j < used && g < grid.size(); ++j) {
    if (exact)
      num += v.counts[j];
    else
      sum += v.reals[j];
    if (j + 1 == grid[g]) {
      RunningPoint pt{grid[g], 0.0, std::nullopt, std::nullopt};
      if (exact) {
        pt.numerator = num;
        pt.denominator = grid[g] * v.denominator;
        pt.average = static_cast<double>(num) / static_cast<double>(*pt.denominator);
      } else {
        pt.average = static_cast<double>(sum / static_cast<long double>(grid[g]));
      }
      rep.running.push_back(pt);
      ++g;
    }
  }
  rep.tail_estimate = rep.running.back().average;
  rep.floor = floor.value_or(10.0 / static_cast<double>(rep.J_max));
  rep.all_zero = std::all_of(rep.running.begin(), rep.running.end(),
                             [](const RunningPoint& p) { return p.average == 0.0; });
  double lo = rep.tail_estimate, hi = rep.tail_estimate;
  for (const auto& p : rep.running)
    if (p.J * 10 >= used) {
      lo = std::min(lo, p.average);
      hi = std::max(hi, p.average);
    }
  rep.oscillation = hi - lo;
  if (rep.all_zero && exact)
    rep.positivity = "zero_evidence";
  else if (rep.tail_estimate >= rep.floor)
    rep.positivity = "positive_evidence";
  else
    rep.positivity = "inconclusive";
}

RecurrenceReport run(const char* kind, const System& system, const SetA& A, const PolynomialFamily& polys,
                     const std::vector<std::uint64_t>& E, std::uint64_t J_max, std::optional<double> floor,
                     const std::vector<double>& observable) {
  if (E.empty()) throw_input("index sequence is empty");
  if (J_max == 0) throw_input("J_max must be positive");
  if (std::holds_alternative<FiniteSystem>(system) != std::holds_alternative<FiniteSet>(A))
    throw_input("set type does not match the system");
  RecurrenceReport rep;
  rep.kind = kind;
  rep.system = system_label(system);
  rep.set = set_label(A);
  rep.polys = polys.str();
  rep.J_max = J_max;
  const std::uint64_t used = std::min<std::uint64_t>(J_max, E.size());
  rep.truncated = E.size() < J_max;

  Values v;
  constexpr std::size_t kBlock = 4096;
  const std::size_t blocks = (used + kBlock - 1) / kBlock;
  if (const auto* fs = std::get_if<FiniteSet>(&A)) {
    const std::uint64_t M = fs->system.size();
    v.denominator = M;
    if (observable.empty()) {
      auto L = layout(*fs);
      if (static_cast<double>(L.points.size()) * static_cast<double>(polys.size() + 1) * static_cast<double>(used) >
          kWorkBudget)
        throw_resource("recurrence average exceeds the work budget");
      v.counts.assign(used, 0);
      parallel_for(blocks, [&](std::size_t b) {
        std::vector<std::uint64_t> shifts(polys.size());
        for (std::size_t j = b * kBlock; j < std::min<std::size_t>(used, (b + 1) * kBlock); ++j) {
          for (std::size_t i = 0; i < polys.size(); ++i) shifts[i] = poly_mod(polys.polys[i], E[j], M);
          v.counts[j] = count_with(*fs, L, shifts);
        }
      });
    } else {
      if (observable.size() != M) throw_input("observable must have one value per point of the system");
      if (static_cast<double>(M) * static_cast<double>(polys.size() + 1) * static_cast<double>(used) > kWorkBudget)
        throw_resource("convergence average exceeds the work budget");
      FiniteSet all{fs->system, std::vector<char>(M, 1)};
      auto L = layout(all);
      v.reals.assign(used, 0.0);
      parallel_for(blocks, [&](std::size_t b) {
        std::vector<std::uint64_t> shifts(polys.size());
        for (std::size_t j = b * kBlock; j < std::min<std::size_t>(used, (b + 1) * kBlock); ++j) {
          for (std::size_t i = 0; i < polys.size(); ++i) shifts[i] = poly_mod(polys.polys[i], E[j], M);
          long double acc = 0.0L;
          for (std::uint64_t x = 0; x < M; ++x) {
            long double prod = observable[x];
            for (std::size_t s = 0; s < shifts.size() && prod != 0.0L; ++s) {
              std::uint64_t idx = 0;
              for (std::size_t i = 0; i < L.stride.size(); ++i)
                idx += ((L.points[x][i] + shifts[s] % fs->system.moduli[i]) % fs->system.moduli[i]) * L.stride[i];
              prod *= observable[idx];
            }
            acc += prod;
          }
          v.reals[j] = static_cast<double>(acc / static_cast<long double>(M));
        }
      });
    }
  } else {
    if (!observable.empty()) throw_input("unsupported: torus averages take indicator observables only");
    const auto& T = std::get<TorusRotation>(system);
    const auto& arcs = std::get<ArcSet>(A);
    v.reals.assign(used, 0.0);
    parallel_for(blocks, [&](std::size_t b) {
      std::vector<ArcSet> sets(polys.size() + 1);
      sets[0] = arcs;
      for (std::size_t j = b * kBlock; j < std::min<std::size_t>(used, (b + 1) * kBlock); ++j) {
        for (std::size_t i = 0; i < polys.size(); ++i) sets[i + 1] = translate(arcs, poly_frac(polys.polys[i], E[j], T.alpha));
        v.reals[j] = intersect_arcs(sets);
      }
    });
  }
  finish(rep, v, used, floor);
  return rep;
}

}  // namespace

std::uint64_t FiniteSystem::size() const {
  if (moduli.empty()) throw_input("finite system needs at least one factor");
  std::uint64_t n = 1;
  for (auto m : moduli) {
    if (m == 0) throw_input("cyclic factor must be positive");
    if (n > kMaxPoints / m) throw_resource("finite system exceeds 1e8 points");
    n *= m;
  }
  return n;
}

FiniteSystem FiniteSystem::parse(const std::string& text) {
  FiniteSystem s;
  for (const auto& part : split(text, 'x')) {
    auto v = parse_int(part, "cyclic factor");
    if (v <= 0) throw_input("cyclic factor must be positive");
    s.moduli.push_back(static_cast<std::uint64_t>(v));
  }
  s.size();
  return s;
}

std::uint64_t FiniteSet::count() const { return static_cast<std::uint64_t>(std::count(member.begin(), member.end(), 1)); }

double FiniteSet::measure() const { return static_cast<double>(count()) / static_cast<double>(member.size()); }

FiniteSet FiniteSet::from_points(const FiniteSystem& system, const std::vector<std::vector<std::int64_t>>& points) {
  FiniteSet A{system, std::vector<char>(system.size(), 0)};
  const auto& m = system.moduli;
  for (const auto& p : points) {
    if (p.size() != m.size()) throw_input("point has the wrong number of coordinates");
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < m.size(); ++i) idx = idx * m[i] + reduce(p[i], m[i]);
    A.member[idx] = 1;
  }
  return A;
}

FiniteSet FiniteSet::parse(const FiniteSystem& system, const std::string& text) {
  std::vector<std::vector<std::int64_t>> points;
  if (!text.empty())
    for (const auto& pt : split(text, ';')) {
      std::vector<std::int64_t> x;
      for (const auto& c : split(pt, ',')) x.push_back(parse_int(c, "point coordinate"));
      points.push_back(std::move(x));
    }
  return from_points(system, points);
}

FiniteSet preimage(const FiniteSet& A, std::int64_t a) {
  FiniteSet B{A.system, std::vector<char>(A.member.size(), 0)};
  auto L = layout(B);
  FiniteSet all{A.system, std::vector<char>(A.member.size(), 1)};
  auto full = layout(all);
  const auto& m = A.system.moduli;
  for (std::uint64_t x = 0; x < A.member.size(); ++x) {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < m.size(); ++i) idx += ((full.points[x][i] + reduce(a, m[i])) % m[i]) * L.stride[i];
    B.member[x] = A.member[idx];
  }
  return B;
}

double ArcSet::measure() const {
  double s = 0.0;
  for (const auto& a : arcs) s += a.hi - a.lo;
  return s;
}

bool ArcSet::contains(double x) const {
  for (const auto& a : arcs)
    if (a.lo <= x && x < a.hi) return true;
  return false;
}

ArcSet ArcSet::normalize(std::vector<Arc> raw) {
  std::vector<Arc> parts;
  for (const auto& a : raw) {
    if (!std::isfinite(a.lo) || !std::isfinite(a.hi) || a.lo < 0.0 || a.lo > 1.0 || a.hi < 0.0 || a.hi > 1.0)
      throw_input("arc endpoints must lie in [0, 1]");
    if (a.lo < a.hi) {
      parts.push_back(a);
    } else if (a.lo > a.hi) {
      if (a.lo < 1.0) parts.push_back({a.lo, 1.0});
      if (a.hi > 0.0) parts.push_back({0.0, a.hi});
    }
  }
  std::sort(parts.begin(), parts.end(), [](const Arc& x, const Arc& y) { return x.lo < y.lo; });
  ArcSet out;
  for (const auto& a : parts) {
    if (!out.arcs.empty() && a.lo <= out.arcs.back().hi)
      out.arcs.back().hi = std::max(out.arcs.back().hi, a.hi);
    else
      out.arcs.push_back(a);
  }
  return out;
}

ArcSet ArcSet::parse(const std::string& text) {
  std::vector<Arc> raw;
  for (const auto& part : split(text, ';')) {
    auto ends = split(part, ':');
    if (ends.size() != 2) throw_input("arc '" + part + "' is not of the form lo:hi");
    raw.push_back({parse_endpoint(ends[0]), parse_endpoint(ends[1])});
  }
  return normalize(raw);
}

ArcSet translate(const ArcSet& A, double t) {
  std::vector<Arc> raw;
  for (const auto& a : A.arcs) {
    const double len = a.hi - a.lo;
    if (len >= 1.0) return A;
    const double lo = frac(static_cast<long double>(a.lo) - t);
    const double hi = lo + len;
    if (hi <= 1.0) {
      raw.push_back({lo, hi});
    } else {
      raw.push_back({lo, 1.0});
      raw.push_back({0.0, std::min(1.0, hi - 1.0)});
    }
  }
  return ArcSet::normalize(raw);
}

PolynomialFamily PolynomialFamily::parse(const std::string& text) {
  PolynomialFamily fam;
  for (const auto& src : split(text, ';')) {
    if (src.empty()) throw_input("empty polynomial");
    std::vector<std::int64_t> c;
    std::size_t i = 0;
    while (i < src.size()) {
      int sign = 1;
      if (src[i] == '+' || src[i] == '-') {
        sign = src[i] == '-' ? -1 : 1;
        ++i;
      }
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      std::int64_t coef = j > i ? parse_int(src.substr(i, j - i), "coefficient") : 1;
      std::size_t deg = 0;
      if (j < src.size() && src[j] == '*') ++j;
      if (j < src.size() && src[j] == 'n') {
        deg = 1;
        ++j;
        if (j < src.size() && src[j] == '^') {
          std::size_t k = ++j;
          while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
          if (j == k) throw_input("missing exponent in '" + src + "'");
          deg = static_cast<std::size_t>(parse_int(src.substr(k, j - k), "exponent"));
          if (deg > 16) throw_input("polynomial degree above 16");
        }
      } else if (j == i) {
        throw_input("cannot parse polynomial '" + src + "'");
      }
      if (j < src.size() && src[j] != '+' && src[j] != '-') throw_input("cannot parse polynomial '" + src + "'");
      if (c.size() <= deg) c.resize(deg + 1, 0);
      c[deg] += sign * coef;
      i = j;
    }
    if (!c.empty() && c[0] != 0) throw_input("polynomial '" + src + "' must vanish at 0");
    while (!c.empty() && c.back() == 0) c.pop_back();
    fam.polys.push_back(std::move(c));
  }
  return fam;
}

std::string PolynomialFamily::str() const {
  std::ostringstream o;
  for (std::size_t k = 0; k < polys.size(); ++k) {
    if (k) o << ";";
    bool first = true;
    for (std::size_t d = polys[k].size(); d-- > 1;) {
      const auto c = polys[k][d];
      if (c == 0) continue;
      if (c < 0)
        o << "-";
      else if (!first)
        o << "+";
      if (c != 1 && c != -1) o << (c < 0 ? -c : c);
      o << "n";
      if (d > 1) o << "^" << d;
      first = false;
    }
    if (first) o << "0";
  }
  return o.str();
}

std::uint64_t poly_mod(const std::vector<std::int64_t>& p, std::uint64_t n, std::uint64_t m) {
  if (m == 1) return 0;
  const std::uint64_t nm = n % m;
  std::uint64_t r = 0;
  for (std::size_t i = p.size(); i-- > 0;) r = (mulmod(r, nm, m) + reduce(p[i], m)) % m;
  return r;
}

double poly_frac(const std::vector<std::int64_t>& p, std::uint64_t n, double alpha) {
  long double r = 0.0L;
  const auto nl = static_cast<long double>(n);
  for (std::size_t i = p.size(); i-- > 0;) {
    const long double c = static_cast<long double>(p[i]) * alpha;
    r = r * nl + (c - std::floor(c));
    r -= std::floor(r);
  }
  return frac(r);
}

std::uint64_t intersection_count(const FiniteSet& A, const std::vector<std::uint64_t>& shift_residues) {
  return count_with(A, layout(A), shift_residues);
}

double intersection_measure(const FiniteSet& A, const std::vector<std::int64_t>& shifts) {
  const std::uint64_t M = A.system.size();
  std::vector<std::uint64_t> r;
  for (auto a : shifts) r.push_back(reduce(a, M));
  return static_cast<double>(intersection_count(A, r)) / static_cast<double>(M);
}

double intersection_measure(const TorusRotation& T, const ArcSet& A, const std::vector<std::int64_t>& shifts) {
  std::vector<ArcSet> sets{A};
  for (auto a : shifts) sets.push_back(translate(A, frac(static_cast<long double>(a) * T.alpha)));
  return intersect_arcs(sets);
}

std::vector<std::uint64_t> j_grid(std::uint64_t J_max) {
  std::vector<std::uint64_t> g;
  for (int k = 0;; ++k) {
    const auto J = static_cast<std::uint64_t>(std::llround(std::pow(10.0, k / 10.0)));
    if (J >= J_max) break;
    if (g.empty() || g.back() != J) g.push_back(J);
  }
  g.push_back(J_max);
  return g;
}

std::vector<std::uint64_t> shift_sequence(const std::vector<std::uint64_t>& E, std::uint64_t r) {
  std::vector<std::uint64_t> out;
  for (auto n : E)
    if (n > r) out.push_back(n - r);
  return out;
}

RecurrenceReport recurrence_average(const System& system, const SetA& A, const PolynomialFamily& polys,
                                    const std::vector<std::uint64_t>& E, std::uint64_t J_max,
                                    std::optional<double> floor) {
  return run("recurrence", system, A, polys, E, J_max, floor, {});
}

RecurrenceReport convergence_average(const System& system, const SetA& A, const PolynomialFamily& polys,
                                     const std::vector<std::uint64_t>& E, std::uint64_t J_max,
                                     const std::vector<double>& observable) {
  return run("convergence", system, A, polys, E, J_max, std::nullopt, observable);
}

}  // namespace multfun
