#include "multfun/report.hpp"

#include <charconv>
#include <cmath>

namespace multfun {

namespace {

Json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

Json members_json(const std::vector<std::uint64_t>& v, std::size_t limit) {
  Json a = Json::array();
  for (std::size_t i = 0; i < v.size() && i < limit; ++i) a.push_back(v[i]);
  return a;
}

Json grid_pairs(const std::vector<std::pair<std::uint64_t, cplx>>& v) {
  Json a = Json::array();
  for (const auto& [N, z] : v) a.push_back({{"N", N}, {"value", to_json(z)}});
  return a;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Json to_json(cplx z) { return Json::array({num(z.real()), num(z.imag())}); }

Json to_json(const Rational& r) { return r.str(); }

Json to_json(const MultiplicativeFunction& f) {
  Json params = Json::object();
  const auto& p = f.params();
  if (p.xi) params["xi"] = p.xi->str();
  if (p.xi_real) params["xi"] = num(*p.xi_real);
  if (p.modulus) params["modulus"] = p.modulus;
  if (p.modulus) params["index"] = p.index;
  if (!p.path.empty()) params["path"] = p.path;
  return {{"name", f.name()},
          {"label", f.label()},
          {"params", params},
          {"completely_multiplicative", f.completely_multiplicative()},
          {"exact", f.has_exact()},
          {"unbounded", f.spec().unbounded}};
}

Json to_json(const DirichletCharacter& chi) {
  Json values = Json::array();
  for (auto v : chi.table) values.push_back(to_json(v));
  Json j{{"modulus", chi.modulus}};
  if (chi.index != DirichletCharacter::npos) j["index"] = chi.index;
  j["order"] = chi.order;
  j["principal"] = chi.is_principal;
  j["values"] = values;
  return j;
}

Json to_json(const WindowTest& w) {
  return {{"lo", w.lo},
          {"hi", w.hi},
          {"real_increment", num(w.real_increment)},
          {"imag_increment", num(w.imag_increment)},
          {"mertens", num(w.mertens)},
          {"trend", to_string(w.trend)},
          {"complex_plateau", w.complex_plateau}};
}

Json to_json(const DistanceProfile& d) {
  Json grid = Json::array();
  for (std::size_t i = 0; i < d.P_grid.size(); ++i) grid.push_back({{"P", d.P_grid[i]}, {"partial_sum", num(d.partial[i])}});
  return {{"f", d.f_name}, {"g", d.g_name}, {"t", num(d.t)}, {"value", num(d.value())}, {"window", to_json(d.window)},
          {"profile", grid}};
}

Json to_json(const EulerProduct& e) {
  Json grid = Json::array();
  for (std::size_t i = 0; i < e.P_grid.size(); ++i) grid.push_back({{"P", e.P_grid[i]}, {"value", to_json(e.partial[i])}});
  return {{"value", to_json(e.value())}, {"unsettled", e.unsettled}, {"profile", grid}};
}

Json to_json(const ApMean& a) {
  Json j{{"q", a.q}, {"r", a.r}, {"N", a.N}, {"terms", a.terms}, {"direct", to_json(a.direct)}};
  j["decomposition"] = a.decomposition ? to_json(*a.decomposition) : Json(nullptr);
  if (a.decomposition) j["agreement"] = num(std::abs(*a.decomposition - a.direct));
  return j;
}

Json to_json(const MeanValueReport& m) {
  return {{"f", m.f_name},
          {"P", m.P},
          {"N", m.N},
          {"halasz_case", m.halasz_case},
          {"empirical", grid_pairs(m.empirical)},
          {"euler", grid_pairs(m.euler)},
          {"euler_unsettled", m.euler_unsettled},
          {"witness_k", m.witness_k ? Json(*m.witness_k) : Json(nullptr)},
          {"untwisted", to_json(m.untwisted)},
          {"best_t", num(m.best_t)},
          {"best_t_distance", num(m.best_t_distance)},
          {"best_t_window", to_json(m.best_t_window)},
          {"two_adic_match", m.two_adic_match},
          {"every_t_diverges", m.every_t_diverges}};
}

Json to_json(const CharacterHit& h) {
  return {{"modulus", h.modulus}, {"index", h.index}, {"t", num(h.t)}, {"distance", num(h.distance)},
          {"window", to_json(h.window)}};
}

Json to_json(const AperiodicityVerdict& v) {
  return {{"verdict", v.verdict},
          {"heuristic", v.heuristic},
          {"hit", v.hit ? to_json(*v.hit) : Json(nullptr)},
          {"closest", to_json(v.closest)},
          {"candidates", v.candidates},
          {"diverging", v.diverging},
          {"max_ap_mean", num(v.max_ap_mean)},
          {"ap_N", v.ap_N}};
}

Json to_json(const RapVerdict& v) {
  return {{"verdict", v.verdict},
          {"chi", v.chi ? to_json(*v.chi) : Json(nullptr)},
          {"modulus_window", to_json(v.modulus_window)},
          {"besicovitch", num(v.besicovitch)},
          {"N", v.N}};
}

Json to_json(const GowersReport& g) {
  Json entries = Json::array();
  for (const auto& e : g.entries)
    entries.push_back({{"N", e.N},
                       {"Ntilde", e.Ntilde},
                       {"value", num(e.value)},
                       {"method", e.method},
                       {"bound_lhs", num(e.bound_lhs)},
                       {"bound_rhs", num(e.bound_rhs)},
                       {"bound_ok", e.bound_ok}});
  return {{"source", g.source},
          {"s", g.s},
          {"entries", entries},
          {"strictly_decreasing", g.strictly_decreasing},
          {"inequality_holds", g.inequality_holds}};
}

Json to_json(const SpectrumScan& s) {
  Json pts = Json::array();
  for (const auto& p : s.points)
    pts.push_back({{"theta", to_json(p.theta)}, {"magnitude", num(p.magnitude)}, {"value", to_json(p.value)}});
  return {{"N", s.N}, {"q_max", s.q_max}, {"threshold", num(s.threshold)}, {"points", pts}};
}

Json to_json(const PeriodicApproximant& p) {
  Json vals = Json::array();
  for (auto v : p.values) vals.push_back(to_json(v));
  return {{"period", p.period}, {"residual", num(p.residual)}, {"values", vals}};
}

Json to_json(const Target& z) {
  Json j{{"text", z.text}};
  switch (z.kind) {
    case Target::Kind::zero:
      j["kind"] = "zero";
      break;
    case Target::Kind::root:
      j["kind"] = "root";
      j["root"] = to_json(z.root);
      break;
    case Target::Kind::value:
      j["kind"] = "value";
      break;
  }
  j["value"] = to_json(z.complex_value());
  j["tol"] = z.tol ? num(*z.tol) : Json(nullptr);
  return j;
}

Json to_json(const LevelSet& E, std::size_t max_members) {
  return {{"source", E.source},
          {"target", to_json(E.target)},
          {"exact", E.exact},
          {"N", E.N},
          {"count", E.members.size()},
          {"density", num(E.density())},
          {"members_head", members_json(E.members, max_members)}};
}

Json to_json(const DensityProfile& d) {
  Json cells = Json::array();
  for (const auto& c : d.cells)
    cells.push_back({{"q", c.q}, {"r", c.r}, {"count", c.count}, {"density", num(c.density)}, {"relative", num(c.relative)}});
  Json empty = Json::array();
  for (const auto& [q, r] : d.empty_cells) empty.push_back({{"q", q}, {"r", r}});
  return {{"N", d.N}, {"count", d.count}, {"density", num(d.density)}, {"q_max", d.q_max}, {"cells", cells},
          {"empty_cells", empty}};
}

namespace {

Json point_json(const ConcentrationPoint& p) {
  return {{"z", to_json(p.z)},
          {"root", p.root ? to_json(*p.root) : Json(nullptr)},
          {"mass", num(p.mass)},
          {"window_mass", num(p.window_mass)},
          {"status", p.status}};
}

}  // namespace

Json to_json(const ConcentrationAnalysis& c) {
  Json pts = Json::array(), und = Json::array(), grp = Json::array();
  for (const auto& p : c.points) pts.push_back(point_json(p));
  for (const auto& p : c.undecided) und.push_back(point_json(p));
  if (!c.unbounded)
    for (const auto& r : c.group()) grp.push_back(to_json(r));
  return {{"source", c.source},
          {"P", c.P},
          {"k_max", c.k_max},
          {"point_band", num(c.point_band)},
          {"floor_band", num(c.floor_band)},
          {"buckets", c.buckets},
          {"points", pts},
          {"undecided", und},
          {"group", c.unbounded ? Json("unbounded") : grp},
          {"group_order", c.unbounded ? Json(nullptr) : Json(c.group_order)},
          {"tail", num(c.tail)},
          {"tail_window", to_json(c.tail_window)},
          {"verdict", c.verdict}};
}

Json to_json(const ZeroRepair& z) {
  return {{"function", to_json(z.g)},
          {"changed", z.changed},
          {"gamma", num(z.gamma)},
          {"candidate", z.candidate},
          {"verify_N", z.verify_N},
          {"verified", z.verified},
          {"warnings", z.warnings}};
}

Json to_json(const KChiResult& k) {
  return {{"found", k.found},
          {"fallback", k.fallback},
          {"k", k.k},
          {"modulus", k.modulus},
          {"index", k.index},
          {"distance", num(k.distance)},
          {"window", to_json(k.window)},
          {"message", k.message}};
}

Json to_json(const StructurePair& s) {
  Json norms = Json::array();
  for (const auto& u : s.u_norms) norms.push_back({{"N", u.N}, {"s", u.s}, {"value", num(u.value)}});
  return {{"E", to_json(s.E)},
          {"R", to_json(s.R)},
          {"rational_case", s.rational_case},
          {"zero_repair", s.repair ? to_json(*s.repair) : Json(nullptr)},
          {"concentration", s.concentration ? to_json(*s.concentration) : Json(nullptr)},
          {"k", s.kchi.k},
          {"chi", to_json(s.kchi)},
          {"dE", num(s.dE)},
          {"dR", num(s.dR)},
          {"subset", s.subset},
          {"u_mean", num(s.u_mean)},
          {"u_norms", norms},
          {"rap", s.rap ? to_json(*s.rap) : Json(nullptr)}};
}

Json to_json(const DivisibilityReport& d) {
  Json rows = Json::array();
  for (const auto& r : d.rows)
    rows.push_back({{"u", r.u},
                    {"count", r.count},
                    {"density", num(r.density)},
                    {"obstruction", r.obstruction ? Json(*r.obstruction) : Json(nullptr)}});
  return {{"E", d.E_name},
          {"r", d.r},
          {"N", d.N},
          {"density_floor", num(d.density_floor)},
          {"verdict", d.verdict},
          {"witness", d.witness ? Json(*d.witness) : Json(nullptr)},
          {"rows", rows}};
}

Json to_json(const RecurrenceReport& r) {
  Json running = Json::array();
  for (const auto& p : r.running) {
    Json j{{"J", p.J}, {"average", num(p.average)}};
    if (p.numerator) j["exact"] = std::to_string(*p.numerator) + "/" + std::to_string(*p.denominator);
    running.push_back(j);
  }
  return {{"kind", r.kind},
          {"system", r.system},
          {"set", r.set},
          {"polys", r.polys},
          {"sequence", r.sequence},
          {"J_max", r.J_max},
          {"used", r.used},
          {"truncated", r.truncated},
          {"tail_estimate", num(r.tail_estimate)},
          {"floor", num(r.floor)},
          {"oscillation", num(r.oscillation)},
          {"positivity", r.positivity},
          {"all_zero", r.all_zero},
          {"certificate", r.certificate ? Json(*r.certificate) : Json(nullptr)},
          {"note", "finite-J evidence of stabilization; a limit is not certified"},
          {"running", running}};
}

std::string gowers_csv(const GowersReport& g) {
  std::string out = "N,Ntilde,s,method,value\n";
  for (const auto& e : g.entries)
    out += std::to_string(e.N) + "," + std::to_string(e.Ntilde) + "," + std::to_string(g.s) + "," + e.method + "," +
           format_double(e.value) + "\n";
  return out;
}

std::string distance_csv(const DistanceProfile& d) {
  std::string out = "P,partial_sum\n";
  for (std::size_t i = 0; i < d.P_grid.size(); ++i) out += std::to_string(d.P_grid[i]) + "," + format_double(d.partial[i]) + "\n";
  return out;
}

std::string running_csv(const RecurrenceReport& r) {
  std::string out = "J,average\n";
  for (const auto& p : r.running) out += std::to_string(p.J) + "," + format_double(p.average) + "\n";
  return out;
}

}  // namespace multfun
