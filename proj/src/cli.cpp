#include "multfun/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <new>
#include <numeric>

#include "multfun/error.hpp"
#include "multfun/parallel.hpp"

namespace multfun {

namespace {

template <class T>
const T& need(const std::optional<T>& v, const char* flag, const std::string& command) {
  if (!v) throw_input("--" + std::string(flag) + " is required for '" + command + "'");
  return *v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_real(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw_input("cannot parse " + what + " '" + s + "'");
  }
}

void set_xi(Params& p, const std::string& text) {
  if (text.find('/') != std::string::npos) {
    p.xi = Rational::parse(text);
    return;
  }
  const double v = parse_real(text, "xi");
  if (v == std::floor(v) && std::abs(v) < 1e15)
    p.xi = Rational(static_cast<std::int64_t>(v), 1);
  else
    p.xi_real = v;
}

MultiplicativeFunction make_function(const RunConfig& cfg) {
  const auto& name = need(cfg.function, "function", cfg.command);
  Params p;
  if (cfg.xi) set_xi(p, *cfg.xi);
  if (cfg.modulus) p.modulus = *cfg.modulus;
  if (cfg.index) p.index = static_cast<std::size_t>(*cfg.index);
  if (cfg.file) p.path = *cfg.file;
  return builtin(name, p);
}

MultiplicativeFunction parse_g(const std::string& spec) {
  auto parts = split(spec, ':');
  if (parts[0] == "one" && parts.size() == 1) return constant_one();
  Params p;
  if (parts[0] == "dirichlet_character") {
    if (parts.size() != 3) throw_input("--g dirichlet_character needs the form dirichlet_character:q:i");
    p.modulus = parse_u64(parts[1]);
    p.index = static_cast<std::size_t>(parse_u64(parts[2]));
  } else if (parts.size() == 2) {
    set_xi(p, parts[1]);
  } else if (parts.size() != 1) {
    throw_input("cannot parse --g '" + spec + "'");
  }
  return builtin(parts[0], p);
}

Target target(const RunConfig& cfg) { return Target::parse(need(cfg.z, "z", cfg.command), cfg.tol); }

std::uint64_t N_or(const RunConfig& cfg, std::uint64_t fallback) { return cfg.N.value_or(fallback); }

// Sequence or set argument: a named set, or the level set of --function at --z.
LevelSet source_set(const RunConfig& cfg, std::uint64_t N) {
  if (cfg.set) {
    if (cfg.function) throw_input("pass either --set or --function/--z, not both");
    return named_set(*cfg.set, N);
  }
  if (!cfg.function) throw_input("'" + cfg.command + "' needs --set or --function with --z");
  return level_set(make_function(cfg), target(cfg), N);
}

std::vector<double> parse_observable(const std::string& text) {
  std::vector<double> v;
  for (const auto& s : split(text, ',')) v.push_back(parse_real(s, "observable value"));
  return v;
}

Json cmd_catalog(const RunConfig& cfg) {
  Json j{{"functions", catalog_names()}, {"named_sets", named_set_names()}, {"commands", command_names()}};
  if (cfg.modulus && !cfg.function) {
    Json chars = Json::array();
    for (const auto& chi : characters_mod(*cfg.modulus)) chars.push_back(to_json(chi));
    j["characters"] = chars;
  }
  if (cfg.function) {
    auto f = make_function(cfg);
    Json vals = Json::array();
    for (std::uint64_t n = 1; n <= N_or(cfg, 20); ++n) vals.push_back(to_json(eval_at(f, n)));
    j["function"] = to_json(f);
    j["values"] = vals;
  }
  return j;
}

Json cmd_sieve(const RunConfig& cfg) {
  auto f = make_function(cfg);
  const auto N = N_or(cfg, 1000000);
  auto table = sieve_range(f, N);
  auto vals = table.values();
  cplx sum = 0.0;
  std::uint64_t zeros = 0;
  for (auto v : vals) {
    sum += v;
    zeros += v == cplx(0.0, 0.0);
  }
  Json head = Json::array();
  for (std::size_t i = 0; i < vals.size() && i < 30; ++i) head.push_back(to_json(vals[i]));
  Json prof = Json::array();
  for (const auto& p : besicovitch_profile(vals)) prof.push_back({{"N", p.N}, {"value", p.value}});
  return {{"function", to_json(f)},
          {"N", N},
          {"values_head", head},
          {"mean", to_json(sum / static_cast<double>(N))},
          {"zeros", zeros},
          {"besicovitch", besicovitch_seminorm(vals)},
          {"besicovitch_profile", prof}};
}

Json cmd_mean(const RunConfig& cfg) {
  auto f = make_function(cfg);
  const TGrid grid = cfg.tgrid ? TGrid::parse(*cfg.tgrid) : TGrid{};
  auto rep = halasz_classify(f, cfg.P.value_or(100000), grid, N_or(cfg, 1000000));
  return {{"function", to_json(f)}, {"mean_value", to_json(rep)}};
}

Json cmd_apmean(const RunConfig& cfg) {
  auto f = make_function(cfg);
  auto a = ap_mean(f, need(cfg.q, "q", cfg.command), need(cfg.r, "r", cfg.command), N_or(cfg, 1000000));
  return {{"function", to_json(f)}, {"ap_mean", to_json(a)}};
}

Json cmd_distance(const RunConfig& cfg, std::optional<std::string>& csv) {
  auto f = make_function(cfg);
  auto g = parse_g(cfg.g.value_or("one"));
  auto d = pretentious_distance(f, g, cfg.P.value_or(1000000), cfg.t.value_or(0.0));
  csv = distance_csv(d);
  return {{"function", to_json(f)}, {"g", to_json(g)}, {"distance", to_json(d)}};
}

Json cmd_classify(const RunConfig& cfg) {
  auto f = make_function(cfg);
  const TGrid grid = cfg.tgrid ? TGrid::parse(*cfg.tgrid) : TGrid{};
  const auto Q = cfg.Q_max.value_or(60);
  const auto P = cfg.P.value_or(100000);
  const auto N = N_or(cfg, 1000000);
  auto ap = aperiodicity_test(f, Q, grid, P, N);
  auto rap = rap_test(f, Q, P, N);
  return {{"function", to_json(f)}, {"aperiodicity", to_json(ap)}, {"rap", to_json(rap)}};
}

Json cmd_gowers(const RunConfig& cfg, std::optional<std::string>& csv) {
  auto f = make_function(cfg);
  std::vector<std::uint64_t> grid;
  if (cfg.grid)
    grid = *cfg.grid;
  else if (cfg.N)
    grid = {*cfg.N};
  else
    grid = {1024, 4096, 16384};
  auto rep = uniformity_profile(f, static_cast<unsigned>(cfg.s.value_or(2)), grid);
  csv = gowers_csv(rep);
  return {{"function", to_json(f)}, {"gowers", to_json(rep)}};
}

Json cmd_spectrum(const RunConfig& cfg) {
  auto f = make_function(cfg);
  const auto N = N_or(cfg, 100000);
  auto table = sieve_range(f, N);
  auto scan = spectrum_scan(table.values(), cfg.q_max.value_or(12), cfg.threshold);
  Json j{{"function", to_json(f)}, {"spectrum", to_json(scan)}};
  if (cfg.period) j["periodic_approximant"] = to_json(periodic_approximant(table.values(), *cfg.period));
  return j;
}

Json cmd_levelset(const RunConfig& cfg) {
  const auto N = N_or(cfg, 1000000);
  auto E = source_set(cfg, N);
  Json j{{"level_set", to_json(E)}, {"density_profile", to_json(density_profile(E, cfg.q_max.value_or(6)))}};
  if (cfg.bitmap) {
    std::ofstream out(*cfg.bitmap, std::ios::binary);
    if (!out) throw_input("cannot open '" + *cfg.bitmap + "' for writing");
    write_bitmap(E, out);
  }
  if (cfg.text) {
    std::ofstream out(*cfg.text);
    if (!out) throw_input("cannot open '" + *cfg.text + "' for writing");
    write_text(E, out);
  }
  if (cfg.concentration) {
    if (!E.function) throw_input("--concentration needs --function");
    j["concentration"] = to_json(concentration_analysis(*E.function, cfg.P.value_or(100000), cfg.k_max.value_or(24)));
  }
  if (cfg.prob) {
    auto F = random_relative_subset(E, *cfg.prob, need(cfg.seed, "seed", cfg.command));
    auto u = relative_uniformity_function(F, E);
    double mean = 0.0;
    for (auto v : u) mean += v.real();
    j["random_subset"] = {{"p", *cfg.prob},
                          {"seed", *cfg.seed},
                          {"subset", to_json(F)},
                          {"dE", F.density()},
                          {"dR", E.density()},
                          {"u_mean", mean / static_cast<double>(N)},
                          {"u_U2", gowers_fast(u, 2)}};
  }
  return j;
}

Json cmd_structure(const RunConfig& cfg) {
  auto f = make_function(cfg);
  const auto N = N_or(cfg, 1000000);
  StructureOptions opt;
  if (cfg.k_max) opt.k_max = static_cast<unsigned>(*cfg.k_max);
  if (cfg.Q_max) opt.Q_max = *cfg.Q_max;
  if (cfg.P) opt.P = *cfg.P;
  if (cfg.grid) opt.u_grid = *cfg.grid;
  opt.with_u3 = cfg.u3;
  auto sp = structure_pair(f, target(cfg), N, opt);
  Json j = to_json(sp);
  Json matches = Json::array();
  for (const auto& name : named_set_names())
    if (named_set(name, N).members == sp.R.members) matches.push_back(name);
  j["R_matches"] = matches;
  return {{"function", to_json(f)}, {"structure", j}};
}

Json cmd_divisibility(const RunConfig& cfg) {
  auto E = source_set(cfg, N_or(cfg, 1000000));
  auto rep = divisibility_report(E, cfg.shift.value_or(0), cfg.u_max.value_or(10));
  return {{"divisibility", to_json(rep)}};
}

// A zero average along (E - r) on Z/m with A = {0} and p(n) = c n follows from
// (E - r) n uN being empty for u = m / gcd(m, c); ask the divisibility module for a certificate.
std::optional<std::string> certificate(const System& sys, const SetA& A, const PolynomialFamily& fam, const LevelSet& E,
                                       std::uint64_t r) {
  const auto* fs = std::get_if<FiniteSystem>(&sys);
  if (!fs || fs->moduli.size() != 1 || fam.size() != 1 || fam.polys[0].size() != 2) return std::nullopt;
  const auto& set = std::get<FiniteSet>(A);
  if (set.count() != 1 || !set.member[0]) return std::nullopt;
  const std::uint64_t m = fs->moduli[0];
  const auto c = static_cast<std::uint64_t>(std::llabs(fam.polys[0][1]));
  const std::uint64_t u = m / std::gcd(m, c);
  if (2 * r >= E.N) return std::nullopt;
  auto rep = divisibility_report(E, r, u);
  const auto& row = rep.rows.back();
  if (!row.obstruction) return std::nullopt;
  return "(E - " + std::to_string(r) + ") n " + std::to_string(u) + "N is empty: " + *row.obstruction;
}

Json cmd_average(const RunConfig& cfg, std::optional<std::string>& csv) {
  const bool conv = cfg.command == "convergence";
  if (cfg.m && cfg.alpha) throw_input("pass either --m (finite system) or --alpha (torus), not both");
  System sys;
  SetA A;
  if (cfg.alpha) {
    sys = TorusRotation{*cfg.alpha, ""};
    A = ArcSet::parse(need(cfg.A, "A", cfg.command));
  } else {
    auto fs = FiniteSystem::parse(need(cfg.m, "m", cfg.command));
    sys = fs;
    A = FiniteSet::parse(fs, cfg.A.value_or("0"));
  }
  auto fam = PolynomialFamily::parse(cfg.poly.value_or("n"));
  auto E = source_set(cfg, N_or(cfg, 1000000));
  const std::uint64_t r = cfg.shift.value_or(0);
  auto seq = shift_sequence(E.members, r);
  const std::uint64_t J = cfg.J_max.value_or(100000);
  RecurrenceReport rep;
  if (conv)
    rep = convergence_average(sys, A, fam, seq, J, cfg.observable ? parse_observable(*cfg.observable) : std::vector<double>{});
  else
    rep = recurrence_average(sys, A, fam, seq, J, cfg.floor);
  rep.sequence = E.source + " = " + E.target.text + (r ? " shifted by -" + std::to_string(r) : "");
  if (rep.all_zero) rep.certificate = certificate(sys, A, fam, E, r);
  csv = running_csv(rep);
  return {{"averages", to_json(rep)}};
}

void validate(const RunConfig& cfg) {
  if (std::find(command_names().begin(), command_names().end(), cfg.command) == command_names().end())
    throw_input("unknown command '" + cfg.command + "'");
  const std::pair<const char*, const std::optional<std::uint64_t>*> bounds[] = {
      {"N", &cfg.N},         {"P", &cfg.P},         {"s", &cfg.s},         {"qmax", &cfg.q_max},
      {"umax", &cfg.u_max},  {"kmax", &cfg.k_max},  {"Qmax", &cfg.Q_max},  {"jmax", &cfg.J_max},
      {"q", &cfg.q},         {"period", &cfg.period}, {"modulus", &cfg.modulus}};
  for (const auto& [flag, v] : bounds)
    if (*v && **v == 0) throw_input("--" + std::string(flag) + " must be positive");
  if (cfg.grid)
    for (auto n : *cfg.grid)
      if (n == 0) throw_input("--grid entries must be positive");
  static const std::vector<std::string> with_csv{"distance", "gowers", "recurrence", "convergence"};
  if (cfg.csv && std::find(with_csv.begin(), with_csv.end(), cfg.command) == with_csv.end())
    throw_input("'" + cfg.command + "' has no CSV view");
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_input("cannot open '" + path + "' for writing");
  out << content;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::resource:
      return 3;
    case ErrorKind::search:
      return 4;
    case ErrorKind::input:
    case ErrorKind::unreliable:
      break;
  }
  return 2;
}

Json config_echo(const RunConfig& cfg) {
  Json j = Json::object();
  auto put = [&](const char* key, const auto& v) {
    if (v) j[key] = *v;
  };
  put("function", cfg.function);
  put("xi", cfg.xi);
  put("modulus", cfg.modulus);
  put("index", cfg.index);
  put("file", cfg.file);
  put("g", cfg.g);
  put("N", cfg.N);
  put("P", cfg.P);
  put("s", cfg.s);
  put("qmax", cfg.q_max);
  put("umax", cfg.u_max);
  put("kmax", cfg.k_max);
  put("Qmax", cfg.Q_max);
  put("jmax", cfg.J_max);
  put("q", cfg.q);
  put("r", cfg.r);
  put("period", cfg.period);
  put("shift", cfg.shift);
  put("grid", cfg.grid);
  put("tgrid", cfg.tgrid);
  put("t", cfg.t);
  put("tol", cfg.tol);
  put("threshold", cfg.threshold);
  put("p", cfg.prob);
  put("alpha", cfg.alpha);
  put("floor", cfg.floor);
  put("seed", cfg.seed);
  put("z", cfg.z);
  put("set", cfg.set);
  put("m", cfg.m);
  put("A", cfg.A);
  put("poly", cfg.poly);
  put("observable", cfg.observable);
  if (cfg.concentration) j["concentration"] = true;
  if (cfg.u3) j["u3"] = true;
  return j;
}

Json diagnostic(const RunConfig& cfg, const std::string& kind, const std::string& message, int exit_code) {
  return {{"version", kVersion},
          {"command", cfg.command},
          {"config", config_echo(cfg)},
          {"error", {{"kind", kind}, {"message", message}, {"exit_code", exit_code}}}};
}

RunResult execute(const RunConfig& cfg) {
  RunResult res;
  try {
    validate(cfg);
    set_thread_limit(cfg.threads);
    Json body;
    const auto& c = cfg.command;
    if (c == "catalog") body = cmd_catalog(cfg);
    else if (c == "sieve") body = cmd_sieve(cfg);
    else if (c == "mean") body = cmd_mean(cfg);
    else if (c == "apmean") body = cmd_apmean(cfg);
    else if (c == "distance") body = cmd_distance(cfg, res.csv);
    else if (c == "classify") body = cmd_classify(cfg);
    else if (c == "gowers") body = cmd_gowers(cfg, res.csv);
    else if (c == "spectrum") body = cmd_spectrum(cfg);
    else if (c == "levelset") body = cmd_levelset(cfg);
    else if (c == "structure") body = cmd_structure(cfg);
    else if (c == "divisibility") body = cmd_divisibility(cfg);
    else body = cmd_average(cfg, res.csv);
    res.json = {{"version", kVersion}, {"command", c}, {"config", config_echo(cfg)}, {"result", body}};
  } catch (const Error& e) {
    res.exit_code = exit_code_for(e.kind());
    res.json = diagnostic(cfg, to_string(e.kind()), e.what(), res.exit_code);
    res.csv.reset();
  } catch (const std::bad_alloc&) {
    res.exit_code = 3;
    res.json = diagnostic(cfg, "resource", "out of memory", 3);
    res.csv.reset();
  }
  return res;
}

int run(const RunConfig& cfg) {
  const auto started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  RunResult res = execute(cfg);
  const std::string text = res.json.dump(2) + "\n";
  try {
    if (res.exit_code != 0) std::cerr << res.json.dump() << "\n";
    if (cfg.out)
      write_file(*cfg.out, text);
    else if (res.exit_code == 0)
      std::cout << text;
    if (cfg.csv && res.csv) write_file(*cfg.csv, *res.csv);
    if (cfg.meta) {
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      Json meta{{"version", kVersion},
                {"command", cfg.command},
                {"started_utc", started},
                {"finished_utc", utc_now()},
                {"elapsed_seconds", secs},
                {"exit_code", res.exit_code}};
      write_file(*cfg.meta, meta.dump(2) + "\n");
    }
  } catch (const Error& e) {
    std::cerr << diagnostic(cfg, to_string(e.kind()), e.what(), 2).dump() << "\n";
    return 2;
  }
  return res.exit_code;
}

}  // namespace multfun
