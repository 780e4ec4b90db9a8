#include "multfun/mf_core.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "multfun/error.hpp"

namespace multfun {

namespace {

constexpr double kBoundSlack = 1e-12;

cplx cpow(cplx z, unsigned m) {
  cplx r(1.0, 0.0);
  for (unsigned i = 0; i < m; ++i) r *= z;
  return r;
}

std::string format_params(const std::string& name, const Params& p) {
  if (p.xi) return name + "(" + p.xi->str() + ")";
  if (p.xi_real) {
    std::ostringstream os;
    os.precision(17);
    os << name << "(" << *p.xi_real << ")";
    return os.str();
  }
  if (name == "dirichlet_character") return name + "(" + std::to_string(p.modulus) + "#" + std::to_string(p.index) + ")";
  if (name == "chi_of_tau") return name + "(" + std::to_string(p.modulus) + ")";
  if (name == "custom_file" && !p.path.empty()) return name + "(" + p.path + ")";
  return name;
}

}  // namespace

ExactValue exact_multiply(const ExactValue& a, const ExactValue& b, std::int64_t order) {
  if (a.zero || b.zero) return ExactValue::zero_value();
  return {false, mod_floor(a.root + b.root, order), a.ypow + b.ypow};
}

MultiplicativeFunction::MultiplicativeFunction(std::string name, Params params, PrimePowerSpec spec)
    : name_(std::move(name)), params_(std::move(params)), spec_(std::move(spec)) {
  if (!spec_.rule) throw_input("multiplicative function '" + name_ + "' has no prime-power rule");
  if (spec_.exact_rule && spec_.root_order <= 0)
    throw_input("exact rule of '" + name_ + "' needs a positive root order");
}

std::string MultiplicativeFunction::label() const { return format_params(name_, params_); }

cplx MultiplicativeFunction::at_prime_power(std::uint64_t p, unsigned k) const {
  if (k == 0) return {1.0, 0.0};
  if (has_exact()) return to_complex(*exact_at_prime_power(p, k));
  cplx v = spec_.completely_multiplicative ? cpow(spec_.rule(p, 1), k) : spec_.rule(p, k);
  if (!spec_.unbounded && std::abs(v) > 1.0 + kBoundSlack)
    throw_input(label() + " has |f(" + std::to_string(p) + "^" + std::to_string(k) +
                ")| > 1; mark it unbounded to allow this");
  return v;
}

std::optional<ExactValue> MultiplicativeFunction::exact_at_prime_power(std::uint64_t p, unsigned k) const {
  if (!has_exact()) return std::nullopt;
  if (k == 0) return ExactValue::unit_root(0);
  if (spec_.completely_multiplicative) {
    ExactValue v = spec_.exact_rule(p, 1);
    if (v.zero) return v;
    return ExactValue{false, mod_floor(v.root * static_cast<std::int64_t>(k), spec_.root_order),
                      v.ypow * static_cast<std::int64_t>(k)};
  }
  ExactValue v = spec_.exact_rule(p, k);
  if (!v.zero) v.root = mod_floor(v.root, spec_.root_order);
  return v;
}

cplx MultiplicativeFunction::to_complex(const ExactValue& v) const {
  if (v.zero) return {0.0, 0.0};
  cplx z = unit_fraction(v.root, spec_.root_order);
  if (v.ypow != 0) z *= unit(static_cast<long double>(v.ypow) * static_cast<long double>(spec_.y_turns));
  return z;
}

MultiplicativeFunction MultiplicativeFunction::power(unsigned m) const {
  auto base = std::make_shared<MultiplicativeFunction>(*this);
  PrimePowerSpec s;
  s.completely_multiplicative = spec_.completely_multiplicative;
  s.unbounded = spec_.unbounded;
  s.rule = [base, m](std::uint64_t p, unsigned k) { return cpow(base->at_prime_power(p, k), m); };
  if (has_exact()) {
    s.root_order = spec_.root_order;
    s.y_turns = spec_.y_turns;
    s.exact_rule = [base, m](std::uint64_t p, unsigned k) {
      ExactValue v = *base->exact_at_prime_power(p, k);
      if (v.zero) return v;
      auto mm = static_cast<std::int64_t>(m);
      return ExactValue{false, mod_floor(v.root * mm, base->root_order()), v.ypow * mm};
    };
  }
  return MultiplicativeFunction(label() + "^" + std::to_string(m), Params{}, std::move(s));
}

MultiplicativeFunction MultiplicativeFunction::modulus_function() const {
  auto base = std::make_shared<MultiplicativeFunction>(*this);
  PrimePowerSpec s;
  s.completely_multiplicative = spec_.completely_multiplicative;
  s.unbounded = spec_.unbounded;
  s.rule = [base](std::uint64_t p, unsigned k) { return cplx(std::abs(base->at_prime_power(p, k)), 0.0); };
  if (has_exact()) {
    s.root_order = 1;
    s.exact_rule = [base](std::uint64_t p, unsigned k) {
      ExactValue v = *base->exact_at_prime_power(p, k);
      return v.zero ? v : ExactValue::unit_root(0);
    };
  }
  return MultiplicativeFunction("|" + label() + "|", Params{}, std::move(s));
}

MultiplicativeFunction MultiplicativeFunction::conjugate() const {
  auto base = std::make_shared<MultiplicativeFunction>(*this);
  PrimePowerSpec s;
  s.completely_multiplicative = spec_.completely_multiplicative;
  s.unbounded = spec_.unbounded;
  s.rule = [base](std::uint64_t p, unsigned k) { return std::conj(base->at_prime_power(p, k)); };
  if (has_exact()) {
    s.root_order = spec_.root_order;
    s.y_turns = spec_.y_turns;
    s.exact_rule = [base](std::uint64_t p, unsigned k) {
      ExactValue v = *base->exact_at_prime_power(p, k);
      if (v.zero) return v;
      return ExactValue{false, mod_floor(-v.root, base->root_order()), -v.ypow};
    };
  }
  return MultiplicativeFunction("conj(" + label() + ")", Params{}, std::move(s));
}

MultiplicativeFunction MultiplicativeFunction::from_rule(std::string name,
                                                         std::function<cplx(std::uint64_t, unsigned)> rule,
                                                         bool completely_multiplicative) {
  PrimePowerSpec s;
  s.rule = std::move(rule);
  s.completely_multiplicative = completely_multiplicative;
  return MultiplicativeFunction(std::move(name), Params{}, std::move(s));
}

cplx eval_at(const MultiplicativeFunction& f, std::uint64_t n) {
  if (n == 0) throw_input("multiplicative functions are defined on n >= 1");
  if (f.has_exact()) return f.to_complex(*eval_exact(f, n));
  cplx v(1.0, 0.0);
  for (auto [p, k] : factorize(n)) v *= f.at_prime_power(p, k);
  return v;
}

std::optional<ExactValue> eval_exact(const MultiplicativeFunction& f, std::uint64_t n) {
  if (n == 0) throw_input("multiplicative functions are defined on n >= 1");
  if (!f.has_exact()) return std::nullopt;
  ExactValue v = ExactValue::unit_root(0);
  for (auto [p, k] : factorize(n)) v = exact_multiply(v, *f.exact_at_prime_power(p, k), f.root_order());
  return v;
}

std::optional<ExactValue> SieveTable::exact(std::uint64_t n) const {
  if (root_.empty()) return std::nullopt;
  if (root_[n] < 0) return ExactValue::zero_value();
  return ExactValue{false, root_[n], exact_ypow(n)};
}

std::uint64_t memory_cap_bytes() {
  std::uint64_t mb = 4096;
  if (const char* env = std::getenv("MULTFUN_MEM_CAP_MB"); env != nullptr && *env != '\0') mb = parse_u64(env);
  return mb * 1024ULL * 1024ULL;
}

std::vector<std::uint32_t> smallest_prime_factors(std::uint64_t N) {
  if (N >= (1ULL << 32)) throw_resource("sieve bound must stay below 2^32");
  std::vector<std::uint32_t> spf(N + 1, 0);
  std::vector<std::uint32_t> primes;
  if (N >= 1) spf[1] = 1;
  for (std::uint64_t i = 2; i <= N; ++i) {
    if (spf[i] == 0) {
      spf[i] = static_cast<std::uint32_t>(i);
      primes.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::uint32_t p : primes) {
      if (p > spf[i] || i * p > N) break;
      spf[i * p] = p;
    }
  }
  return spf;
}

SieveTable sieve_range(const MultiplicativeFunction& f, std::uint64_t N) {
  if (N == 0) throw_input("sieve bound N must be at least 1");
  std::uint64_t per_entry = sizeof(cplx) + sizeof(std::uint32_t);
  if (f.has_exact()) per_entry += sizeof(std::int32_t) * (f.spec().y_turns != 0.0 ? 2 : 1);
  const std::uint64_t cap = memory_cap_bytes();
  if (N >= (1ULL << 32) || (N + 1) > cap / per_entry)
    throw_resource("sieve of length " + std::to_string(N) + " exceeds the memory cap of " +
                   std::to_string(cap >> 20) + " MB (set MULTFUN_MEM_CAP_MB)");

  SieveTable t;
  t.n_ = N;
  t.source_ = f.label();
  t.spf_ = smallest_prime_factors(N);
  t.values_.assign(N + 1, cplx(0.0, 0.0));
  t.values_[1] = cplx(1.0, 0.0);

  if (f.has_exact()) {
    const std::int64_t order = f.root_order();
    const bool with_y = f.spec().y_turns != 0.0;
    t.root_order_ = order;
    t.root_.assign(N + 1, -1);
    if (with_y) t.ypow_.assign(N + 1, 0);
    t.root_[1] = 0;
    for (std::uint64_t n = 2; n <= N; ++n) {
      const std::uint64_t p = t.spf_[n];
      std::uint64_t m = n / p, pk = p;
      unsigned k = 1;
      while (m % p == 0) {
        m /= p;
        pk *= p;
        ++k;
      }
      ExactValue v;
      if (m == 1) {
        v = *f.exact_at_prime_power(p, k);
      } else {
        ExactValue a = t.root_[m] < 0 ? ExactValue::zero_value() : ExactValue{false, t.root_[m], with_y ? t.ypow_[m] : 0};
        ExactValue b = t.root_[pk] < 0 ? ExactValue::zero_value() : ExactValue{false, t.root_[pk], with_y ? t.ypow_[pk] : 0};
        v = exact_multiply(a, b, order);
      }
      if (!v.zero) {
        t.root_[n] = static_cast<std::int32_t>(v.root);
        if (with_y) t.ypow_[n] = static_cast<std::int32_t>(v.ypow);
      }
    }
    // Complex values come from the exact ones through the same conversion eval_at uses.
    std::vector<cplx> roots(static_cast<std::size_t>(order));
    for (std::int64_t j = 0; j < order; ++j) roots[j] = f.to_complex(ExactValue::unit_root(j));
    std::map<std::int32_t, cplx> ycache;
    for (std::uint64_t n = 1; n <= N; ++n) {
      if (t.root_[n] < 0) continue;
      const std::int32_t yp = with_y ? t.ypow_[n] : 0;
      if (yp == 0) {
        t.values_[n] = roots[t.root_[n]];
        continue;
      }
      auto it = ycache.find(yp);
      if (it == ycache.end())
        it = ycache.emplace(yp, unit(static_cast<long double>(yp) * static_cast<long double>(f.spec().y_turns))).first;
      t.values_[n] = roots[t.root_[n]] * it->second;
    }
    return t;
  }

  for (std::uint64_t n = 2; n <= N; ++n) {
    const std::uint64_t p = t.spf_[n];
    std::uint64_t m = n / p, pk = p;
    unsigned k = 1;
    while (m % p == 0) {
      m /= p;
      pk *= p;
      ++k;
    }
    if (m != 1)
      t.values_[n] = t.values_[m] * t.values_[pk];
    else if (f.completely_multiplicative() && k > 1)
      t.values_[n] = t.values_[n / p] * t.values_[p];
    else
      t.values_[n] = f.at_prime_power(p, k);
  }
  return t;
}

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names = {
      "liouville", "moebius",     "lambda_xi",           "mu_xi",      "kappa_xi",
      "mu_squared", "phi_over_n", "dirichlet_character", "chi_of_tau", "custom_file"};
  return names;
}

namespace {

// Functions of the form e(xi * count) where count is built from the exponent k.
MultiplicativeFunction xi_family(const std::string& name, const Params& params, bool complete,
                                 bool zero_above_one, bool count_once) {
  PrimePowerSpec s;
  s.completely_multiplicative = complete;
  if (params.xi) {
    Rational xi = params.xi->mod1();
    s.root_order = xi.den;
    const std::int64_t a = xi.num;
    s.exact_rule = [a, zero_above_one, count_once](std::uint64_t, unsigned k) {
      if (zero_above_one && k >= 2) return ExactValue::zero_value();
      return ExactValue::unit_root(count_once ? a : a * static_cast<std::int64_t>(k));
    };
    const std::int64_t den = xi.den;
    s.rule = [a, den, zero_above_one, count_once](std::uint64_t, unsigned k) {
      if (zero_above_one && k >= 2) return cplx(0.0, 0.0);
      return unit_fraction(count_once ? a : a * static_cast<std::int64_t>(k), den);
    };
  } else if (params.xi_real) {
    const long double xi = *params.xi_real;
    s.rule = [xi, zero_above_one, count_once](std::uint64_t, unsigned k) {
      if (zero_above_one && k >= 2) return cplx(0.0, 0.0);
      return unit(count_once ? xi : xi * static_cast<long double>(k));
    };
  } else {
    throw_input(name + " needs the parameter xi (a/b for an exact root of unity, or a real)");
  }
  return MultiplicativeFunction(name, params, std::move(s));
}

}  // namespace

MultiplicativeFunction dirichlet_character_function(const DirichletCharacter& chi) {
  auto shared = std::make_shared<DirichletCharacter>(chi);
  PrimePowerSpec s;
  s.completely_multiplicative = true;
  s.root_order = static_cast<std::int64_t>(chi.phi);
  s.exact_rule = [shared](std::uint64_t p, unsigned) {
    std::int64_t e = shared->exponent_at(p);
    return e < 0 ? ExactValue::zero_value() : ExactValue::unit_root(e);
  };
  s.rule = [shared](std::uint64_t p, unsigned) { return (*shared)(p); };
  Params params;
  params.modulus = chi.modulus;
  params.index = chi.index;
  return MultiplicativeFunction("dirichlet_character", params, std::move(s));
}

MultiplicativeFunction constant_one() { return dirichlet_character_function(principal_character(1)); }

MultiplicativeFunction builtin(std::string_view name, const Params& params) {
  if (name == "liouville") {
    Params p;
    p.xi = Rational(1, 2);
    auto f = xi_family("lambda_xi", p, true, false, false);
    return MultiplicativeFunction("liouville", Params{}, f.spec());
  }
  if (name == "moebius") {
    Params p;
    p.xi = Rational(1, 2);
    auto f = xi_family("mu_xi", p, false, true, false);
    return MultiplicativeFunction("moebius", Params{}, f.spec());
  }
  if (name == "lambda_xi") return xi_family("lambda_xi", params, true, false, false);
  if (name == "mu_xi") return xi_family("mu_xi", params, false, true, false);
  if (name == "kappa_xi") return xi_family("kappa_xi", params, false, false, true);
  if (name == "mu_squared") {
    PrimePowerSpec s;
    s.root_order = 1;
    s.exact_rule = [](std::uint64_t, unsigned k) {
      return k >= 2 ? ExactValue::zero_value() : ExactValue::unit_root(0);
    };
    s.rule = [](std::uint64_t, unsigned k) { return k >= 2 ? cplx(0.0, 0.0) : cplx(1.0, 0.0); };
    return MultiplicativeFunction("mu_squared", Params{}, std::move(s));
  }
  if (name == "phi_over_n") {
    PrimePowerSpec s;
    s.rule = [](std::uint64_t p, unsigned) { return cplx(1.0 - 1.0 / static_cast<double>(p), 0.0); };
    return MultiplicativeFunction("phi_over_n", Params{}, std::move(s));
  }
  if (name == "dirichlet_character") {
    if (params.modulus == 0) throw_input("dirichlet_character needs a positive modulus");
    return dirichlet_character_function(character_mod(params.modulus, params.index));
  }
  if (name == "chi_of_tau") {
    const std::uint64_t b = params.modulus;
    bool ok = b == 2 || b == 4;
    if (!ok && b > 2) {
      std::uint64_t odd = (b % 2 == 0) ? b / 2 : b;
      ok = odd % 2 == 1 && odd > 2 && is_prime(odd) && (b == odd || b == 2 * odd);
    }
    if (!ok)
      throw_input("chi_of_tau needs modulus b in {2, 4, p, 2p} (p an odd prime) so that (Z/bZ)* is cyclic; got " +
                  std::to_string(b));
    auto chi = std::make_shared<DirichletCharacter>(character_mod(b, generating_character_index(b)));
    PrimePowerSpec s;
    s.root_order = static_cast<std::int64_t>(chi->phi);
    s.exact_rule = [chi](std::uint64_t, unsigned k) {
      std::int64_t e = chi->exponent_at(k + 1);
      return e < 0 ? ExactValue::zero_value() : ExactValue::unit_root(e);
    };
    s.rule = [chi](std::uint64_t, unsigned k) { return (*chi)(k + 1); };
    Params p;
    p.modulus = b;
    p.index = chi->index;
    return MultiplicativeFunction("chi_of_tau", p, std::move(s));
  }
  if (name == "custom_file") {
    if (params.path.empty()) throw_input("custom_file needs a path");
    return custom_from_file(params.path);
  }
  throw_input("unknown catalog function '" + std::string(name) + "'");
}

MultiplicativeFunction custom_from_text(std::string_view text, std::string name) {
  auto table = std::make_shared<std::map<std::pair<std::uint64_t, unsigned>, cplx>>();
  bool default_one = true;
  bool unbounded = false;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "default:") {
      std::string v;
      ls >> v;
      if (v == "zero") default_one = false;
      else if (v == "one") default_one = true;
      else throw_input("line " + std::to_string(lineno) + ": default must be 'zero' or 'one'");
      continue;
    }
    if (first == "unbounded:") {
      std::string v;
      ls >> v;
      unbounded = (v == "true");
      continue;
    }
    std::uint64_t p = 0;
    unsigned k = 0;
    double re = 0, im = 0;
    std::istringstream full(line);
    if (!(full >> p >> k >> re >> im))
      throw_input("line " + std::to_string(lineno) + ": expected 'p k re im'");
    std::string extra;
    if (full >> extra) throw_input("line " + std::to_string(lineno) + ": trailing text '" + extra + "'");
    if (!is_prime(p)) throw_input("line " + std::to_string(lineno) + ": " + std::to_string(p) + " is not prime");
    if (k == 0) throw_input("line " + std::to_string(lineno) + ": exponent must be >= 1");
    cplx v(re, im);
    if (!unbounded && std::abs(v) > 1.0 + kBoundSlack)
      throw_input("line " + std::to_string(lineno) + ": |value| > 1 (add 'unbounded: true' to allow)");
    (*table)[{p, k}] = v;
  }
  PrimePowerSpec s;
  s.unbounded = unbounded;
  const cplx fallback = default_one ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
  s.rule = [table, fallback](std::uint64_t p, unsigned k) {
    auto it = table->find({p, k});
    return it == table->end() ? fallback : it->second;
  };
  Params params;
  params.path = name == "custom_file" ? std::string() : name;
  return MultiplicativeFunction("custom_file", params, std::move(s));
}

MultiplicativeFunction custom_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_input("cannot open custom function file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return custom_from_text(ss.str(), path);
}

}  // namespace multfun
