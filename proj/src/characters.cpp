#include "multfun/characters.hpp"

#include <numeric>

#include "multfun/error.hpp"

namespace multfun {

namespace {

// One cyclic factor of (Z/qZ)*, living on the prime-power component p^e of q.
struct CyclicFactor {
  std::uint64_t prime_power;
  std::uint64_t order;
  // Discrete log of a residue mod prime_power in this factor; -1 if not coprime.
  std::vector<std::int64_t> log;
};

std::uint64_t primitive_root_mod_prime(std::uint64_t p) {
  if (p == 2) return 1;
  auto divisors = factorize(p - 1);
  for (std::uint64_t g = 2;; ++g) {
    bool ok = true;
    for (auto [r, k] : divisors) {
      if (powmod(g, (p - 1) / r, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
}

std::vector<CyclicFactor> decompose_unit_group(std::uint64_t q) {
  std::vector<CyclicFactor> factors;
  for (auto [p, e] : factorize(q)) {
    std::uint64_t pe = 1;
    for (unsigned i = 0; i < e; ++i) pe *= p;
    if (p == 2) {
      if (e == 1) continue;  // (Z/2Z)* is trivial
      // -1 generates the order-2 factor; 5 generates the rest when e >= 3.
      CyclicFactor minus{pe, 2, std::vector<std::int64_t>(pe, -1)};
      CyclicFactor five{pe, e >= 3 ? pe / 4 : 1, std::vector<std::int64_t>(pe, -1)};
      std::vector<std::int64_t> five_log(pe, -1);
      std::uint64_t x = 1;
      for (std::uint64_t b = 0; b < five.order; ++b) {
        five_log[x] = static_cast<std::int64_t>(b);
        x = x * 5 % pe;
      }
      for (std::uint64_t r = 1; r < pe; r += 2) {
        bool neg = (r % 4 == 3);
        minus.log[r] = neg ? 1 : 0;
        std::uint64_t m = neg ? pe - r : r;
        five.log[r] = five_log[m];
      }
      factors.push_back(std::move(minus));
      if (e >= 3) factors.push_back(std::move(five));
    } else {
      std::uint64_t g = primitive_root_mod_prime(p);
      if (e >= 2 && powmod(g, p - 1, p * p) == 1) g += p;
      std::uint64_t order = pe / p * (p - 1);
      CyclicFactor f{pe, order, std::vector<std::int64_t>(pe, -1)};
      std::uint64_t x = 1;
      for (std::uint64_t a = 0; a < order; ++a) {
        f.log[x] = static_cast<std::int64_t>(a);
        x = mulmod(x, g, pe);
      }
      factors.push_back(std::move(f));
    }
  }
  return factors;
}

DirichletCharacter build(std::uint64_t q, const std::vector<CyclicFactor>& factors,
                         const std::vector<std::uint64_t>& exps, std::size_t index) {
  DirichletCharacter chi;
  chi.modulus = q;
  chi.phi = 1;
  for (const auto& f : factors) chi.phi *= f.order;
  chi.index = index;
  chi.table.assign(q, cplx(0.0, 0.0));
  chi.exponent.assign(q, -1);
  chi.order = 1;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    std::uint64_t o = factors[i].order / std::gcd(exps[i], factors[i].order);
    chi.order = std::lcm(chi.order, o);
  }
  chi.is_principal = chi.order == 1;
  auto phi = static_cast<std::int64_t>(chi.phi);
  for (std::uint64_t r = 0; r < q; ++r) {
    if (std::gcd(r, q) != 1) continue;
    std::int64_t e = 0;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const auto& f = factors[i];
      std::int64_t lg = f.log[r % f.prime_power];
      auto scale = static_cast<std::int64_t>(chi.phi / f.order);
      e = (e + static_cast<std::int64_t>(mulmod(static_cast<std::uint64_t>(lg), exps[i], f.order)) * scale) % phi;
    }
    chi.exponent[r] = e;
    chi.table[r] = unit_fraction(e, phi);
  }
  if (q == 1) {
    chi.exponent[0] = 0;
    chi.table[0] = cplx(1.0, 0.0);
  }
  return chi;
}

std::vector<std::uint64_t> exponents_for_index(const std::vector<CyclicFactor>& factors, std::size_t index) {
  std::vector<std::uint64_t> exps(factors.size(), 0);
  for (std::size_t i = factors.size(); i-- > 0;) {
    exps[i] = index % factors[i].order;
    index /= factors[i].order;
  }
  return exps;
}

void check_modulus(std::uint64_t q) {
  if (q == 0) throw_input("character modulus must be positive");
  if (q > 1000000) throw_input("character modulus " + std::to_string(q) + " exceeds 10^6");
}

}  // namespace

DirichletCharacter DirichletCharacter::conj() const {
  DirichletCharacter c = *this;
  auto phi_i = static_cast<std::int64_t>(phi);
  for (std::size_t r = 0; r < table.size(); ++r) {
    c.table[r] = std::conj(table[r]);
    if (exponent[r] > 0) c.exponent[r] = phi_i - exponent[r];
  }
  c.index = npos;
  return c;
}

std::string DirichletCharacter::label() const {
  std::string s = "chi_" + std::to_string(modulus);
  if (index != npos) s += "#" + std::to_string(index);
  return s;
}

std::vector<DirichletCharacter> characters_mod(std::uint64_t q) {
  check_modulus(q);
  std::uint64_t phi = euler_phi(q);
  if (static_cast<double>(phi) * static_cast<double>(q) > 5e8)
    throw_resource("character group mod " + std::to_string(q) + " is too large to tabulate in full");
  auto factors = decompose_unit_group(q);
  std::vector<DirichletCharacter> result;
  result.reserve(phi);
  for (std::size_t idx = 0; idx < phi; ++idx)
    result.push_back(build(q, factors, exponents_for_index(factors, idx), idx));
  return result;
}

DirichletCharacter character_mod(std::uint64_t q, std::size_t index) {
  check_modulus(q);
  std::uint64_t phi = euler_phi(q);
  if (index >= phi)
    throw_input("character index " + std::to_string(index) + " out of range for modulus " + std::to_string(q));
  auto factors = decompose_unit_group(q);
  return build(q, factors, exponents_for_index(factors, index), index);
}

DirichletCharacter principal_character(std::uint64_t q) { return character_mod(q, 0); }

DirichletCharacter induce(const DirichletCharacter& chi, std::uint64_t k) {
  if (k == 0 || k % chi.modulus != 0)
    throw_input("cannot induce a character mod " + std::to_string(chi.modulus) + " to modulus " +
                std::to_string(k) + ": not a multiple");
  check_modulus(k);
  DirichletCharacter out;
  out.modulus = k;
  out.phi = euler_phi(k);
  out.order = chi.order;
  out.is_principal = chi.is_principal;
  out.index = (k == chi.modulus) ? chi.index : DirichletCharacter::npos;
  out.table.assign(k, cplx(0.0, 0.0));
  out.exponent.assign(k, -1);
  auto scale = static_cast<std::int64_t>(out.phi / chi.phi);
  for (std::uint64_t r = 0; r < k; ++r) {
    if (std::gcd(r, k) != 1) continue;
    out.table[r] = chi(r);
    out.exponent[r] = chi.exponent_at(r) * scale;
  }
  if (k == 1) {
    out.table[0] = cplx(1.0, 0.0);
    out.exponent[0] = 0;
  }
  return out;
}

std::vector<DecompositionTerm> indicator_decomposition(std::uint64_t q, std::uint64_t r) {
  check_modulus(q);
  if (std::gcd(q, r) != 1)
    throw_input("indicator of " + std::to_string(r) + " mod " + std::to_string(q) +
                " has no character decomposition: gcd(q, r) > 1");
  std::vector<DecompositionTerm> terms;
  for (auto& chi : characters_mod(q)) {
    cplx coeff = std::conj(chi(r)) / static_cast<double>(chi.phi);
    terms.push_back({std::move(chi), coeff});
  }
  return terms;
}

std::size_t generating_character_index(std::uint64_t q) {
  check_modulus(q);
  auto factors = decompose_unit_group(q);
  std::uint64_t phi = euler_phi(q);
  for (std::size_t idx = 0; idx < phi; ++idx) {
    auto exps = exponents_for_index(factors, idx);
    std::uint64_t order = 1;
    for (std::size_t i = 0; i < factors.size(); ++i)
      order = std::lcm(order, factors[i].order / std::gcd(exps[i], factors[i].order));
    if (order == phi) return idx;
  }
  throw_input("(Z/" + std::to_string(q) + "Z)* is not cyclic; no character generates its dual");
}

}  // namespace multfun
