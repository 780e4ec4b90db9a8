#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "multfun/arith.hpp"

namespace multfun {

/// Dirichlet character stored as a dense residue table.
///
/// Nonzero values are phi(q)-th roots of unity; `exponent[r]` holds the exact
/// numerator e with chi(r) = e(e / phi(q)), or -1 where gcd(r, q) > 1.
struct DirichletCharacter {
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  std::uint64_t modulus = 1;
  std::uint64_t phi = 1;
  std::vector<cplx> table{cplx(1.0, 0.0)};
  std::vector<std::int64_t> exponent{0};
  std::uint64_t order = 1;
  bool is_principal = true;
  /// Position in characters_mod(modulus); npos for characters built by induce().
  std::size_t index = 0;

  cplx operator()(std::uint64_t n) const { return table[n % modulus]; }
  std::int64_t exponent_at(std::uint64_t n) const { return exponent[n % modulus]; }
  DirichletCharacter conj() const;
  std::string label() const;
};

/// All phi(q) characters mod q; the principal one first, then lexicographic in
/// the exponent vector over the cyclic decomposition of (Z/qZ)*.
std::vector<DirichletCharacter> characters_mod(std::uint64_t q);

/// The character at position `index` of characters_mod(q), built on its own.
DirichletCharacter character_mod(std::uint64_t q, std::size_t index);

DirichletCharacter principal_character(std::uint64_t q);

/// chi * chi_1 with chi_1 principal mod k; requires modulus(chi) | k.
DirichletCharacter induce(const DirichletCharacter& chi, std::uint64_t k);

struct DecompositionTerm {
  DirichletCharacter chi;
  cplx coefficient;
};

/// 1_{n = r mod q} = sum over chi of conj(chi(r)) / phi(q) * chi(n), for gcd(n, q) = 1.
std::vector<DecompositionTerm> indicator_decomposition(std::uint64_t q, std::uint64_t r);

/// Smallest index of a character mod q whose order equals phi(q); requires (Z/qZ)* cyclic.
std::size_t generating_character_index(std::uint64_t q);

}  // namespace multfun
