#pragma once

#include <cstddef>
#include <vector>

#include "multfun/arith.hpp"

namespace multfun {

/// Unnormalized DFT X[k] = sum_n x[n] e(-nk/L) of any length L (radix-2, or
/// Bluestein for other lengths). `inverse` flips the sign of the exponent.
void dft_inplace(std::vector<cplx>& x, bool inverse = false);

std::size_t next_pow2(std::size_t n);

}  // namespace multfun
