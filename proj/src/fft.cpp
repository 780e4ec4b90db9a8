#include "multfun/fft.hpp"

#include <utility>

namespace multfun {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

namespace {

void radix2(std::vector<cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  // Twiddles from exact residues, one table for the largest stage.
  std::vector<cplx> w(n / 2);
  const auto nn = static_cast<std::int64_t>(n);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const auto kk = static_cast<std::int64_t>(k);
    w[k] = unit_fraction(inverse ? kk : -kk, nn);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2, stride = n / len;
    for (std::size_t i = 0; i < n; i += len)
      for (std::size_t k = 0; k < half; ++k) {
        cplx u = a[i + k], v = a[i + k + half] * w[k * stride];
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
  }
}

void bluestein(std::vector<cplx>& x, bool inverse) {
  const std::size_t n = x.size();
  const std::size_t m = next_pow2(2 * n - 1);
  const auto two_n = static_cast<std::int64_t>(2 * n);
  std::vector<cplx> chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    // k^2 mod 2n in integers keeps the phase exact for large k.
    auto kk = static_cast<unsigned __int128>(k) * k % static_cast<unsigned __int128>(two_n);
    auto r = static_cast<std::int64_t>(kk);
    chirp[k] = unit_fraction(inverse ? r : -r, two_n);
  }
  std::vector<cplx> a(m), b(m);
  for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
  b[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(chirp[k]);
  radix2(a, false);
  radix2(b, false);
  for (std::size_t i = 0; i < m; ++i) a[i] *= b[i];
  radix2(a, true);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < n; ++k) x[k] = a[k] * scale * chirp[k];
}

}  // namespace

void dft_inplace(std::vector<cplx>& x, bool inverse) {
  const std::size_t n = x.size();
  if (n <= 1) return;
  if ((n & (n - 1)) == 0)
    radix2(x, inverse);
  else
    bluestein(x, inverse);
}

}  // namespace multfun
