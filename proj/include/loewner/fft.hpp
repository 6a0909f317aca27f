// Minimal in-place radix-2 FFT, enough for the trigonometric interpolation
// and conjugation operators used by the conformal fitting code. Sizes must
// be powers of two.
#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace loewner {

using cxd = std::complex<double>;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline void fft_inplace(std::vector<cxd>& a, bool inverse) {
  const std::size_t n = a.size();
  if (!is_pow2(n)) throw std::invalid_argument("fft: size must be a power of two");
  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const double pi = 3.14159265358979323846;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    const cxd wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cxd w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cxd u = a[i + k];
        const cxd v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& x : a) x *= inv;
  }
}

// Forward DFT of real samples; returns full complex spectrum (length n).
inline std::vector<cxd> fft_real(const std::vector<double>& u) {
  std::vector<cxd> a(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) a[i] = cxd(u[i], 0.0);
  fft_inplace(a, false);
  return a;
}

// Circle conjugation operator: given real grid samples u_j on the uniform
// angle grid, returns the boundary values of the harmonic conjugate with
// zero mean (Fourier multiplier -i*sgn(n), Nyquist mode dropped).
inline std::vector<double> conjugate_periodic(const std::vector<double>& u) {
  const std::size_t n = u.size();
  std::vector<cxd> a = fft_real(u);
  a[0] = 0.0;
  for (std::size_t k = 1; k < n / 2; ++k) {
    a[k] *= cxd(0.0, -1.0);
    a[n - k] *= cxd(0.0, 1.0);
  }
  if (n % 2 == 0) a[n / 2] = 0.0;
  fft_inplace(a, true);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a[i].real();
  return v;
}

}  // namespace loewner
