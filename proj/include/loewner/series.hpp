// Truncated power-series arithmetic on coefficient vectors c[0..N].
// Used for log-derivatives of conformal maps and the exterior-map inversion.
#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "loewner/errors.hpp"

namespace loewner {

using series = std::vector<std::complex<double>>;

inline series series_mul(const series& a, const series& b, std::size_t n_out) {
  series c(n_out, 0.0);
  for (std::size_t i = 0; i < a.size() && i < n_out; ++i) {
    if (a[i] == std::complex<double>(0.0)) continue;
    const std::size_t jmax = std::min(b.size(), n_out - i);
    for (std::size_t j = 0; j < jmax; ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

// 1 / a with a[0] != 0, by the standard convolution recursion.
inline series series_reciprocal(const series& a, std::size_t n_out) {
  if (a.empty() || a[0] == std::complex<double>(0.0))
    throw SeriesLogFailure("series_reciprocal: vanishing constant term");
  series r(n_out, 0.0);
  r[0] = 1.0 / a[0];
  for (std::size_t n = 1; n < n_out; ++n) {
    std::complex<double> s = 0.0;
    const std::size_t kmax = std::min(n, a.size() - 1);
    for (std::size_t k = 1; k <= kmax; ++k) s += a[k] * r[n - k];
    r[n] = -s / a[0];
  }
  return r;
}

// log a with a[0] != 0 (principal branch of log a[0]).
// n*c_n = n*a_n/a_0 - sum_{k=1}^{n-1} k*c_k*a_{n-k}/a_0.
inline series series_log(const series& a, std::size_t n_out) {
  if (a.empty() || a[0] == std::complex<double>(0.0))
    throw SeriesLogFailure("series_log: vanishing constant term");
  series c(n_out, 0.0);
  c[0] = std::log(a[0]);
  for (std::size_t n = 1; n < n_out; ++n) {
    std::complex<double> an = n < a.size() ? a[n] : std::complex<double>(0.0);
    std::complex<double> s = static_cast<double>(n) * an / a[0];
    for (std::size_t k = 1; k < n; ++k) {
      std::complex<double> ank = (n - k) < a.size() ? a[n - k] : std::complex<double>(0.0);
      s -= static_cast<double>(k) * c[k] * ank / a[0];
    }
    c[n] = s / static_cast<double>(n);
  }
  return c;
}

inline std::complex<double> series_eval(const series& a, std::complex<double> z) {
  std::complex<double> r = 0.0;
  for (std::size_t i = a.size(); i-- > 0;) r = r * z + a[i];
  return r;
}

}  // namespace loewner
