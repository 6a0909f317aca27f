// Jordan curves given by a closed point list or by a trigonometric-polynomial
// boundary parametrization. Internally everything is reduced to the trig form
// z(tau) = center + sum_{0<|k|<=K} c_k e^{ik tau}; a point list is interpreted
// as uniform-parameter samples and converted by DFT.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "loewner/errors.hpp"
#include "loewner/fft.hpp"

namespace loewner {

struct CircleFit {
  cxd center;
  double radius = 0.0;
  double residual = 0.0;  // max | |p - center| - radius |
};

struct JordanCurve {
  cxd center{0.0, 0.0};
  // coeffs[K + k] = c_k for k in [-K, K]; c_0 slot unused (folded into center)
  std::vector<cxd> coeffs;
  int K = 0;
  bool reversed_input = false;  // input orientation was clockwise

  cxd eval(double tau) const {
    cxd z = center;
    const cxd e = std::polar(1.0, tau);
    cxd ep = e, em = std::conj(e);
    for (int k = 1; k <= K; ++k) {
      z += coeffs[K + k] * ep + coeffs[K - k] * em;
      ep *= e;
      em *= std::conj(e);
    }
    return z;
  }

  cxd deriv(double tau) const {
    cxd d = 0.0;
    const cxd e = std::polar(1.0, tau);
    cxd ep = e, em = std::conj(e);
    for (int k = 1; k <= K; ++k) {
      d += cxd(0, k) * (coeffs[K + k] * ep - coeffs[K - k] * em);
      ep *= e;
      em *= std::conj(e);
    }
    return d;
  }

  std::vector<cxd> samples(std::size_t m) const {
    std::vector<cxd> p(m);
    for (std::size_t j = 0; j < m; ++j) p[j] = eval(2.0 * kPiCurve * j / m);
    return p;
  }

  // signed area = pi * sum k |c_k|^2; positive for counterclockwise curves
  double signed_area() const {
    double a = 0.0;
    for (int k = -K; k <= K; ++k)
      if (k != 0) a += k * std::norm(coeffs[K + k]);
    return kPiCurve * a;
  }

  // area centroid from the boundary moment integral (1/2i) oint |w|^2 dw
  cxd centroid() const {
    const std::size_t m = grid_size();
    cxd moment = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double tau = 2.0 * kPiCurve * j / m;
      const cxd z = eval(tau), dz = deriv(tau);
      moment += std::norm(z) * dz;
    }
    moment *= 2.0 * kPiCurve / m / cxd(0.0, 2.0);
    return moment / signed_area();
  }

  double diameter() const {
    const auto p = samples(256);
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = i + 1; j < p.size(); ++j) d = std::max(d, std::abs(p[i] - p[j]));
    return d;
  }

  JordanCurve reversed() const {
    JordanCurve c = *this;
    for (int k = 1; k <= K; ++k) std::swap(c.coeffs[K + k], c.coeffs[K - k]);
    c.reversed_input = !reversed_input;
    return c;
  }

  JordanCurve translated(cxd delta) const {
    JordanCurve c = *this;
    c.center += delta;
    return c;
  }

  JordanCurve scaled(double lambda) const {
    JordanCurve c = *this;
    c.center *= lambda;
    for (auto& v : c.coeffs) v *= lambda;
    return c;
  }

  JordanCurve rotated(double beta) const {
    JordanCurve c = *this;
    const cxd r = std::polar(1.0, beta);
    c.center *= r;
    for (auto& v : c.coeffs) v *= r;
    return c;
  }

  void validate() const {
    if (K < 1) throw ParseError("curve: empty coefficient list");
    const std::size_t m = grid_size();
    // derivative must not vanish on a 4K grid (regular parametrization)
    double dmin = 1e300, zmax = 0.0;
    for (std::size_t j = 0; j < std::max<std::size_t>(4 * K, 64); ++j) {
      const double tau = 2.0 * kPiCurve * j / std::max<std::size_t>(4 * K, 64);
      dmin = std::min(dmin, std::abs(deriv(tau)));
      zmax = std::max(zmax, std::abs(eval(tau)) + 1.0);
    }
    if (!(dmin > 1e-12 * zmax))
      throw ParseError("curve: parametrization derivative vanishes on the check grid");
    if (std::abs(signed_area()) <= 0.0) throw ParseError("curve: degenerate (zero area)");
    // winding about the centroid must be +-1
    const cxd c0 = centroid();
    double accum = 0.0;
    cxd prev = eval(0.0) - c0;
    for (std::size_t j = 1; j <= m; ++j) {
      const cxd cur = eval(2.0 * kPiCurve * j / m) - c0;
      accum += std::arg(cur / prev);
      prev = cur;
    }
    const double winding = accum / (2.0 * kPiCurve);
    if (std::abs(std::abs(winding) - 1.0) > 1e-6)
      throw ParseError("curve: winding number about the centroid is not +-1");
    // simplicity at sample resolution
    const auto p = samples(std::min<std::size_t>(m, 512));
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) {
      const cxd a0 = p[i], a1 = p[(i + 1) % n];
      for (std::size_t j = i + 2; j < n; ++j) {
        if (i == 0 && j == n - 1) continue;  // adjacent through the wrap
        const cxd b0 = p[j], b1 = p[(j + 1) % n];
        const double d = seg_dist(a0, a1, b0, b1);
        if (d == 0.0) throw ParseError("curve: self-intersection at sample resolution");
      }
    }
  }

  CircleFit fit_circle() const {
    // Kasa least squares: |p|^2 = 2 Re(conj(c) p) + d
    const auto p = samples(256);
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0, sr = 0, srx = 0, sry = 0;
    for (const cxd& z : p) {
      const double x = z.real(), y = z.imag(), r2 = std::norm(z);
      sx += x; sy += y; sxx += x * x; syy += y * y; sxy += x * y;
      sr += r2; srx += r2 * x; sry += r2 * y;
    }
    const double n = static_cast<double>(p.size());
    // normal equations for (2cx, 2cy, d)
    double A[3][3] = {{sxx, sxy, sx}, {sxy, syy, sy}, {sx, sy, n}};
    double rhs[3] = {srx, sry, sr};
    // gaussian elimination, 3x3
    for (int i = 0; i < 3; ++i) {
      int piv = i;
      for (int r = i + 1; r < 3; ++r)
        if (std::abs(A[r][i]) > std::abs(A[piv][i])) piv = r;
      std::swap(A[i], A[piv]);
      std::swap(rhs[i], rhs[piv]);
      for (int r = i + 1; r < 3; ++r) {
        const double f = A[r][i] / A[i][i];
        for (int c2 = i; c2 < 3; ++c2) A[r][c2] -= f * A[i][c2];
        rhs[r] -= f * rhs[i];
      }
    }
    double sol[3];
    for (int i = 2; i >= 0; --i) {
      double s = rhs[i];
      for (int c2 = i + 1; c2 < 3; ++c2) s -= A[i][c2] * sol[c2];
      sol[i] = s / A[i][i];
    }
    CircleFit fit;
    fit.center = cxd(sol[0] / 2.0, sol[1] / 2.0);
    fit.radius = std::sqrt(std::max(0.0, sol[2] + std::norm(fit.center)));
    for (const cxd& z : p)
      fit.residual = std::max(fit.residual, std::abs(std::abs(z - fit.center) - fit.radius));
    return fit;
  }

  std::size_t grid_size() const {
    std::size_t m = 256;
    while (m < static_cast<std::size_t>(8 * K)) m *= 2;
    return m;
  }

 private:
  static constexpr double kPiCurve = 3.14159265358979323846;

  static double seg_dist(cxd a0, cxd a1, cxd b0, cxd b1) {
    auto clamp01 = [](double u) { return std::max(0.0, std::min(1.0, u)); };
    auto pseg = [&](cxd p, cxd s0, cxd s1) {
      const cxd d = s1 - s0;
      const double l2 = std::norm(d);
      const double u = l2 == 0.0 ? 0.0 : clamp01(((p - s0) * std::conj(d)).real() / l2);
      return std::abs(p - (s0 + u * d));
    };
    return std::min(std::min(pseg(a0, b0, b1), pseg(a1, b0, b1)),
                    std::min(pseg(b0, a0, a1), pseg(b1, a0, a1)));
  }
};

// -- constructors -----------------------------------------------------------

inline JordanCurve curve_from_trig(cxd center, int K, const std::vector<cxd>& coeffs) {
  JordanCurve c;
  c.center = center;
  c.K = K;
  c.coeffs = coeffs;
  if (coeffs.size() != static_cast<std::size_t>(2 * K + 1))
    throw ParseError("curve: coeffs must have length 2K+1");
  return c;
}

inline JordanCurve curve_circle(cxd center, double radius) {
  JordanCurve c;
  c.center = center;
  c.K = 1;
  c.coeffs = {cxd(0.0), cxd(0.0), cxd(radius, 0.0)};
  return c;
}

// Image of the unit circle under w -> center + scale (w + c / w): an ellipse
// with semi-axes scale(1+c), scale(1-c) for real c in (0,1).
inline JordanCurve curve_joukowski(double c, double scale = 1.0, cxd center = 0.0) {
  JordanCurve cv;
  cv.center = center;
  cv.K = 1;
  cv.coeffs = {cxd(scale * c, 0.0), cxd(0.0), cxd(scale, 0.0)};
  return cv;
}

// Uniform-parameter closed point list -> trig polynomial through the points.
inline JordanCurve curve_from_points(const std::vector<cxd>& pts) {
  const std::size_t m = pts.size();
  if (m < 8) throw ParseError("curve: need at least 8 points");
  std::vector<cxd> hat(m);
  if (is_pow2(m)) {
    hat = pts;
    fft_inplace(hat, false);
    for (auto& h : hat) h /= static_cast<double>(m);
  } else {
    const double pi = 3.14159265358979323846;
    for (std::size_t k = 0; k < m; ++k) {
      cxd s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += pts[j] * std::polar(1.0, -2.0 * pi * double(k * j % m) / m);
      hat[k] = s / static_cast<double>(m);
    }
  }
  const int K = static_cast<int>((m - 1) / 2);
  JordanCurve c;
  c.center = hat[0];
  c.K = K;
  c.coeffs.assign(2 * K + 1, cxd(0.0));
  for (int k = 1; k <= K; ++k) {
    c.coeffs[K + k] = hat[k];
    c.coeffs[K - k] = hat[m - k];
  }
  return c;
}

// Canonical counterclockwise orientation; records whether the input was
// reversed.
inline JordanCurve canonical_ccw(const JordanCurve& c) {
  return c.signed_area() >= 0.0 ? c : c.reversed();
}

// Mobius image z -> (a z + b) / (cz z + d), resampled as a point list.
inline JordanCurve curve_mobius_image(const JordanCurve& curve, cxd a, cxd b, cxd cc, cxd d,
                                      std::size_t m = 512) {
  if (std::abs(a * d - b * cc) < 1e-14) throw DomainError("mobius: singular coefficient matrix");
  std::vector<cxd> pts(m);
  for (std::size_t j = 0; j < m; ++j) {
    const cxd z = curve.eval(2.0 * 3.14159265358979323846 * j / m);
    const cxd den = cc * z + d;
    if (std::abs(den) < 1e-12) throw DomainError("mobius: pole on the curve");
    pts[j] = (a * z + b) / den;
  }
  return curve_from_points(pts);
}

}  // namespace loewner
