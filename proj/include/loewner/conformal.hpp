// Numerical conformal maps of the two complementary Jordan domains.
//
// Fast path: Theodorsen conjugate-function iteration with trigonometric
// interpolation, for curves star-shaped about the base point. The boundary
// correspondence phi(theta) of f(e^{i theta}) = w0 + rho(phi) e^{i phi}
// satisfies phi = theta + K[log rho o phi] with K the circle conjugation
// operator; the fixed point is found by (damped) Picard iteration on a
// uniform grid and the map coefficients follow by FFT.
//
// Fallback for general simple curves: analytic-projection iteration
// (alternate between killing the negative Fourier modes of the boundary data
// and re-projecting onto the curve). Slower and less accurate; only used
// when the star-shape test fails.
//
// The exterior map g : D* -> exterior is obtained from an interior fit of
// the inverted region 1/(curve - w0) and a series reciprocal.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "loewner/curve.hpp"
#include "loewner/errors.hpp"
#include "loewner/fft.hpp"
#include "loewner/series.hpp"

namespace loewner {

// f(z) = w0 + sum_{n>=1} a_n z^n on the unit disk; a[0] is kept zero.
struct DiskMapSeries {
  cxd w0{0.0, 0.0};
  std::vector<cxd> a;  // a[n] multiplies z^n

  int order() const { return static_cast<int>(a.size()) - 1; }
  cxd fprime0() const { return a.size() > 1 ? a[1] : cxd(0.0); }

  cxd eval(cxd z) const {
    cxd s = 0.0;
    for (std::size_t n = a.size(); n-- > 1;) s = (s + a[n]) * z;
    return w0 + s;
  }

  cxd deriv(cxd z) const {
    cxd s = 0.0;
    for (std::size_t n = a.size(); n-- > 2;) s = (s + double(n) * a[n]) * z;
    return s + (a.size() > 1 ? a[1] : cxd(0.0));
  }

  // univalence proxy: f' nonvanishing on the circle r = 1 - 1/(4N)
  bool derivative_nonvanishing() const {
    const int N = std::max(order(), 4);
    const double r = 1.0 - 1.0 / (4.0 * N);
    for (int j = 0; j < 4 * N; ++j) {
      const cxd z = std::polar(r, 2.0 * kPi * j / (4.0 * N));
      if (std::abs(deriv(z)) < 1e-13 * std::abs(a[1])) return false;
    }
    return true;
  }

  // number of zeros of f' inside |z| < 1 - 1/(4N), by the argument principle
  int derivative_zero_count() const {
    const int N = std::max(order(), 4);
    const double r = 1.0 - 1.0 / (4.0 * N);
    const int m = 8 * N;
    double acc = 0.0;
    cxd prev = deriv(std::polar(r, 0.0));
    for (int j = 1; j <= m; ++j) {
      const cxd cur = deriv(std::polar(r, 2.0 * kPi * j / m));
      acc += std::arg(cur / prev);
      prev = cur;
    }
    return static_cast<int>(std::lround(acc / (2.0 * kPi)));
  }
};

// g(z) = b1 z + b0 + sum_{n>=1} b_{-n} z^{-n} on |z| > 1, g(inf) = inf.
struct ExteriorMapSeries {
  double b1 = 1.0;  // g'(inf) > 0
  cxd b0{0.0, 0.0};
  std::vector<cxd> bneg;  // bneg[k] = b_{-(k+1)}

  int order() const { return static_cast<int>(bneg.size()); }
  double gprime_inf() const { return b1; }

  cxd eval(cxd z) const {
    const cxd w = 1.0 / z;
    cxd s = 0.0;
    for (std::size_t k = bneg.size(); k-- > 0;) s = (s + bneg[k]) * w;
    return b1 * z + b0 + s;
  }

  cxd deriv(cxd z) const {
    const cxd w = 1.0 / z;
    cxd s = 0.0;
    for (std::size_t k = bneg.size(); k-- > 0;) s = (s + double(k + 1) * bneg[k]) * w;
    return b1 - s * w;
  }

  bool derivative_nonvanishing() const {
    const int N = std::max(order(), 4);
    const double r = 1.0 + 1.0 / (4.0 * N);
    for (int j = 0; j < 4 * N; ++j) {
      const cxd z = std::polar(r, 2.0 * kPi * j / (4.0 * N));
      if (std::abs(deriv(z)) < 1e-13 * b1) return false;
    }
    return true;
  }

  // zeros of g' in |z| > 1 + 1/(4N): winding of g' minus the pole count of
  // g'' .. none; g' -> b1 at infinity, so the winding on the circle counts
  // zeros outside directly (traversed clockwise as boundary of the exterior)
  int derivative_zero_count() const {
    const int N = std::max(order(), 4);
    const double r = 1.0 + 1.0 / (4.0 * N);
    const int m = 8 * N;
    double acc = 0.0;
    cxd prev = deriv(std::polar(r, 0.0));
    for (int j = 1; j <= m; ++j) {
      const cxd cur = deriv(std::polar(r, 2.0 * kPi * j / m));
      acc += std::arg(cur / prev);
      prev = cur;
    }
    // g'(z) = b1 + O(z^-2): winding along |z| = r equals -(zeros outside)
    return -static_cast<int>(std::lround(acc / (2.0 * kPi)));
  }
};

enum class FitMethod { automatic, theodorsen, projection };

struct FitOptions {
  FitMethod method = FitMethod::automatic;
  int grid = 0;          // collocation grid size; 0 = auto (power of two >= 4N)
  int max_iter = 4000;
  double tol = 1e-13;    // sup-norm fixed-point residual target
};

struct FitDiagnostics {
  double boundary_error = 0.0;  // max_j |f(e^{i theta_j}) - nearest curve point|
  double residual = 0.0;
  int iterations = 0;
  bool used_fallback = false;
};

// Parametrized boundary handed to the fitters.
struct BoundaryParam {
  std::function<cxd(double)> eval;
  std::function<cxd(double)> deriv;
};

inline BoundaryParam boundary_of(const JordanCurve& c) {
  return BoundaryParam{[c](double t) { return c.eval(t); },
                       [c](double t) { return c.deriv(t); }};
}

namespace detail {

// Unwrapped polar angle of P(tau) - w0 on a fine grid, plus inversion.
struct AngleTable {
  std::vector<double> tau, ang;
  double a0 = 0.0;
  const BoundaryParam* P = nullptr;
  cxd w0;

  static AngleTable build(const BoundaryParam& P, cxd w0, std::size_t m) {
    AngleTable t;
    t.P = &P;
    t.w0 = w0;
    t.tau.resize(m + 1);
    t.ang.resize(m + 1);
    cxd prev = P.eval(0.0) - w0;
    t.a0 = std::arg(prev);
    double acc = t.a0;
    t.tau[0] = 0.0;
    t.ang[0] = acc;
    for (std::size_t j = 1; j <= m; ++j) {
      const double tj = 2.0 * kPi * j / m;
      const cxd cur = P.eval(tj) - w0;
      acc += std::arg(cur / prev);
      prev = cur;
      t.tau[j] = tj;
      t.ang[j] = acc;
    }
    // strict monotonicity of the polar angle == star-shaped about w0
    for (std::size_t j = 1; j <= m; ++j)
      if (!(t.ang[j] > t.ang[j - 1]))
        throw NotStarShaped("fit: curve is not star-shaped about the base point");
    if (std::abs(t.ang[m] - t.a0 - 2.0 * kPi) > 1e-8)
      throw NotStarShaped("fit: polar angle winding is not one turn");
    return t;
  }

  // tau with arg(P(tau) - w0) == phi (mod 2 pi), by table lookup + Newton
  double invert(double phi) const {
    const double twopi = 2.0 * kPi;
    double ph = phi - twopi * std::floor((phi - a0) / twopi);
    // binary search on the unwrapped table
    std::size_t lo = 0, hi = ang.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (ang[mid] <= ph ? lo : hi) = mid;
    }
    const double span = ang[hi] - ang[lo];
    double t = tau[lo] + (tau[hi] - tau[lo]) * (span > 0 ? (ph - ang[lo]) / span : 0.5);
    const cxd target = std::polar(1.0, ph);
    for (int it = 0; it < 8; ++it) {
      const cxd v = P->eval(t) - w0;
      const double err = std::arg(v * std::conj(target));
      if (std::abs(err) < 1e-15) break;
      const double dang = (P->deriv(t) / v).imag();
      if (!(dang > 0.0)) break;
      t -= err / dang;
    }
    return t;
  }
};

struct TheodorsenResult {
  std::vector<cxd> boundary;  // on-curve collocation values
  std::vector<double> phi;    // boundary angles
  double residual = 0.0;
  int iterations = 0;
};

inline TheodorsenResult theodorsen_iterate(const BoundaryParam& P, cxd w0, std::size_t m,
                                           const FitOptions& opt) {
  const AngleTable table = AngleTable::build(P, w0, std::max<std::size_t>(4 * m, 4096));
  std::vector<double> theta(m), phi(m), u(m);
  for (std::size_t j = 0; j < m; ++j) theta[j] = phi[j] = 2.0 * kPi * j / m;

  auto rho = [&](double ph) { return std::abs(P.eval(table.invert(ph)) - w0); };

  TheodorsenResult out;
  double lambda = 1.0;
  double prev_res = 1e300;
  for (int it = 0; it < opt.max_iter; ++it) {
    for (std::size_t j = 0; j < m; ++j) u[j] = std::log(rho(phi[j]));
    const std::vector<double> v = conjugate_periodic(u);
    double res = 0.0;
    for (std::size_t j = 0; j < m; ++j) res = std::max(res, std::abs(theta[j] + v[j] - phi[j]));
    out.iterations = it + 1;
    out.residual = res;
    if (res < opt.tol) break;
    if (res > prev_res * 1.2 && lambda > 0.2) lambda *= 0.5;
    prev_res = res;
    for (std::size_t j = 0; j < m; ++j) phi[j] += lambda * (theta[j] + v[j] - phi[j]);
  }
  if (out.residual > std::max(opt.tol, 1e-9))
    throw NoConvergence("theodorsen: iteration stalled, residual " + std::to_string(out.residual));

  out.boundary.resize(m);
  out.phi = phi;
  for (std::size_t j = 0; j < m; ++j) {
    const double t = table.invert(phi[j]);
    out.boundary[j] = P.eval(t);
  }
  return out;
}

// Analytic-projection fallback: works for any smooth simple curve, at
// reduced accuracy.
inline TheodorsenResult projection_iterate(const BoundaryParam& P, cxd w0, std::size_t m,
                                           const FitOptions& opt) {
  std::vector<double> tau(m);
  for (std::size_t j = 0; j < m; ++j) tau[j] = 2.0 * kPi * j / m;
  std::vector<cxd> F(m);
  TheodorsenResult out;
  double scale = 1.0;
  for (std::size_t j = 0; j < m; ++j) scale = std::max(scale, std::abs(P.eval(tau[j]) - w0));
  for (int it = 0; it < opt.max_iter; ++it) {
    for (std::size_t j = 0; j < m; ++j) F[j] = P.eval(tau[j]) - w0;
    std::vector<cxd> hat = F;
    fft_inplace(hat, false);
    for (auto& h : hat) h /= double(m);
    hat[0] = 0.0;  // f(0) = w0
    for (std::size_t k = m / 2; k < m; ++k) hat[k] = 0.0;
    std::vector<cxd> G = hat;
    for (auto& g : G) g *= double(m);
    fft_inplace(G, true);
    double res = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      // project the analytic prediction back onto the curve
      double t = tau[j];
      const cxd target = G[j] + w0;
      for (int nw = 0; nw < 3; ++nw) {
        const cxd d = P.deriv(t);
        const cxd r = target - P.eval(t);
        const double step = (r * std::conj(d)).real() / std::norm(d);
        t += step;
      }
      res = std::max(res, std::abs(target - P.eval(t)) / scale);
      tau[j] = t;
    }
    out.iterations = it + 1;
    out.residual = res;
    if (res < std::max(opt.tol, 1e-12)) break;
  }
  if (out.residual > 1e-5)
    throw NoConvergence("projection fit: residual " + std::to_string(out.residual));
  out.boundary.resize(m);
  out.phi.assign(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) out.boundary[j] = P.eval(tau[j]);
  return out;
}

inline bool star_shaped_about(const BoundaryParam& P, cxd w0, std::size_t grid) {
  cxd prev = P.eval(0.0) - w0;
  if (std::abs(prev) == 0.0) return false;
  for (std::size_t j = 1; j <= grid; ++j) {
    const cxd cur = P.eval(2.0 * kPi * j / grid) - w0;
    if (std::abs(cur) == 0.0) return false;
    const cxd d = P.deriv(2.0 * kPi * j / grid);
    if (!((d / cur).imag() > 0.0)) return false;
    prev = cur;
  }
  return true;
}

inline std::size_t fit_grid_size(int N, int requested) {
  std::size_t m = 512;  // boundary data aliasing decays slowly for eccentric curves
  const std::size_t want = requested > 0 ? std::size_t(requested) : std::size_t(4 * N);
  while (m < want) m *= 2;
  return m;
}

// Shared: collocation values -> normalized power series about w0.
inline DiskMapSeries series_from_boundary(const std::vector<cxd>& boundary, cxd w0, int N,
                                          FitDiagnostics* diag) {
  const std::size_t m = boundary.size();
  std::vector<cxd> hat(m);
  for (std::size_t j = 0; j < m; ++j) hat[j] = boundary[j] - w0;
  fft_inplace(hat, false);
  for (auto& h : hat) h /= double(m);
  DiskMapSeries f;
  f.w0 = w0;
  f.a.assign(std::min<std::size_t>(N, m / 2 - 1) + 1, cxd(0.0));
  for (std::size_t n = 1; n < f.a.size(); ++n) f.a[n] = hat[n];
  // rotation normalization: a_1 real and positive
  const double sigma = -std::arg(f.a[1]);
  for (std::size_t n = 1; n < f.a.size(); ++n) f.a[n] *= std::polar(1.0, sigma * double(n));
  f.a[1] = cxd(std::abs(f.a[1]), 0.0);
  if (diag) {
    double neg = 0.0;
    for (std::size_t k = m / 2 + 1; k < m; ++k) neg = std::max(neg, std::abs(hat[k]));
    diag->residual = std::max(diag->residual, neg);
  }
  return f;
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline DiskMapSeries fit_interior_map(const JordanCurve& curve_in, int N,
                                      const FitOptions& opt = {}, FitDiagnostics* diag = nullptr) {
  if (N < 2) throw DomainError("fit_interior_map: order must be >= 2");
  const JordanCurve curve = canonical_ccw(curve_in);
  const cxd w0 = curve.centroid();
  const BoundaryParam P = boundary_of(curve);
  const std::size_t m = detail::fit_grid_size(N, opt.grid);
  const bool star = detail::star_shaped_about(P, w0, std::max<std::size_t>(8 * N, 512));

  FitDiagnostics local;
  FitDiagnostics* d = diag ? diag : &local;
  detail::TheodorsenResult res;
  if (opt.method == FitMethod::theodorsen || (opt.method == FitMethod::automatic && star)) {
    if (!star) throw NotStarShaped("fit_interior_map: not star-shaped about the centroid");
    res = detail::theodorsen_iterate(P, w0, m, opt);
  } else {
    res = detail::projection_iterate(P, w0, m, opt);
    d->used_fallback = true;
  }
  d->iterations = res.iterations;
  d->residual = res.residual;
  DiskMapSeries f = detail::series_from_boundary(res.boundary, w0, N, d);

  // boundary error on a shifted grid, measured against the curve by angle
  if (star) {
    const detail::AngleTable table = detail::AngleTable::build(P, w0, 4096);
    double worst = 0.0;
    const std::size_t mc = 256;
    for (std::size_t j = 0; j < mc; ++j) {
      const cxd z = f.eval(std::polar(1.0, 2.0 * kPi * (j + 0.5) / mc));
      const double t = table.invert(std::arg(z - w0));
      worst = std::max(worst, std::abs(z - P.eval(t)));
    }
    d->boundary_error = worst;
  }
  if (!f.derivative_nonvanishing())
    throw NoConvergence("fit_interior_map: fitted derivative vanishes near the boundary");
  return f;
}

inline ExteriorMapSeries fit_exterior_map(const JordanCurve& curve_in, int N,
                                          const FitOptions& opt = {},
                                          FitDiagnostics* diag = nullptr) {
  if (N < 2) throw DomainError("fit_exterior_map: order must be >= 2");
  const JordanCurve curve = canonical_ccw(curve_in);
  const cxd w0 = curve.centroid();
  // invert the exterior to an interior problem about 0
  BoundaryParam Q;
  const BoundaryParam P = boundary_of(curve);
  Q.eval = [P, w0](double t) { return 1.0 / (P.eval(-t) - w0); };
  Q.deriv = [P, w0](double t) {
    const cxd d = P.eval(-t) - w0;
    return P.deriv(-t) / (d * d);
  };

  const int NG = N + 2;
  const std::size_t m = detail::fit_grid_size(NG, opt.grid);
  const bool star = detail::star_shaped_about(Q, cxd(0.0), std::max<std::size_t>(8 * NG, 512));
  FitDiagnostics local;
  FitDiagnostics* d = diag ? diag : &local;
  detail::TheodorsenResult res;
  if (opt.method == FitMethod::theodorsen || (opt.method == FitMethod::automatic && star)) {
    if (!star)
      throw NotStarShaped("fit_exterior_map: inverted region not star-shaped about 0");
    res = detail::theodorsen_iterate(Q, cxd(0.0), m, opt);
  } else {
    res = detail::projection_iterate(Q, cxd(0.0), m, opt);
    d->used_fallback = true;
  }
  d->iterations = res.iterations;
  d->residual = res.residual;
  const DiskMapSeries G = detail::series_from_boundary(res.boundary, cxd(0.0), NG, d);

  // g(z) = w0 + 1 / G(1/z), expanded by series reciprocal
  const cxd A1 = G.a[1];
  series u(NG, cxd(0.0));
  u[0] = 1.0;
  for (int k = 1; k < NG; ++k)
    u[k] = (k + 1 < static_cast<int>(G.a.size())) ? G.a[k + 1] / A1 : cxd(0.0);
  const series v = series_reciprocal(u, NG);
  ExteriorMapSeries g;
  g.b1 = std::abs(1.0 / A1);  // A1 is real-positive after normalization
  g.b0 = w0 + v[1] / A1;
  g.bneg.assign(N, cxd(0.0));
  for (int n = 1; n <= N && n + 1 < NG; ++n) g.bneg[n - 1] = v[n + 1] / A1;

  if (diag && star) {
    const detail::AngleTable table = detail::AngleTable::build(Q, cxd(0.0), 4096);
    double worst = 0.0;
    const std::size_t mc = 256;
    for (std::size_t j = 0; j < mc; ++j) {
      // compare through the inverted coordinate, where angles are monotone
      const cxd z = g.eval(std::polar(1.0, -2.0 * kPi * (j + 0.5) / mc));
      const cxd zi = 1.0 / (z - w0);
      const double t = table.invert(std::arg(zi));
      const cxd on_curve = w0 + 1.0 / Q.eval(t);
      worst = std::max(worst, std::abs(z - on_curve));
    }
    diag->boundary_error = worst;
  }
  if (!g.derivative_nonvanishing())
    throw NoConvergence("fit_exterior_map: fitted derivative vanishes near the boundary");
  return g;
}

}  // namespace loewner
