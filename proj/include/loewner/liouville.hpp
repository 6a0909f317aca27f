// Universal Liouville action and related functionals of the two conformal
// maps of a Jordan curve, plus the half-plane version for curves through
// infinity and the welding homeomorphism.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "loewner/conformal.hpp"
#include "loewner/errors.hpp"
#include "loewner/series.hpp"
#include "loewner/slit_maps.hpp"

namespace loewner {

struct LogDerivResult {
  double value = 0.0;          // integral of |f''/f'|^2 over the domain
  double tail_fraction = 0.0;  // contribution of the last decade of modes
};

// Spectral evaluation of int |f''/f'|^2 over D: with log f' = sum c_n z^n the
// integral equals pi sum n |c_n|^2.
inline LogDerivResult log_deriv_dirichlet(const DiskMapSeries& f) {
  if (f.a.size() < 2 || f.a[1] == cxd(0.0))
    throw SeriesLogFailure("log_deriv_dirichlet: f'(0) vanishes");
  if (!f.derivative_nonvanishing() || f.derivative_zero_count() != 0)
    throw SeriesLogFailure("log_deriv_dirichlet: f' has a zero inside the evaluation radius");
  const std::size_t N = f.a.size() - 1;
  series fp(N, cxd(0.0));
  for (std::size_t k = 0; k < N; ++k) fp[k] = double(k + 1) * f.a[k + 1];
  const series c = series_log(fp, N);
  LogDerivResult out;
  double tail = 0.0;
  const std::size_t tail_start = N - std::max<std::size_t>(1, N / 10);
  for (std::size_t n = 1; n < N; ++n) {
    const double term = kPi * double(n) * std::norm(c[n]);
    out.value += term;
    if (n >= tail_start) tail += term;
  }
  out.tail_fraction = out.value > 0.0 ? tail / out.value : 0.0;
  return out;
}

// Exterior version: log g' = sum_{n>=1} d_n z^{-n}; integral over D* is
// pi sum n |d_n|^2.
inline LogDerivResult log_deriv_dirichlet(const ExteriorMapSeries& g) {
  if (!(g.b1 > 0.0)) throw SeriesLogFailure("log_deriv_dirichlet: g'(inf) must be positive");
  if (!g.derivative_nonvanishing() || g.derivative_zero_count() != 0)
    throw SeriesLogFailure("log_deriv_dirichlet: g' has a zero inside the evaluation radius");
  const std::size_t N = g.bneg.size() + 2;
  series gp(N, cxd(0.0));
  gp[0] = g.b1;
  for (std::size_t n = 1; n + 1 < N; ++n) gp[n + 1] = -double(n) * g.bneg[n - 1];
  const series d = series_log(gp, N);
  LogDerivResult out;
  double tail = 0.0;
  const std::size_t tail_start = N - std::max<std::size_t>(1, N / 10);
  for (std::size_t n = 1; n < N; ++n) {
    const double term = kPi * double(n) * std::norm(d[n]);
    out.value += term;
    if (n >= tail_start) tail += term;
  }
  out.tail_fraction = out.value > 0.0 ? tail / out.value : 0.0;
  return out;
}

namespace detail {

inline double polygon_mismatch(const std::vector<cxd>& a, const std::vector<cxd>& b) {
  double worst = 0.0;
  for (const cxd& p : a) {
    double best = 1e300;
    for (std::size_t j = 0; j < b.size(); ++j) {
      const cxd s0 = b[j], s1 = b[(j + 1) % b.size()];
      const cxd d = s1 - s0;
      const double l2 = std::norm(d);
      const double u = l2 == 0.0 ? 0.0 : std::clamp(((p - s0) * std::conj(d)).real() / l2, 0.0, 1.0);
      best = std::min(best, std::abs(p - (s0 + u * d)));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace detail

// Check that f and g bound the same curve, within tol * diameter. The
// polygon density limits the measurable mismatch (chord sagitta), so m must
// stay well above the curve's bending scale.
inline double map_boundary_mismatch(const DiskMapSeries& f, const ExteriorMapSeries& g,
                                    std::size_t m = 1024) {
  std::vector<cxd> fb(m), gb(m);
  for (std::size_t j = 0; j < m; ++j) {
    fb[j] = f.eval(std::polar(1.0, 2.0 * kPi * j / m));
    gb[j] = g.eval(std::polar(1.0, 2.0 * kPi * j / m));
  }
  return std::max(detail::polygon_mismatch(fb, gb), detail::polygon_mismatch(gb, fb));
}

// I^L(gamma) = S(gamma)/pi with
// S = int_D |f''/f'|^2 + int_D* |g''/g'|^2 + 4 pi log |f'(0)/g'(inf)|.
inline double universal_liouville_action(const DiskMapSeries& f, const ExteriorMapSeries& g) {
  double diam = 0.0;
  std::vector<cxd> fb(64);
  for (std::size_t j = 0; j < fb.size(); ++j)
    fb[j] = f.eval(std::polar(1.0, 2.0 * kPi * j / fb.size()));
  for (std::size_t i = 0; i < fb.size(); ++i)
    for (std::size_t j = i + 1; j < fb.size(); ++j) diam = std::max(diam, std::abs(fb[i] - fb[j]));
  const double mism = map_boundary_mismatch(f, g);
  if (mism > 1e-4 * diam)
    throw MismatchedCurve("universal_liouville_action: f and g bound different curves");
  const double Df = log_deriv_dirichlet(f).value;
  const double Dg = log_deriv_dirichlet(g).value;
  return (Df + Dg) / kPi + 4.0 * std::log(std::abs(f.fprime0()) / g.gprime_inf());
}

// ---------------------------------------------------------------------------
// Welding homeomorphism phi = g^{-1} o f on S^1
// ---------------------------------------------------------------------------

struct WeldingMap {
  std::vector<double> theta;  // uniform grid on [0, 2pi)
  std::vector<double> phi;    // phi(theta_j), strictly increasing, total 2pi

  void validate() const {
    if (theta.size() != phi.size() || theta.size() < 8)
      throw ParseError("welding: bad grid");
    for (std::size_t j = 1; j < phi.size(); ++j)
      if (!(phi[j] > phi[j - 1]))
        throw MonotonicityViolation("welding: phi not strictly increasing");
    const double total = phi.back() - phi.front();
    if (total >= 2.0 * kPi || total <= 0.0)
      throw MonotonicityViolation("welding: phi does not have degree one");
  }

  // periodic evaluation by linear interpolation of phi(theta) - theta
  double eval(double th) const {
    const std::size_t m = theta.size();
    const double twopi = 2.0 * kPi;
    double t = th - twopi * std::floor(th / twopi);
    const double step = twopi / double(m);
    const std::size_t j = std::min<std::size_t>(m - 1, std::size_t(t / step));
    const double u = (t - theta[j]) / step;
    const double d0 = phi[j] - theta[j];
    const double d1 = (j + 1 < m ? phi[j + 1] - theta[j + 1] : phi[0] - theta[0]);
    const double d = d0 * (1.0 - u) + d1 * u;
    return th + d;
  }
};

namespace detail {

// unwrapped boundary angle of (map(e^{i s}) - w0) sampled on m points
template <typename MapT>
std::vector<double> boundary_angles(const MapT& map, cxd w0, std::size_t m) {
  std::vector<double> ang(m + 1);
  cxd prev = map.eval(std::polar(1.0, 0.0)) - w0;
  double acc = std::arg(prev);
  ang[0] = acc;
  for (std::size_t j = 1; j <= m; ++j) {
    const cxd cur = map.eval(std::polar(1.0, 2.0 * kPi * j / m)) - w0;
    acc += std::arg(cur / prev);
    prev = cur;
    ang[j] = acc;
  }
  return ang;
}

}  // namespace detail

inline WeldingMap welding_map(const DiskMapSeries& f, const ExteriorMapSeries& g, std::size_t M) {
  if (M < 8) throw DomainError("welding_map: grid too small");
  const cxd w0 = f.w0;
  const std::size_t mg = 4 * M;
  const auto af = detail::boundary_angles(f, w0, M);
  const auto ag = detail::boundary_angles(g, w0, mg);
  for (std::size_t j = 1; j < af.size(); ++j)
    if (!(af[j] > af[j - 1]))
      throw MonotonicityViolation("welding_map: interior boundary angle not monotone");
  for (std::size_t j = 1; j < ag.size(); ++j)
    if (!(ag[j] > ag[j - 1]))
      throw MonotonicityViolation("welding_map: exterior boundary angle not monotone");

  WeldingMap w;
  w.theta.resize(M);
  w.phi.resize(M);
  const double twopi = 2.0 * kPi;
  for (std::size_t j = 0; j < M; ++j) {
    w.theta[j] = twopi * j / M;
    // solve ag(psi) = af(theta_j) (mod 2pi), tracking the branch so that
    // phi is increasing alongside theta
    double target = af[j];
    // reduce into [ag[0], ag[0] + 2pi)
    double t = target - twopi * std::floor((target - ag[0]) / twopi);
    std::size_t lo = 0, hi = mg;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (ag[mid] <= t ? lo : hi) = mid;
    }
    const double span = ag[hi] - ag[lo];
    double psi = (twopi * lo / mg) + (twopi / mg) * (span > 0 ? (t - ag[lo]) / span : 0.5);
    // Newton refinement with the series derivative
    for (int it = 0; it < 4; ++it) {
      const cxd z = std::polar(1.0, psi);
      const cxd v = g.eval(z) - w0;
      const double err = std::arg(v * std::conj(std::polar(1.0, t)));
      const double dang = (cxd(0, 1) * z * g.deriv(z) / v).imag();
      if (!(dang > 0.0) || !std::isfinite(err)) break;
      psi -= err / dang;
    }
    w.phi[j] = psi;
  }
  // unwrap phi to an increasing representative
  for (std::size_t j = 1; j < M; ++j)
    while (w.phi[j] < w.phi[j - 1]) w.phi[j] += twopi;
  w.validate();
  return w;
}

// max_j |f(e^{i theta_j}) - g(e^{i phi_j})| -- the defining-equation residual
inline double welding_residual(const DiskMapSeries& f, const ExteriorMapSeries& g,
                               const WeldingMap& w) {
  double worst = 0.0;
  for (std::size_t j = 0; j < w.theta.size(); ++j) {
    const cxd a = f.eval(std::polar(1.0, w.theta[j]));
    const cxd b = g.eval(std::polar(1.0, w.phi[j]));
    worst = std::max(worst, std::abs(a - b));
  }
  return worst;
}

// Quasisymmetry constant: max over grid angles and dyadic t of the symmetric
// difference quotient of the circle map e^{i phi(theta)}.
inline double qs_constant_estimate(const WeldingMap& w) {
  w.validate();
  const std::size_t m = w.theta.size();
  double M = 1.0;
  for (std::size_t k = 1; (std::size_t(1) << k) <= m / 2; ++k) {
    const double t = kPi / double(std::size_t(1) << (k - 1)) / 2.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double th = w.theta[j];
      const cxd a = std::polar(1.0, w.eval(th + t));
      const cxd b = std::polar(1.0, w.eval(th));
      const cxd c = std::polar(1.0, w.eval(th - t));
      const double num = std::abs(a - b), den = std::abs(b - c);
      if (den == 0.0) continue;
      const double r = num / den;
      M = std::max(M, std::max(r, 1.0 / r));
    }
  }
  return M;
}

// ---------------------------------------------------------------------------
// Loewner energy of a curve through infinity (gamma = R+ union eta), by
// quadrature of the two half-plane Dirichlet integrals.
// ---------------------------------------------------------------------------

struct InfiniteCurveEnergyOptions {
  // Angular resolution is deliberately bounded: the chain is a composition of
  // straight slitlets whose joints carry genuine corner singularities, so the
  // integrand of the discrete proxy diverges logarithmically if sampled at
  // scales below the discretization. A grid matched to the slitlet scale
  // integrates the continuous-curve limit instead. Refinement for the
  // stability check is radial only.
  int angular_cells = 64;
  int radial_cells_per_decade = 32;
  int max_log2_radius = 10;  // dyadic boxes up to |z| = 2^max_log2_radius
  double refine_rel_tol = 0.05;
  int threads = 1;
};

struct InfiniteCurveEnergyResult {
  double value = 0.0;
  double plus_part = 0.0;   // component whose closure contains R+ side
  double minus_part = 0.0;
  double tail = 0.0;        // extrapolated contribution beyond the last annulus
  double refinement_change = 0.0;
};

namespace detail {

// |J''/J'|^2 for J(z) = (C(wT +- sqrt(z)))^2, composed as 2-jets.
struct HalfPlaneMapJet {
  const SlitMapChain* chain;
  double wT;
  double sign;  // +1: component containing the R+ side; -1: the other one

  double integrand(cxd z) const {
    const cxd rt = std::sqrt(z);
    const cxd inner = wT + sign * rt;
    const Jet2 c = chain->weld_jet(inner);
    // r(z) = wT + s sqrt(z): r' = s/(2 sqrt z), r'' = -s/(4 z^{3/2})
    const cxd r1 = sign * 0.5 / rt;
    const cxd r2 = -sign * 0.25 / (rt * z);
    const cxd F1 = c.df * r1;
    const cxd F2 = c.ddf * r1 * r1 + c.df * r2;
    // J = F^2: J' = 2 F F', J'' = 2 (F'^2 + F F'')
    const cxd J1 = 2.0 * c.f * F1;
    const cxd J2 = 2.0 * (F1 * F1 + c.f * F2);
    if (J1 == cxd(0.0)) return 0.0;
    return std::norm(J2 / J1);
  }
};

}  // namespace detail

inline InfiniteCurveEnergyResult infinite_curve_energy(
    const SlitMapChain& chain, const InfiniteCurveEnergyOptions& opt = {}) {
  const double wT = chain.driving_end();
  double feature = 1.0;
  for (const auto& s : chain.steps) feature = std::max(feature, std::abs(s.w_end()));
  feature = std::max(feature, 2.0 * std::sqrt(std::max(chain.total_capacity, 0.0)) + 1.0);
  feature *= feature;  // the squaring map doubles length scales

  // tensor midpoint rule: log-spaced radii, uniform angles
  auto integrate = [&](double sign, int nr_per_decade, double* tail) {
    detail::HalfPlaneMapJet jet{&chain, wT, sign};
    const double r0 = feature * 1e-6;
    const double r1 = std::max(std::pow(2.0, opt.max_log2_radius), 64.0 * feature);
    const int decades = static_cast<int>(std::ceil(std::log10(r1 / r0)));
    const int nr = decades * nr_per_decade;
    const int nt = opt.angular_cells;
    const double wlog = std::log(r1 / r0) / nr;
    std::vector<double> ring(nr, 0.0);
    detail::parallel_for(nr, opt.threads, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t ir = lo; ir < hi; ++ir) {
        const double r = r0 * std::pow(r1 / r0, (ir + 0.5) / nr);
        double acc = 0.0;
        for (int it = 0; it < nt; ++it) {
          const double th = kPi * (it + 0.5) / nt;
          acc += jet.integrand(std::polar(r, th));
        }
        ring[ir] = acc * r * r * wlog * (kPi / nt);
      }
    });
    double total = 0.0;
    for (double v : ring) total += v;
    // tail beyond r1 from the decay ratio of the last two decades
    double t_ext = 0.0;
    double last = 0.0, prev = 0.0;
    for (int d = 0; d < nr_per_decade && nr - 1 - nr_per_decade - d >= 0; ++d) {
      last += ring[nr - 1 - d];
      prev += ring[nr - 1 - nr_per_decade - d];
    }
    if (prev > 0.0 && last > 0.0 && last < prev) {
      const double ratio = std::min(0.9, last / prev);
      t_ext = last * ratio / (1.0 - ratio);
    }
    if (tail) *tail = t_ext;
    return total + t_ext;
  };

  InfiniteCurveEnergyResult out;
  double tail_p = 0.0, tail_m = 0.0;
  const int nr = opt.radial_cells_per_decade;
  const double coarse_p = integrate(+1.0, nr, nullptr);
  const double coarse_m = integrate(-1.0, nr, nullptr);
  const double fine_p = integrate(+1.0, 2 * nr, &tail_p);
  const double fine_m = integrate(-1.0, 2 * nr, &tail_m);
  out.plus_part = fine_p / kPi;
  out.minus_part = fine_m / kPi;
  out.tail = (tail_p + tail_m) / kPi;
  out.value = out.plus_part + out.minus_part;
  const double coarse = (coarse_p + coarse_m) / kPi;
  out.refinement_change =
      std::abs(out.value - coarse) / std::max(1e-12, std::abs(out.value));
  if (out.refinement_change > opt.refine_rel_tol)
    throw QuadratureNoConvergence("infinite_curve_energy: quadrature did not stabilize");
  return out;
}

}  // namespace loewner
