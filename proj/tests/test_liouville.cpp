#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <functional>

#include "loewner/energy.hpp"
#include "loewner/liouville.hpp"

using namespace loewner;

namespace {

// independent oracle: 2-D quadrature of |L(z)|^2 over an annulus r0 < |z| < r1
// for a closed-form log-derivative L = g''/g'
double annulus_quadrature(const std::function<cxd(cxd)>& L, double r0, double r1) {
  double total = 0.0;
  const int nr = 96, nt = 192;
  double lo = r0;
  while (lo < r1) {
    const double hi = std::min(2.0 * lo, r1);
    for (int it = 0; it < nt; ++it) {
      const double th = 2.0 * kPi * (it + 0.5) / nt;
      for (int ir = 0; ir < nr; ++ir) {
        // Gauss-Chebyshev style midpoints in log radius
        const double u = (ir + 0.5) / nr;
        const double r = lo * std::pow(hi / lo, u);
        const double wlog = std::log(hi / lo) / nr;  // dr = r dlog r
        const cxd z = std::polar(r, th);
        total += std::norm(L(z)) * r * r * wlog * (2.0 * kPi / nt);
      }
    }
    lo = hi;
  }
  return total;
}

DiskMapSeries pure_scale(double r) {
  DiskMapSeries f;
  f.a = {cxd(0), cxd(r, 0)};
  return f;
}

}  // namespace

TEST_CASE("log_deriv_dirichlet vanishes for linear maps") {
  CHECK(log_deriv_dirichlet(pure_scale(2.0)).value == 0.0);
  ExteriorMapSeries g;
  g.b1 = 3.0;
  g.b0 = cxd(1, -2);
  g.bneg.assign(8, cxd(0.0));
  CHECK(log_deriv_dirichlet(g).value == 0.0);
}

TEST_CASE("exterior log-derivative energy of z + c/z matches the closed form") {
  const double c = 0.3;
  ExteriorMapSeries g;
  g.b1 = 1.0;
  g.bneg.assign(64, cxd(0.0));
  g.bneg[0] = c;
  const double spectral = log_deriv_dirichlet(g).value;
  // log g' = log(1 - c z^-2) gives pi sum 2k (c^k/k)^2 = -2 pi log(1 - c^2)
  const double closed = -2.0 * kPi * std::log(1.0 - c * c);
  CHECK(spectral == Catch::Approx(closed).epsilon(1e-12));
  // independent 2-D quadrature of |g''/g'|^2 over 1 < |z| < 1e4
  const auto L = [c](cxd z) { return (2.0 * c / (z * z * z)) / (1.0 - c / (z * z)); };
  const double quad = annulus_quadrature(L, 1.0, 1e4);
  CHECK(std::abs(quad - spectral) < 1e-4 * spectral);
}

TEST_CASE("interior log-derivative energy of z + eps z^2/2") {
  const double eps = 0.01;
  DiskMapSeries f;
  f.a.assign(64, cxd(0.0));
  f.a[1] = 1.0;
  f.a[2] = eps / 2.0;
  const double spectral = log_deriv_dirichlet(f).value;
  CHECK(std::abs(spectral - kPi * eps * eps) < 1e-7);
  const auto L = [eps](cxd z) { return eps / (1.0 + eps * z); };
  // quadrature over the unit disk, graded toward the boundary
  double quad = 0.0;
  const int nr = 200, nt = 64;
  for (int ir = 0; ir < nr; ++ir) {
    const double r = (ir + 0.5) / nr;
    for (int it = 0; it < nt; ++it) {
      const cxd z = std::polar(r, 2.0 * kPi * (it + 0.5) / nt);
      quad += std::norm(L(z)) * r * (1.0 / nr) * (2.0 * kPi / nt);
    }
  }
  CHECK(std::abs(quad - spectral) < 1e-4 * spectral);
}

TEST_CASE("series log failure on vanishing derivative") {
  DiskMapSeries f;
  f.a = {cxd(0), cxd(1, 0), cxd(0), cxd(2, 0)};  // f' = 1 + 6 z^2 vanishes in D
  CHECK_THROWS_AS(log_deriv_dirichlet(f), SeriesLogFailure);
}

TEST_CASE("universal Liouville action: circle gives zero") {
  const JordanCurve c = curve_circle(cxd(0.3, -0.1), 1.7);
  const DiskMapSeries f = fit_interior_map(c, 32);
  const ExteriorMapSeries g = fit_exterior_map(c, 32);
  CHECK(std::abs(universal_liouville_action(f, g)) < 1e-10);
}

TEST_CASE("universal Liouville action matches the Grunsky closed form on Joukowski") {
  const double c = 0.3;
  const JordanCurve curve = curve_joukowski(c);
  // the interior map's coefficients decay like 0.92^n (set by the foci), so
  // the series route needs a few hundred modes for 1e-4 absolute accuracy
  const DiskMapSeries f = fit_interior_map(curve, 384);
  const ExteriorMapSeries g = fit_exterior_map(curve, 384);
  const double action = universal_liouville_action(f, g);
  double closed = 0.0;
  for (int n = 1; n < 200; ++n) closed += std::log1p(-std::pow(c * c, n));
  closed *= -12.0;
  CHECK(std::abs(action - closed) < 1e-4);
}

TEST_CASE("action is invariant under admissible rotations of f and g") {
  const JordanCurve curve = curve_joukowski(0.3);
  const DiskMapSeries f = fit_interior_map(curve, 64);
  const ExteriorMapSeries g = fit_exterior_map(curve, 64);
  const double base = universal_liouville_action(f, g);
  // precompose f with the rotation z -> z e^{i sigma} (same image disk)
  DiskMapSeries fr = f;
  const double sigma = 0.7;
  for (std::size_t n = 1; n < fr.a.size(); ++n) fr.a[n] *= std::polar(1.0, sigma * double(n));
  const double rot = universal_liouville_action(fr, g);
  CHECK(std::abs(rot - base) < 1e-6);

  const ExteriorMapSeries far_g = fit_exterior_map(curve_circle(cxd(4, 4), 0.5), 64);
  CHECK_THROWS_AS(universal_liouville_action(f, far_g), MismatchedCurve);
}

TEST_CASE("interior/exterior swap under reflection leaves the action unchanged") {
  // reflect the curve through the unit circle: z -> 1/conj(z) swaps the roles
  // of the two complementary components
  const JordanCurve curve = curve_joukowski(0.25);
  const auto pts = curve.samples(256);
  std::vector<cxd> reflected(pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j) reflected[j] = 1.0 / std::conj(pts[j]);
  const JordanCurve rcurve = canonical_ccw(curve_from_points(reflected));
  const double a1 = universal_liouville_action(fit_interior_map(curve, 256),
                                               fit_exterior_map(curve, 256));
  const double a2 = universal_liouville_action(fit_interior_map(rcurve, 256),
                                               fit_exterior_map(rcurve, 256));
  CHECK(std::abs(a1 - a2) < 1e-5);
}

TEST_CASE("welding of a circle is a rotation") {
  const JordanCurve c = curve_circle(cxd(0, 0), 2.0);
  const WeldingMap w = welding_map(fit_interior_map(c, 16), fit_exterior_map(c, 16), 128);
  const double d0 = w.phi[0] - w.theta[0];
  for (std::size_t j = 0; j < w.theta.size(); ++j)
    CHECK(std::abs((w.phi[j] - w.theta[j]) - d0) < 1e-9);
}

TEST_CASE("welding of the Joukowski curve satisfies its defining equation") {
  const JordanCurve c = curve_joukowski(0.3);
  const DiskMapSeries f = fit_interior_map(c, 96);
  const ExteriorMapSeries g = fit_exterior_map(c, 96);
  const WeldingMap w = welding_map(f, g, 256);
  w.validate();
  CHECK(welding_residual(f, g, w) < 1e-5 * c.diameter());
}

TEST_CASE("welding transforms covariantly under curve rotation") {
  const double beta = 2.0 * kPi * 24.0 / 256.0;  // grid-aligned shift
  const JordanCurve c = curve_joukowski(0.3);
  const JordanCurve cr = c.rotated(beta);
  const WeldingMap w0 = welding_map(fit_interior_map(c, 64), fit_exterior_map(c, 64), 256);
  const WeldingMap w1 = welding_map(fit_interior_map(cr, 64), fit_exterior_map(cr, 64), 256);
  // phi_new(theta) - theta = phi(theta - beta) - (theta - beta)
  for (int j = 0; j < 64; ++j) {
    const double th = 2.0 * kPi * j * 4.0 / 256.0;
    const double lhs = w1.eval(th) - th;
    const double rhs = w0.eval(th - beta) - (th - beta);
    CHECK(std::abs(lhs - rhs) < 1e-8);
  }
}

TEST_CASE("qs constant: identity, fitted ellipse, synthetic diffeomorphism") {
  const JordanCurve circ = curve_circle(cxd(0, 0), 1.0);
  const WeldingMap wid = welding_map(fit_interior_map(circ, 16), fit_exterior_map(circ, 16), 256);
  CHECK(qs_constant_estimate(wid) == Catch::Approx(1.0).margin(1e-8));

  const JordanCurve ell = curve_joukowski(0.3);
  const DiskMapSeries f = fit_interior_map(ell, 96);
  const ExteriorMapSeries g = fit_exterior_map(ell, 96);
  const double q1 = qs_constant_estimate(welding_map(f, g, 256));
  const double q2 = qs_constant_estimate(welding_map(f, g, 512));
  CHECK(q1 > 1.0);
  CHECK(std::isfinite(q1));
  CHECK(std::abs(q1 - q2) < 0.05 * q2);

  auto synth = [](std::size_t m) {
    WeldingMap w;
    for (std::size_t j = 0; j < m; ++j) {
      const double th = 2.0 * kPi * j / m;
      w.theta.push_back(th);
      w.phi.push_back(th + 0.1 * std::sin(th));
    }
    return w;
  };
  const double s1 = qs_constant_estimate(synth(256));
  const double s2 = qs_constant_estimate(synth(512));
  CHECK(s1 > 1.0);
  CHECK(s1 < 1.5);
  CHECK(std::abs(s1 - s2) < 0.05 * s2);
}

TEST_CASE("infinite curve energy: the real line has zero energy") {
  SlitMapChain empty;
  InfiniteCurveEnergyOptions opt;
  opt.threads = 0;
  const auto r = infinite_curve_energy(empty, opt);
  CHECK(std::abs(r.value) < 1e-12);
}

TEST_CASE("infinite curve energy matches the Dirichlet route for w = t") {
  DrivingFunction w;
  w.times = {0.0, 1.0};
  w.values = {0.0, 1.0};
  const SlitMapChain chain = chain_from_driving(w, 150);
  InfiniteCurveEnergyOptions opt;
  opt.threads = 0;
  const auto r = infinite_curve_energy(chain, opt);
  CHECK(std::abs(r.value - 0.5) < 0.05 * 0.5);
}

TEST_CASE("infinite curve energy matches the Dirichlet route for a two-knot driving") {
  DrivingFunction w;
  w.times = {0.0, 0.5};
  w.values = {0.0, 1.0};  // I(w) = 1
  const SlitMapChain chain = chain_from_driving(w, 300);
  InfiniteCurveEnergyOptions opt;
  opt.threads = 0;
  const auto r = infinite_curve_energy(chain, opt);
  CHECK(std::abs(r.value - 1.0) < 0.05);
}
