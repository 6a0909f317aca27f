#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "loewner/conformal.hpp"
#include "loewner/curve.hpp"

using namespace loewner;

namespace {
// simple but not star-shaped about its centroid (bent circle
// x = cos t, y = sin t + c cos^2 t with c = 2)
JordanCurve crescent_curve() {
  const double c = 2.0;
  return curve_from_trig(cxd(0, 0.5 * c), 2,
                         {cxd(0, 0.25 * c), cxd(0), cxd(0), cxd(1, 0), cxd(0, 0.25 * c)});
}
}  // namespace

TEST_CASE("interior map of a centered circle is f(z) = r z") {
  const JordanCurve c = curve_circle(cxd(0, 0), 2.0);
  const DiskMapSeries f = fit_interior_map(c, 16);
  CHECK(std::abs(f.w0) < 1e-12);
  CHECK(std::abs(f.a[1] - cxd(2.0, 0.0)) < 1e-12);
  for (std::size_t n = 2; n < f.a.size(); ++n) CHECK(std::abs(f.a[n]) < 1e-12);
}

TEST_CASE("interior map of a translated circle picks up the center") {
  const JordanCurve c = curve_circle(cxd(1, 1), 2.0);
  const DiskMapSeries f = fit_interior_map(c, 16);
  CHECK(std::abs(f.w0 - cxd(1, 1)) < 1e-10);
  CHECK(std::abs(f.a[1] - cxd(2.0, 0.0)) < 1e-10);
}

TEST_CASE("interior map of the Joukowski ellipse: boundary error < 1e-6") {
  const JordanCurve c = curve_joukowski(0.3);
  // coefficient decay is ~0.92^n for this ellipse, so 1e-6 needs a few
  // hundred modes
  FitDiagnostics diag;
  const DiskMapSeries f = fit_interior_map(c, 256, {}, &diag);
  CHECK(diag.boundary_error < 1e-6 * c.diameter());
  CHECK(f.a[1].real() > 0.0);
  CHECK(f.a[1].imag() == 0.0);
  CHECK(f.derivative_nonvanishing());
}

TEST_CASE("exterior map of a circle is g(z) = r z") {
  const JordanCurve c = curve_circle(cxd(0, 0), 2.0);
  const ExteriorMapSeries g = fit_exterior_map(c, 16);
  CHECK(std::abs(g.b1 - 2.0) < 1e-11);
  CHECK(std::abs(g.b0) < 1e-11);
  for (const cxd& b : g.bneg) CHECK(std::abs(b) < 1e-10);
}

TEST_CASE("exterior map of the Joukowski curve recovers z + c/z") {
  const JordanCurve c = curve_joukowski(0.3);
  FitDiagnostics diag;
  const ExteriorMapSeries g = fit_exterior_map(c, 32, {}, &diag);
  CHECK(std::abs(g.b1 - 1.0) < 1e-9);
  CHECK(std::abs(g.b0) < 1e-9);
  CHECK(std::abs(g.bneg[0] - cxd(0.3, 0.0)) < 1e-9);
  for (std::size_t k = 1; k < g.bneg.size(); ++k) CHECK(std::abs(g.bneg[k]) < 1e-8);
  CHECK(diag.boundary_error < 1e-6 * c.diameter());
}

TEST_CASE("exterior coefficients scale homogeneously") {
  const double lam = 2.5;
  const ExteriorMapSeries g1 = fit_exterior_map(curve_joukowski(0.3), 16);
  const ExteriorMapSeries g2 = fit_exterior_map(curve_joukowski(0.3).scaled(lam), 16);
  CHECK(std::abs(g2.b1 - lam * g1.b1) < 1e-9 * lam);
  for (std::size_t k = 0; k < g1.bneg.size(); ++k)
    CHECK(std::abs(g2.bneg[k] - lam * g1.bneg[k]) < 1e-8 * lam);
}

TEST_CASE("exterior map evaluates onto the curve") {
  const JordanCurve c = curve_joukowski(0.3);
  const ExteriorMapSeries g = fit_exterior_map(c, 48);
  // Joukowski exterior is exactly z + 0.3/z; compare at a few points
  for (const cxd z : {cxd(1.7, 0.4), cxd(-2, 1), cxd(0, 3)}) {
    const cxd expect = z + 0.3 / z;
    CHECK(std::abs(g.eval(z) - expect) < 1e-8);
  }
}

TEST_CASE("forcing the fast path on a non-star-shaped curve throws") {
  FitOptions opt;
  opt.method = FitMethod::theodorsen;
  CHECK_THROWS_AS(fit_interior_map(crescent_curve(), 32, opt), NotStarShaped);
}

TEST_CASE("projection fallback handles a non-star-shaped simple curve") {
  const JordanCurve c = crescent_curve();
  c.validate();
  FitDiagnostics diag;
  FitOptions opt;
  opt.max_iter = 2000;
  const DiskMapSeries f = fit_interior_map(c, 96, opt, &diag);
  CHECK(diag.used_fallback);
  // fallback trades accuracy for generality; check the boundary lands close
  // to the curve by sampling the fitted map
  double worst = 0.0;
  const auto poly = c.samples(1024);
  for (int j = 0; j < 256; ++j) {
    const cxd z = f.eval(std::polar(1.0, 2.0 * kPi * (j + 0.5) / 256));
    double best = 1e300;
    for (std::size_t i = 0; i < poly.size(); ++i) best = std::min(best, std::abs(z - poly[i]));
    worst = std::max(worst, best);
  }
  CHECK(worst < 2e-3 * c.diameter());
}

TEST_CASE("curve validation and helpers") {
  CHECK_THROWS_AS(curve_from_trig(0.0, 1, {cxd(0), cxd(0)}), ParseError);
  const JordanCurve circ = curve_circle(cxd(0.5, -0.25), 1.5);
  circ.validate();
  const CircleFit fit = circ.fit_circle();
  CHECK(std::abs(fit.center - cxd(0.5, -0.25)) < 1e-12);
  CHECK(std::abs(fit.radius - 1.5) < 1e-12);
  CHECK(fit.residual < 1e-12);
  const CircleFit notc = curve_joukowski(0.3).fit_circle();
  CHECK(notc.residual > 1e-3);

  // orientation: reversed() flips the signed area, canonical_ccw restores it
  const JordanCurve rev = circ.reversed();
  CHECK(rev.signed_area() < 0.0);
  CHECK(canonical_ccw(rev).signed_area() > 0.0);

  // centroid of a translated ellipse
  const JordanCurve ell = curve_joukowski(0.3).translated(cxd(2, 1));
  CHECK(std::abs(ell.centroid() - cxd(2, 1)) < 1e-10);
}

TEST_CASE("curve_from_points reproduces a trig curve") {
  const JordanCurve src = curve_joukowski(0.25, 1.0, cxd(0.5, 0.5));
  const auto pts = src.samples(128);
  const JordanCurve back = curve_from_points(pts);
  for (int j = 0; j < 37; ++j) {
    const double tau = 2.0 * kPi * j / 37.0;
    CHECK(std::abs(back.eval(tau) - src.eval(tau)) < 1e-12);
  }
}
