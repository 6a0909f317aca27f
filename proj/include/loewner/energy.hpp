// Loewner energy functionals and the multi-method cross-validation report.
#pragma once

#include <chrono>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "loewner/curve.hpp"
#include "loewner/errors.hpp"
#include "loewner/grunsky.hpp"
#include "loewner/liouville.hpp"
#include "loewner/slit_maps.hpp"

namespace loewner {

// Dirichlet energy (1/2) int wdot^2 dt of the piecewise-linear interpolant;
// exact: (1/2) sum (dw)^2 / dt.
inline double dirichlet_energy(const DrivingFunction& w) {
  w.validate();
  double e = 0.0;
  for (std::size_t i = 1; i < w.times.size(); ++i) {
    const double dw = w.values[i] - w.values[i - 1];
    const double dt = w.times[i] - w.times[i - 1];
    e += dw * dw / dt;
  }
  return 0.5 * e;
}

// Chordal Loewner energy I^C = I(W) of the trace's driving function.
inline double chordal_energy(const HalfPlaneTrace& trace) {
  return dirichlet_energy(extract_driving(trace));
}

// sqrt branch mapping C minus R+ onto H (arg in (0, 2 pi) halved).
inline cxd slit_plane_sqrt(cxd z) {
  if (z == cxd(0.0)) return cxd(0.0);
  double th = std::arg(z);
  if (th < 0.0) th += 2.0 * kPi;  // branch with arg in (0, 2 pi); R+ is the cut
  return std::polar(std::sqrt(std::abs(z)), 0.5 * th);
}

// Loop energy of gamma = R+ union eta through the chord-loop identity:
// I^L = I^C of eta in (C minus R+; 0, inf), computed by uniformizing with
// z -> sqrt(z) and extracting the driving function.
inline double loop_energy_via_chord(const std::vector<cxd>& eta) {
  if (eta.size() < 3) throw ParseError("loop_energy_via_chord: need at least 3 points");
  double scale = 0.0;
  for (const cxd& z : eta) scale = std::max(scale, std::abs(z));
  if (std::abs(eta.front()) > 1e-12 * std::max(1.0, scale))
    throw ParseError("loop_energy_via_chord: chord must start at 0");
  const double tol = 1e-9 * std::max(1.0, scale);
  for (std::size_t k = 1; k < eta.size(); ++k) {
    const cxd z = eta[k];
    const double dist = z.real() > 0.0 ? std::abs(z.imag()) : std::abs(z);
    if (dist < tol) throw SlitCollision("loop_energy_via_chord: chord touches R+");
  }
  HalfPlaneTrace tr;
  tr.points.reserve(eta.size());
  for (const cxd& z : eta) tr.points.push_back(slit_plane_sqrt(z));
  tr.points[0] = cxd(0.0, 0.0);
  return chordal_energy(tr);
}

// ---------------------------------------------------------------------------
// Multi-method report
// ---------------------------------------------------------------------------

struct EnergyReportParams {
  int series_order = 128;        // starting order for the series routes
  int max_series_order = 1024;   // doubling ceiling (liouville route)
  int grunsky_order = 512;       // truncation ceiling for the determinant
  int steps_per_unit = 400;      // zipper resolution for the driving route
  std::set<std::string> methods = {"dirichlet", "liouville", "grunsky"};
  double circle_detect_rel = 1e-8;
};

struct EnergyReport {
  std::optional<double> dirichlet, liouville, grunsky;
  std::map<std::string, std::string> flags;       // per-method error / status text
  std::map<std::string, double> discrepancies;    // pairwise absolute differences
  std::map<std::string, double> timings_ms;
  EnergyReportParams params;

  void compute_discrepancies() {
    discrepancies.clear();
    auto add = [&](const char* name, const std::optional<double>& a,
                   const std::optional<double>& b) {
      if (a && b) discrepancies[name] = std::abs(*a - *b);
    };
    add("dirichlet_liouville", dirichlet, liouville);
    add("dirichlet_grunsky", dirichlet, grunsky);
    add("liouville_grunsky", liouville, grunsky);
  }
};

namespace detail {

struct MethodTimer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double stop() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

// Driving route for a curve that is a circle: send it to a line through
// infinity, split the line at the image of the antipode, and unzip.
inline double circle_driving_route(const JordanCurve& curve, const CircleFit& fit,
                                   int /*steps_per_unit*/) {
  const auto pts = curve.samples(512);
  const cxd z0 = fit.center + cxd(fit.radius, 0.0);   // -> infinity
  const cxd z1 = fit.center - cxd(fit.radius, 0.0);   // -> 0
  std::vector<cxd> u;
  u.reserve(pts.size());
  for (const cxd& p : pts) {
    const cxd den = p - z0;
    if (std::abs(den) < 1e-3 * fit.radius) continue;  // too close to the pole
    u.push_back((p - z1) / den);
  }
  // direction of the image line through 0: arg of sum u^2 halves
  cxd s2 = 0.0;
  for (const cxd& v : u) s2 += v * v / (1.0 + std::norm(v));
  const double phi = 0.5 * std::arg(s2);
  // eta = the side of the line opposite to the R+ role, ordered outward
  std::vector<cxd> eta{cxd(0.0, 0.0)};
  std::vector<cxd> side;
  for (const cxd& v : u) {
    const cxd r = v * std::polar(1.0, -phi);
    if (r.real() < 0.0) side.push_back(r);
  }
  std::sort(side.begin(), side.end(),
            [](const cxd& a, const cxd& b) { return std::abs(a) < std::abs(b); });
  for (const cxd& r : side) eta.push_back(r);
  if (eta.size() < 8) throw NoConvergence("circle reduction produced too few points");
  return loop_energy_via_chord(eta);
}

}  // namespace detail

inline EnergyReport energy_report(const JordanCurve& curve_in, const EnergyReportParams& params) {
  const JordanCurve curve = canonical_ccw(curve_in);
  curve.validate();
  EnergyReport rep;
  rep.params = params;
  auto enabled = [&](const char* m) { return params.methods.count(m) > 0; };

  // -- liouville route (with automatic order doubling on the spectral tail)
  std::optional<ExteriorMapSeries> shared_g;
  if (enabled("liouville")) {
    detail::MethodTimer timer;
    try {
      int N = params.series_order;
      for (;;) {
        const DiskMapSeries f = fit_interior_map(curve, N);
        const ExteriorMapSeries g = fit_exterior_map(curve, N);
        const LogDerivResult df = log_deriv_dirichlet(f);
        const LogDerivResult dg = log_deriv_dirichlet(g);
        const double total = df.value + dg.value;
        const double tail = std::max(df.tail_fraction, dg.tail_fraction);
        if ((tail * total <= 1e-8 || N >= params.max_series_order)) {
          rep.liouville = universal_liouville_action(f, g);
          shared_g = g;
          if (tail * total > 1e-8)
            rep.flags["liouville"] = "tail above target at maximum series order";
          break;
        }
        N *= 2;
      }
    } catch (const Error& e) {
      rep.flags["liouville"] = e.what();
    }
    rep.timings_ms["liouville"] = timer.stop();
  }

  // -- grunsky route
  if (enabled("grunsky")) {
    detail::MethodTimer timer;
    try {
      ExteriorMapSeries g = (shared_g && shared_g->order() >= params.grunsky_order)
                                ? *shared_g
                                : fit_exterior_map(curve, params.grunsky_order);
      const GrunskyEnergyResult r = energy_via_grunsky(g, params.grunsky_order);
      rep.grunsky = r.value;
      if (!r.converged)
        rep.flags["grunsky"] = "non-convergent (possibly infinite): truncation ceiling reached";
    } catch (const Error& e) {
      rep.flags["grunsky"] = e.what();
    }
    rep.timings_ms["grunsky"] = timer.stop();
  }

  // -- driving route, available when the curve is a round circle
  if (enabled("dirichlet")) {
    detail::MethodTimer timer;
    try {
      const CircleFit fit = curve.fit_circle();
      if (fit.residual <= params.circle_detect_rel * fit.radius) {
        const double v = detail::circle_driving_route(curve, fit, params.steps_per_unit);
        rep.dirichlet = v;
      } else {
        rep.flags["dirichlet"] =
            "unavailable: bounded curve is not Mobius-reducible to a line through infinity";
      }
    } catch (const Error& e) {
      rep.flags["dirichlet"] = e.what();
    }
    rep.timings_ms["dirichlet"] = timer.stop();
  }

  rep.compute_discrepancies();
  return rep;
}

// Report for a curve through infinity given as a chord eta of the slit plane
// (gamma = R+ union eta). The driving route unzips sqrt(eta); the liouville
// route evaluates the two half-plane Dirichlet integrals by quadrature.
// Divergence is detected by dropping the outer quarter of the samples: if the
// value moves by more than 10 percent the energy is reported as
// non-convergent instead of as a number.
inline EnergyReport chord_energy_report(const std::vector<cxd>& eta,
                                        const EnergyReportParams& params) {
  EnergyReport rep;
  rep.params = params;

  auto unzip = [&](const std::vector<cxd>& pts) {
    HalfPlaneTrace tr;
    tr.points.reserve(pts.size());
    for (const cxd& z : pts) tr.points.push_back(slit_plane_sqrt(z));
    tr.points[0] = cxd(0.0);
    return extract_driving_with_chain(tr);
  };

  std::optional<UnzipResult> full_unzip;
  if (params.methods.count("dirichlet")) {
    detail::MethodTimer timer;
    try {
      const double full = loop_energy_via_chord(eta);
      std::vector<cxd> inner(eta.begin(), eta.begin() + (eta.size() * 3) / 4);
      const double trunc = loop_energy_via_chord(inner);
      if (std::abs(full - trunc) > 0.1 * std::max(std::abs(full), 1e-9)) {
        rep.flags["dirichlet"] = "non-convergent (possibly infinite)";
      } else {
        rep.dirichlet = full;
        full_unzip = unzip(eta);
      }
    } catch (const Error& e) {
      rep.flags["dirichlet"] = e.what();
    }
    rep.timings_ms["dirichlet"] = timer.stop();
  }

  if (params.methods.count("liouville")) {
    detail::MethodTimer timer;
    try {
      if (rep.flags.count("dirichlet")) {
        rep.flags["liouville"] = "skipped: driving route failed or non-convergent";
      } else {
        if (!full_unzip) full_unzip = unzip(eta);
        InfiniteCurveEnergyOptions opt;
        opt.threads = 0;
        rep.liouville = infinite_curve_energy(full_unzip->chain, opt).value;
      }
    } catch (const Error& e) {
      rep.flags["liouville"] = e.what();
    }
    rep.timings_ms["liouville"] = timer.stop();
  }

  rep.compute_discrepancies();
  return rep;
}

}  // namespace loewner
