// Discretized chordal Loewner evolution in the upper half-plane.
//
// A driving function W on [0,T] is approximated step by step with elementary
// slit maps. The tilted-slit map removes a straight segment of prescribed
// half-plane capacity dt and driving displacement dw in a single step and is
// exactly capacity-normalized:
//
//   h(w) = (w+p)^(1-a) (w-q)^a,  p = a*s, q = (1-a)*s,
//   s = sqrt(dw^2 + 16 dt),      a = (1 - dw/s)/2,
//
// maps H onto H minus a segment from 0 at angle a*pi; h is the inverse of the
// uniformizing map g of that hull, g(z) = z + 2 dt / z + O(1/z^2), and
// g(tip) = dw. The vertical-slit map is the a = 1/2 special case with an
// extra real jump; both directions of it are closed form, which is what the
// trace-to-driving unzipper needs.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

#include "loewner/errors.hpp"

namespace loewner {

using cxd = std::complex<double>;

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

// Piecewise-linear driving function of capacity time.
struct DrivingFunction {
  std::vector<double> times;   // strictly increasing, times[0] == 0
  std::vector<double> values;  // same length

  double total_capacity() const { return times.empty() ? 0.0 : times.back(); }

  void validate() const {
    if (times.size() < 2 || times.size() != values.size())
      throw ParseError("driving: need at least two (t,w) samples of equal length");
    if (times.front() != 0.0) throw ParseError("driving: times[0] must be 0");
    for (std::size_t i = 1; i < times.size(); ++i)
      if (!(times[i] > times[i - 1]))
        throw ParseError("driving: times must be strictly increasing");
    for (double v : values)
      if (!std::isfinite(v)) throw ParseError("driving: values must be finite");
  }

  // Piecewise-linear interpolation, clamped outside [0, T].
  double sample(double t) const {
    if (t <= times.front()) return values.front();
    if (t >= times.back()) return values.back();
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t i = static_cast<std::size_t>(it - times.begin());
    const double t0 = times[i - 1], t1 = times[i];
    const double u = (t - t0) / (t1 - t0);
    return values[i - 1] * (1.0 - u) + values[i] * u;
  }
};

// Simple curve in the closed upper half-plane with optional capacity stamps.
struct HalfPlaneTrace {
  std::vector<cxd> points;
  std::vector<double> capacities;  // empty or aligned with points

  double scale() const {
    double s = 0.0;
    for (const cxd& p : points) s = std::max(s, std::abs(p));
    return s;
  }

  void validate(bool check_simple = true) const;
};

enum class SlitKind { vertical, tilted };

enum class MapDirection { forward, inverse };  // forward = uniformize (g), inverse = weld (g^-1)

// Value with first and second derivative, composed through map chains.
struct Jet2 {
  cxd f, df, ddf;
};

namespace detail {

inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& body) {
  int nt = threads;
  if (nt <= 0) nt = static_cast<int>(std::thread::hardware_concurrency());
  if (nt <= 1 || n < 64) {
    body(0, n);
    return;
  }
  nt = std::min<int>(nt, 32);
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + nt - 1) / nt;
  for (int t = 0; t < nt; ++t) {
    const std::size_t lo = std::min(n, t * chunk), hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] { body(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

// One elementary conformal map descriptor.
struct SlitStep {
  SlitKind kind = SlitKind::tilted;
  double dt = 0.0;  // capacity increment, > 0
  double dw = 0.0;  // driving displacement over the step
  double w0 = 0.0;  // driving value at step start
  // cached tilted-slit parameters
  double alpha = 0.5, p = 0.0, q = 0.0;

  static SlitStep tilted(double dt, double dw, double w0) {
    SlitStep s;
    s.kind = SlitKind::tilted;
    s.dt = dt;
    s.dw = dw;
    s.w0 = w0;
    const double len = std::sqrt(dw * dw + 16.0 * dt);
    s.alpha = 0.5 * (1.0 - dw / len);
    s.p = s.alpha * len;
    s.q = (1.0 - s.alpha) * len;
    return s;
  }

  static SlitStep vertical(double dt, double dw, double w0) {
    SlitStep s;
    s.kind = SlitKind::vertical;
    s.dt = dt;
    s.dw = dw;
    s.w0 = w0;
    return s;
  }

  double w_end() const { return w0 + dw; }

  // Tip of the elementary hull in absolute coordinates.
  cxd tip() const {
    if (kind == SlitKind::vertical) return cxd(w_end(), 2.0 * std::sqrt(dt));
    const double s = p + q;
    const double r = s * std::pow(1.0 - alpha, 1.0 - alpha) * std::pow(alpha, alpha);
    return cxd(w0, 0.0) + r * std::polar(1.0, alpha * kPi);
  }

  // g^-1: H -> H minus slit. Accepts boundary points (Im z == +0).
  cxd weld(cxd z) const {
    if (z.imag() == 0.0) z = cxd(z.real(), 0.0);  // normalize -0.0
    if (kind == SlitKind::vertical) {
      const double x = w_end();
      cxd w = z - x;
      if (w == cxd(0.0)) return cxd(x, 2.0 * std::sqrt(dt));
      return x + w * std::sqrt(1.0 - 4.0 * dt / (w * w));
    }
    const cxd w = z - w0;
    return w0 + std::exp((1.0 - alpha) * std::log(w + p) + alpha * std::log(w - q));
  }

  Jet2 weld_jet(cxd z) const {
    if (z.imag() == 0.0) z = cxd(z.real(), 0.0);
    if (kind == SlitKind::vertical) {
      const double x = w_end();
      const cxd w = z - x;
      const cxd root = (w == cxd(0.0)) ? cxd(0.0, 2.0 * std::sqrt(dt))
                                       : w * std::sqrt(1.0 - 4.0 * dt / (w * w));
      // f = x + sqrt(w^2 - 4 dt): f' = w/root, f'' = -4 dt / root^3
      return Jet2{x + root, w / root, -4.0 * dt / (root * root * root)};
    }
    const cxd w = z - w0;
    const cxd val = w0 + std::exp((1.0 - alpha) * std::log(w + p) + alpha * std::log(w - q));
    const cxd base = val - w0;
    const cxd L = (1.0 - alpha) / (w + p) + alpha / (w - q);
    const cxd dL = -(1.0 - alpha) / ((w + p) * (w + p)) - alpha / ((w - q) * (w - q));
    const cxd d1 = base * L;
    const cxd d2 = d1 * L + base * dL;
    return Jet2{val, d1, d2};
  }

  // g: H minus slit -> H. Closed form for vertical slits; one-dimensional
  // Newton on the closed-form weld for tilted slits.
  cxd uniformize(cxd z) const {
    if (z.imag() == 0.0) z = cxd(z.real(), 0.0);
    if (kind == SlitKind::vertical) {
      const double x = w_end();
      const cxd w = z - x;
      if (w == cxd(0.0)) return cxd(x, 0.0);
      return x + w * std::sqrt(1.0 + 4.0 * dt / (w * w));
    }
    // initial guess from the hydrodynamic expansion h(w) ~ w - 2 dt / w
    cxd w = z - w0;
    if (std::abs(w) > 1e-3) w += 2.0 * dt / w;
    if (w.imag() < 0.0) w = cxd(w.real(), 0.0);
    const double tol = 1e-14 * (1.0 + std::abs(z));
    for (int it = 0; it < 80; ++it) {
      const cxd wp = w + p, wq = w - q;
      if (wp == cxd(0.0) || wq == cxd(0.0)) break;
      const cxd val = std::exp((1.0 - alpha) * std::log(wp) + alpha * std::log(wq));
      const cxd resid = w0 + val - z;
      if (std::abs(resid) < tol) return w0 + w;
      const cxd deriv = val * ((1.0 - alpha) / wp + alpha / wq);
      cxd step = resid / deriv;
      // keep the iterate in the closed upper half-plane
      cxd next = w - step;
      int halvings = 0;
      while (next.imag() < 0.0 && halvings < 30) {
        step *= 0.5;
        next = w - step;
        ++halvings;
      }
      w = next;
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) break;
    }
    throw NonFiniteEvaluation("uniformize: Newton failed near the slit");
  }
};

// Ordered composition of elementary maps; g_total = G_n o ... o G_1.
struct SlitMapChain {
  std::vector<SlitStep> steps;
  double total_capacity = 0.0;

  double capacity_increment_sum() const {
    double t = 0.0;
    for (const auto& s : steps) t += s.dt;
    return t;
  }

  void validate() const {
    const double sum = capacity_increment_sum();
    if (std::abs(sum - total_capacity) > 1e-12 * std::max(1.0, std::abs(total_capacity)))
      throw ParseError("chain: capacity increments inconsistent with total capacity");
  }

  double driving_start() const { return steps.empty() ? 0.0 : steps.front().w0; }
  double driving_end() const { return steps.empty() ? 0.0 : steps.back().w_end(); }

  // forward: g_T(z); inverse: g_T^{-1}(z) by composing elementary inverses in
  // reverse order.
  cxd evaluate(cxd z, MapDirection dir) const {
    cxd v = z;
    if (dir == MapDirection::forward) {
      for (const auto& s : steps) v = s.uniformize(v);
    } else {
      for (std::size_t i = steps.size(); i-- > 0;) v = steps[i].weld(v);
    }
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NonFiniteEvaluation("evaluate_chain: non-finite value");
    return v;
  }

  // Jet of g_T^{-1} at z (value and two derivatives).
  Jet2 weld_jet(cxd z) const {
    Jet2 acc{z, 1.0, 0.0};
    for (std::size_t i = steps.size(); i-- > 0;) {
      const Jet2 m = steps[i].weld_jet(acc.f);
      acc = Jet2{m.f, m.df * acc.df, m.ddf * acc.df * acc.df + m.df * acc.ddf};
    }
    if (!std::isfinite(acc.f.real()) || !std::isfinite(acc.f.imag()))
      throw NonFiniteEvaluation("weld_jet: non-finite value");
    return acc;
  }

  // Append another chain, rebasing its driving positions so the composed
  // evolution is continuous; capacities add exactly.
  SlitMapChain concat(const SlitMapChain& tail) const {
    SlitMapChain out = *this;
    const double shift = driving_end() - tail.driving_start();
    for (SlitStep s : tail.steps) {
      s.w0 += shift;
      out.steps.push_back(s);
    }
    out.total_capacity = total_capacity + tail.total_capacity;
    return out;
  }
};

inline cxd evaluate_chain(const SlitMapChain& chain, cxd z, MapDirection dir) {
  return chain.evaluate(z, dir);
}

// ---------------------------------------------------------------------------
// Forward evolution: driving -> trace
// ---------------------------------------------------------------------------

inline SlitMapChain chain_from_driving(const DrivingFunction& w, int steps_per_unit_capacity) {
  w.validate();
  if (steps_per_unit_capacity < 1)
    throw DomainError("solve_forward: steps_per_unit_capacity must be >= 1");
  const double T = w.total_capacity();
  const std::size_t n = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(T * steps_per_unit_capacity - 1e-12)));
  const double dt = T / static_cast<double>(n);
  SlitMapChain chain;
  chain.total_capacity = T;
  chain.steps.reserve(n);
  double wprev = w.values.front();
  for (std::size_t k = 1; k <= n; ++k) {
    const double wk = w.sample(dt * static_cast<double>(k));
    chain.steps.push_back(SlitStep::tilted(dt, wk - wprev, wprev));
    wprev = wk;
  }
  return chain;
}

// Tip positions gamma(t_k) = g_{t_k}^{-1}(W_{t_k}) on the uniform capacity
// grid; threads <= 0 means use all hardware threads, 1 forces serial.
inline HalfPlaneTrace solve_forward(const DrivingFunction& w, int steps_per_unit_capacity,
                                    int threads = 1) {
  const SlitMapChain chain = chain_from_driving(w, steps_per_unit_capacity);
  const std::size_t n = chain.steps.size();
  const double dt = chain.steps.front().dt;
  HalfPlaneTrace tr;
  tr.points.assign(n + 1, cxd(0.0));
  tr.capacities.assign(n + 1, 0.0);
  tr.points[0] = cxd(w.values.front(), 0.0);
  std::atomic<bool> bad{false};
  detail::parallel_for(n, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo + 1; k <= hi; ++k) {
      cxd z = chain.steps[k - 1].tip();
      for (std::size_t i = k - 1; i-- > 0;) z = chain.steps[i].weld(z);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        bad = true;
        return;
      }
      tr.points[k] = z;
      tr.capacities[k] = dt * static_cast<double>(k);
    }
  });
  if (bad)
    throw NonFiniteEvaluation(
        "solve_forward: composition produced NaN/Inf; increase steps_per_unit_capacity");
  return tr;
}

// ---------------------------------------------------------------------------
// Inverse evolution (zipper): trace -> driving
// ---------------------------------------------------------------------------

struct UnzipResult {
  DrivingFunction driving;
  SlitMapChain chain;  // vertical-slit steps; evaluate(.., forward) unzips the curve
};

// Unzips the trace with vertical-slit maps: at each step the image of the
// next point is (x, y); the elementary uniformizer x + sqrt((z-x)^2 + y^2)
// removes it, consuming capacity y^2/4 and moving the driving to x.
inline UnzipResult extract_driving_with_chain(const HalfPlaneTrace& trace) {
  const std::size_t m = trace.points.size();
  if (m < 3) throw ParseError("extract_driving: need at least 3 trace points");
  const double scale = std::max(1.0, trace.scale());
  if (std::abs(trace.points[0].imag()) > 1e-12 * scale)
    throw ParseError("extract_driving: points[0] must lie on the real axis");

  std::vector<cxd> cur(trace.points.begin(), trace.points.end());
  const double leave_tol = 1e-9 * scale;

  UnzipResult out;
  out.driving.times.reserve(m);
  out.driving.values.reserve(m);
  out.driving.times.push_back(0.0);
  out.driving.values.push_back(cur[0].real());
  double t = 0.0;
  double wprev = cur[0].real();
  for (std::size_t k = 1; k < m; ++k) {
    if (std::abs(trace.points[k] - trace.points[k - 1]) == 0.0)
      throw DegenerateStep("extract_driving: consecutive trace points coincide");
    const cxd zk = cur[k];
    const double y = zk.imag();
    // A simple curve unzips to strictly positive heights; an image at or
    // below the axis means the point sits on an already-unzipped arc.
    if (y <= leave_tol)
      throw SelfIntersection("extract_driving: unzipped point reached the boundary");
    const double x = zk.real();
    const double dt = y * y / 4.0;
    const SlitStep step = SlitStep::vertical(dt, x - wprev, wprev);
    for (std::size_t j = k + 1; j < m; ++j) {
      cur[j] = step.uniformize(cur[j]);
      if (!std::isfinite(cur[j].real()) || !std::isfinite(cur[j].imag()))
        throw NonFiniteEvaluation("extract_driving: non-finite unzipped point");
    }
    out.chain.steps.push_back(step);
    t += dt;
    wprev = x;
    out.driving.times.push_back(t);
    out.driving.values.push_back(x);
  }
  out.chain.total_capacity = t;
  return out;
}

inline DrivingFunction extract_driving(const HalfPlaneTrace& trace) {
  return extract_driving_with_chain(trace).driving;
}

// ---------------------------------------------------------------------------

inline double segment_distance(cxd a0, cxd a1, cxd b0, cxd b1) {
  auto clamp01 = [](double u) { return std::max(0.0, std::min(1.0, u)); };
  auto point_seg = [&](cxd p, cxd s0, cxd s1) {
    const cxd d = s1 - s0;
    const double len2 = std::norm(d);
    const double u = len2 == 0.0 ? 0.0 : clamp01(((p - s0) * std::conj(d)).real() / len2);
    return std::abs(p - (s0 + u * d));
  };
  double best = point_seg(a0, b0, b1);
  best = std::min(best, point_seg(a1, b0, b1));
  best = std::min(best, point_seg(b0, a0, a1));
  best = std::min(best, point_seg(b1, a0, a1));
  return best;
}

inline void HalfPlaneTrace::validate(bool check_simple) const {
  if (points.size() < 2) throw ParseError("trace: need at least 2 points");
  const double s = std::max(1.0, scale());
  if (std::abs(points[0].imag()) > 1e-12 * s)
    throw ParseError("trace: points[0] must lie on the real axis");
  for (const cxd& p : points) {
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag()))
      throw ParseError("trace: non-finite point");
    if (p.imag() < -1e-12 * s) throw ParseError("trace: point below the real axis");
  }
  if (!capacities.empty()) {
    if (capacities.size() != points.size())
      throw ParseError("trace: capacities length mismatch");
    for (std::size_t i = 1; i < capacities.size(); ++i)
      if (!(capacities[i] > capacities[i - 1]))
        throw ParseError("trace: capacities must be strictly increasing");
  }
  if (check_simple && points.size() <= 2048) {
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
      for (std::size_t j = i + 2; j + 1 < points.size(); ++j) {
        if (segment_distance(points[i], points[i + 1], points[j], points[j + 1]) == 0.0)
          throw ParseError("trace: self-intersection at sample resolution");
      }
  }
}

}  // namespace loewner
