// Grunsky coefficients of an exterior map and the truncated Fredholm
// determinant det(I - G*G).
//
// Convention: log((g(z) - g(w))/(z - w)) = log b1 - sum_{m,n>=1} b_mn z^-m w^-n.
// The b_mn are computed through the Faber polynomials of g: with
// P_m(w) := Phi_m(g(w)) = w^m + m sum_n b_mn w^-n, the P_m satisfy the
// closed recursion
//
//   b1 P_{n+1} = g P_n - sum_{m=1}^{n} e_m P_m - e_0,
//   e_m = b0 [m=n] + b_{-(n-m)} [m<n] + b1 c^(n)_1 [m=0],
//
// where c^(n)_j are the negative-power coefficients of P_n. Scaling g -> t g
// and translation g -> g + s leave all b_mn unchanged.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "loewner/conformal.hpp"
#include "loewner/errors.hpp"

namespace loewner {

struct GrunskyMatrix {
  // entries sqrt(m n) b_mn, 1 <= m,n <= N; exactly symmetric
  Eigen::MatrixXcd mat;
  int generator_truncation = 0;  // truncation order of the generating map

  int size() const { return static_cast<int>(mat.rows()); }

  // largest singular value by power iteration on G^H G
  double operator_norm() const {
    const int n = size();
    if (n == 0) return 0.0;
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(n) / std::sqrt(double(n));
    double lam = 0.0;
    for (int it = 0; it < 200; ++it) {
      Eigen::VectorXcd w = mat.adjoint() * (mat * v);
      const double nw = w.norm();
      if (nw == 0.0) return 0.0;
      w /= nw;
      const double lam_new = std::abs((w.adjoint() * (mat.adjoint() * (mat * w)))(0, 0));
      if (std::abs(lam_new - lam) < 1e-14 * std::max(1.0, lam_new)) {
        lam = lam_new;
        break;
      }
      lam = lam_new;
      v = w;
    }
    return std::sqrt(lam);
  }
};

inline GrunskyMatrix grunsky_coefficients(const ExteriorMapSeries& g, int N) {
  if (g.b1 == 0.0) throw DomainError("grunsky: b1 must be nonzero");
  if (N < 1) throw DomainError("grunsky: N must be >= 1");
  if (N > g.order())
    throw TruncationTooSmall("grunsky: N exceeds the truncation of the generating map");
  const int Ng = g.order();
  const int L = 2 * N;  // keep extra negative powers so rows up to N stay exact
  const double b1 = g.b1;
  const cxd b0 = g.b0;
  auto bneg = [&](int k) { return (k >= 1 && k <= Ng) ? g.bneg[k - 1] : cxd(0.0); };

  // rows[m - 1][j - 1] = c^(m)_j
  std::vector<std::vector<cxd>> rows;
  rows.reserve(N);
  std::vector<cxd> cur(L, cxd(0.0));
  for (int j = 1; j <= L; ++j) cur[j - 1] = bneg(j) / b1;
  rows.push_back(cur);

  for (int n = 1; n < N; ++n) {
    const std::vector<cxd>& c = rows[n - 1];
    std::vector<cxd> e(n + 1, cxd(0.0));
    for (int m = 0; m < n; ++m) e[m] = bneg(n - m);
    e[n] += b0;
    e[0] += b1 * c[0];
    std::vector<cxd> next(L, cxd(0.0));
    for (int j = 1; j <= L; ++j) {
      cxd acc = (j < L ? b1 * c[j] : cxd(0.0)) + b0 * c[j - 1];
      const int kmax = std::min(j - 1, Ng);
      for (int k = 1; k <= kmax; ++k) acc += bneg(k) * c[j - k - 1];
      acc += bneg(n + j);
      for (int m = 1; m <= n; ++m) {
        if (e[m] == cxd(0.0)) continue;
        acc -= e[m] * rows[m - 1][j - 1];
      }
      next[j - 1] = acc / b1;
    }
    rows.push_back(std::move(next));
  }

  GrunskyMatrix G;
  G.generator_truncation = Ng;
  G.mat.resize(N, N);
  for (int m = 1; m <= N; ++m)
    for (int n = 1; n <= N; ++n)
      G.mat(m - 1, n - 1) = std::sqrt(double(m) * double(n)) * rows[m - 1][n - 1] / double(m);
  // b_mn = b_nm holds for the untruncated series; enforce it exactly
  G.mat = ((G.mat + G.mat.transpose()) / 2.0).eval();
  return G;
}

struct LogDetResult {
  double value = 0.0;      // log det(I - G*G) <= 0
  double half_diff = 0.0;  // |value(N) - value(N/2)|, a truncation diagnostic
};

namespace detail {

inline double logdet_one_minus_gstarg_dense(const Eigen::MatrixXcd& G) {
  const int n = static_cast<int>(G.rows());
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(n, n) - G.adjoint() * G;
  Eigen::LLT<Eigen::MatrixXcd> llt(A);
  if (llt.info() != Eigen::Success)
    throw NormAtLeastOne("log_det: I - G*G is not positive definite");
  double ld = 0.0;
  for (int i = 0; i < n; ++i) ld += std::log(llt.matrixL()(i, i).real());
  return 2.0 * ld;
}

}  // namespace detail

inline LogDetResult log_det_one_minus_GstarG(const GrunskyMatrix& G) {
  const double nrm = G.operator_norm();
  if (nrm >= 1.0 - 1e-12)
    throw NormAtLeastOne("log_det: operator norm " + std::to_string(nrm) + " >= 1");
  LogDetResult r;
  r.value = detail::logdet_one_minus_gstarg_dense(G.mat);
  const int half = G.size() / 2;
  if (half >= 1) {
    const double vh = detail::logdet_one_minus_gstarg_dense(G.mat.topLeftCorner(half, half));
    r.half_diff = std::abs(r.value - vh);
  }
  return r;
}

struct GrunskyEnergyResult {
  double value = 0.0;
  int order_used = 0;
  double last_change = 0.0;
  bool converged = true;
};

// I^L = -12 log det(I - G*G), with truncation refinement doubling the order
// until the value moves by less than tol or the ceiling N is reached.
inline GrunskyEnergyResult energy_via_grunsky(const ExteriorMapSeries& g, int N,
                                              double tol = 1e-8) {
  if (N < 1 || N > g.order())
    throw TruncationTooSmall("energy_via_grunsky: need 1 <= N <= truncation of g");
  GrunskyEnergyResult out;
  double prev = 0.0;
  bool have_prev = false;
  int order = std::min(32, N);
  while (true) {
    const GrunskyMatrix G = grunsky_coefficients(g, order);
    out.value = -12.0 * log_det_one_minus_GstarG(G).value;
    out.order_used = order;
    if (have_prev) {
      out.last_change = std::abs(out.value - prev);
      if (out.last_change < tol) return out;
    }
    if (order == N) break;
    prev = out.value;
    have_prev = true;
    order = std::min(2 * order, N);
  }
  out.converged = have_prev ? (out.last_change < tol) : true;
  return out;
}

inline GrunskyEnergyResult energy_via_grunsky(const JordanCurve& curve, int N,
                                              double tol = 1e-8,
                                              const FitOptions& fit_opt = {}) {
  const ExteriorMapSeries g = fit_exterior_map(curve, N, fit_opt);
  return energy_via_grunsky(g, N, tol);
}

}  // namespace loewner
