// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "magspec/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace magspec {

namespace {

// Golub-Welsch: nodes are eigenvalues of the symmetric tridiagonal Jacobi
// matrix, weights are mu0 times the squared first eigenvector components.
QuadratureRule golub_welsch(const RealVector& alpha, const RealVector& beta_sq,
                            double mu0) {
  const Eigen::Index n = alpha.size();
  RealMatrix j = RealMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    j(i, i) = alpha[i];
    if (i + 1 < n) {
      const double off = std::sqrt(beta_sq[i + 1]);
      j(i, i + 1) = off;
      j(i + 1, i) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(j);
  if (es.info() != Eigen::Success) throw QuadratureError("Golub-Welsch eigensolve failed");
  QuadratureRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

}  // namespace

const QuadratureRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  static std::map<int, QuadratureRule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  RealVector alpha = RealVector::Zero(n);
  RealVector beta_sq = RealVector::Zero(n);
  for (int k = 1; k < n; ++k) beta_sq[k] = k * k / (4.0 * k * k - 1.0);
  auto rule = golub_welsch(alpha, beta_sq, 2.0);
  return cache.emplace(n, std::move(rule)).first->second;
}

QuadratureRule gauss_jacobi(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi: order must be >= 1");
  if (a <= -1 || b <= -1) throw std::invalid_argument("gauss_jacobi: exponents must be > -1");
  RealVector alpha(n), beta_sq(n);
  const double apb = a + b;
  alpha[0] = (b - a) / (apb + 2.0);
  beta_sq[0] = 0;
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + apb;
    alpha[k] = (b * b - a * a) / (s * (s + 2.0));
    if (k == 1) {
      // The generic formula has a removable (1 + a + b) cancellation at k = 1.
      beta_sq[1] = 4.0 * (1.0 + a) * (1.0 + b) / ((apb + 2.0) * (apb + 2.0) * (apb + 3.0));
    } else {
      beta_sq[k] = 4.0 * k * (k + a) * (k + b) * (k + apb) /
                   (s * s * (s + 1.0) * (s - 1.0));
    }
  }
  const double mu0 =
      std::pow(2.0, apb + 1.0) *
      std::exp(std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(apb + 2.0));
  return golub_welsch(alpha, beta_sq, mu0);
}

QuadratureRule composite_legendre(const std::vector<double>& breakpoints, int order) {
  if (breakpoints.size() < 2) throw std::invalid_argument("composite_legendre: need >= 2 breakpoints");
  const auto& base = gauss_legendre(order);
  const Eigen::Index panels = static_cast<Eigen::Index>(breakpoints.size()) - 1;
  QuadratureRule rule;
  rule.nodes.resize(panels * order);
  rule.weights.resize(panels * order);
  Eigen::Index at = 0;
  for (Eigen::Index p = 0; p < panels; ++p) {
    const double lo = breakpoints[p], hi = breakpoints[p + 1];
    if (!(hi > lo)) throw std::invalid_argument("composite_legendre: breakpoints must increase");
    const double h = 0.5 * (hi - lo), c = 0.5 * (hi + lo);
    for (int i = 0; i < order; ++i, ++at) {
      rule.nodes[at] = c + h * base.nodes[i];
      rule.weights[at] = h * base.weights[i];
    }
  }
  return rule;
}

double integrate_positive_axis(const std::function<double(double)>& f, double rel_tol) {
  // exp-sinh rule: x = exp(c*sinh(t)), dx = x*c*cosh(t) dt, c = pi/2.
  const double c = 1.5707963267948966;
  auto level_sum = [&](double h, double& abs_sum) {
    double s = 0;
    abs_sum = 0;
    for (int sign : {1, -1}) {
      for (int k = (sign > 0 ? 0 : 1); k < 4000; ++k) {
        const double t = sign * k * h;
        const double sh = c * std::sinh(t);
        if (std::abs(sh) > 700.0) break;
        const double x = std::exp(sh);
        const double w = x * c * std::cosh(t) * h;
        const double term = w * f(x);
        if (std::isfinite(term)) {
          s += term;
          abs_sum += std::abs(term);
        }
        if (k > 8 && std::abs(term) < 1e-300 + abs_sum * 1e-18) break;
      }
    }
    return s;
  };
  double h = 0.5;
  double abs_prev = 0;
  double prev = level_sum(h, abs_prev);
  for (int lvl = 0; lvl < 10; ++lvl) {
    h *= 0.5;
    double abs_cur = 0;
    const double cur = level_sum(h, abs_cur);
    // the absolute floor covers integrals that vanish by cancellation
    const double tol = rel_tol * std::max(std::abs(cur), 1e-3 * abs_cur + 1e-300);
    if (std::abs(cur - prev) <= tol) return cur;
    prev = cur;
  }
  throw QuadratureError("integrate_positive_axis: no convergence");
}

double laguerre(int n, double k, double x) {
  if (n < 0) throw std::invalid_argument("laguerre: n must be >= 0");
  double lm2 = 1.0;
  if (n == 0) return lm2;
  double lm1 = 1.0 + k - x;
  for (int j = 2; j <= n; ++j) {
    const double l = ((2.0 * j - 1.0 + k - x) * lm1 - (j - 1.0 + k) * lm2) / j;
    lm2 = lm1;
    lm1 = l;
  }
  return lm1;
}

}  // namespace magspec
