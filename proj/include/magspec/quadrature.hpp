// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAGSPEC_QUADRATURE_HPP
#define MAGSPEC_QUADRATURE_HPP

#include <functional>
#include <vector>

#include "magspec/types.hpp"

namespace magspec {

/// Nodes and weights of a one-dimensional quadrature rule.
struct QuadratureRule {
  RealVector nodes;
  RealVector weights;

  template <class F>
  double apply(F&& f) const {
    double s = 0;
    for (Eigen::Index i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

/// Gauss-Legendre rule on [-1, 1], computed by Golub-Welsch. Cached per order.
const QuadratureRule& gauss_legendre(int n);

/// Gauss-Jacobi rule on [-1, 1] for the weight (1-x)^a (1+x)^b, a, b > -1.
QuadratureRule gauss_jacobi(int n, double a, double b);

/// Composite Gauss-Legendre rule over consecutive panels given by
/// `breakpoints` (increasing), `order` points per panel.
QuadratureRule composite_legendre(const std::vector<double>& breakpoints, int order);

/// Adaptive integral of f over (0, inf) with an exp-sinh transformation.
/// Suitable for integrands with algebraic or faster decay at infinity and at
/// most a mild integrable singularity at 0. Relative accuracy ~rel_tol.
double integrate_positive_axis(const std::function<double(double)>& f,
                               double rel_tol = 1e-12);

/// Associated Laguerre polynomial L_n^k(x) by upward recurrence.
double laguerre(int n, double k, double x);

}  // namespace magspec

#endif  // MAGSPEC_QUADRATURE_HPP
