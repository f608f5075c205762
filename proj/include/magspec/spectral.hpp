// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAGSPEC_SPECTRAL_HPP
#define MAGSPEC_SPECTRAL_HPP

#include <span>
#include <vector>

#include "magspec/geometry.hpp"
#include "magspec/landau.hpp"
#include "magspec/types.hpp"

namespace magspec {

/// Finite multiset of complex eigenvalues with algebraic multiplicities.
struct ComplexSpectrum {
  struct Item {
    Complex value;
    int multiplicity;
  };
  std::vector<Item> items;

  int total_multiplicity() const;
  std::vector<Complex> expanded() const;
};

/// Full eigendecomposition of a dense complex matrix. Eigenvalues closer than
/// 1e-8 (absolute) are merged into one entry with summed multiplicity. The
/// multiplicity-weighted sum is checked against the trace to 1e-8 relative.
ComplexSpectrum eigenvalues(const Matrix& a);

struct SchattenReport {
  double p;
  RealVector singular_values;  // decreasing
  double norm;                 // (sum sigma_i^p)^(1/p)
};

/// Schatten p-norm from the full singular value decomposition, p >= 1.
SchattenReport schatten_norm(const Matrix& a, double p);

template <class Derived>
SchattenReport schatten_norm(const Eigen::MatrixBase<Derived>& a, double p) {
  return schatten_norm(Matrix(a), p);
}

/// A one-sided weight for sandwiched resolvents: identity, a radial function
/// of the perpendicular variables, or a function of the longitudinal one.
struct Weight {
  enum class Kind { Identity, Perp, Longitudinal };
  Kind kind = Kind::Identity;
  Envelope env{};

  static Weight identity() { return {}; }
  static Weight perp(Envelope e) { return {Kind::Perp, e}; }
  static Weight longitudinal(Envelope e) { return {Kind::Longitudinal, e}; }
};

Matrix weight_matrix(const AssembledOperator& op, const Weight& w, int quad_order = 16);

/// W_L (H0 - lambda)^{-1} W_R on the truncation. Throws ResolventSingular if
/// lambda comes within 1e-12 of the unperturbed spectrum.
Matrix weighted_resolvent(const AssembledOperator& op, Complex lambda,
                          const Weight& left = Weight::identity(),
                          const Weight& right = Weight::identity(),
                          int quad_order = 16);

struct ResolventBoundPoint {
  Complex lambda;
  double lhs;        // ||W_L (H0-lambda)^{-1} W_R||_{S_p}^p
  double rhs_shape;  // the lambda-dependent factor of the bound, constant dropped
};

struct ResolventBoundProfile {
  std::vector<ResolventBoundPoint> points;
  double sup_ratio;  // empirical constant sup lhs / rhs_shape
};

/// Evaluates the Schatten resolvent bound along a path of spectral parameters
/// and reports the empirical constant of the family's bound shape.
ResolventBoundProfile resolvent_bound_profile(const AssembledOperator& op, double p,
                                              std::span<const Complex> path,
                                              const Weight& left = Weight::identity(),
                                              const Weight& right = Weight::identity(),
                                              int quad_order = 16);

struct HansmannReport {
  double lhs_sum;     // sum over sigma(B) of dist(., sigma(B0))^p
  double rhs_norm_p;  // ||B - B0||_{S_p}^p
  double ratio;
  double mu0;
};

/// Resolvent-difference eigenvalue comparison at the reference point mu0:
/// B0 = (H0 - mu0)^{-1}, B = (H - mu0)^{-1}.
HansmannReport hansmann_check(const AssembledOperator& op, double mu0, double p);

/// Reference point one unit left of the numerical-range bound of the family.
double default_mu0(const AssembledOperator& op);

}  // namespace magspec

#endif  // MAGSPEC_SPECTRAL_HPP
