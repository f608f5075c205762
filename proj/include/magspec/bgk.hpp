// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAGSPEC_BGK_HPP
#define MAGSPEC_BGK_HPP

#include <functional>
#include <span>
#include <vector>

#include "magspec/types.hpp"

namespace magspec {

/// Boundary growth data for a holomorphic function on the unit disk:
/// log|h(z)| <= K0 (1 - |z|)^{-alpha} prod_j |z - xi_j|^{-beta_j}.
struct GrowthData {
  double k0 = 0;
  double alpha = 0;
  std::vector<Complex> xi;     // singular points on the unit circle
  std::vector<double> beta;    // one exponent per xi
  double tau = 0.25;           // free exponent of the zero sum
  double max_residual = 0;     // max of log|h| - k0 * shape over the probe grid

  void validate() const;
};

/// sum over the zeros of (1 - |z|)^{alpha + 1 + tau} prod_j |z - xi_j|^{(beta_j - 1 + tau)_+}.
double bgk_zero_sum(std::span<const Complex> zeros, const GrowthData& data);

/// Finite Blaschke product with prescribed zeros, normalized so that the
/// nonvanishing factor equals 1 at the origin (hence h(0) = 1 when no zero
/// sits at 0).
class SyntheticH {
 public:
  static SyntheticH from_zeros(std::vector<Complex> zeros);

  /// Normalized product h(z) = B(z) / B0.
  Complex operator()(Complex z) const;
  /// Raw Blaschke product, unimodular on the circle.
  Complex blaschke(Complex z) const;
  const std::vector<Complex>& zeros() const { return zeros_; }

 private:
  std::vector<Complex> zeros_;
  double b0_ = 1.0;
};

struct GrowthShape {
  double alpha = 0;
  std::vector<Complex> xi;
  std::vector<double> beta;
  double tau = 0.25;
};

struct ProbeGrid {
  int n_radial = 24;
  int n_angular = 48;
  double r_max = 0.995;
};

/// Least-squares fit of the single prefactor K0 for a fixed growth shape,
/// probing log|h| on a polar grid. The grid must avoid zeros of h.
GrowthData fit_growth(const std::function<Complex(Complex)>& h, const GrowthShape& shape,
                      const ProbeGrid& probe);

}  // namespace magspec

#endif  // MAGSPEC_BGK_HPP
