// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAGSPEC_CONFORMAL_HPP
#define MAGSPEC_CONFORMAL_HPP

#include <array>
#include <cstdint>

#include "magspec/geometry.hpp"
#include "magspec/types.hpp"

namespace magspec {

/// The resolvent-type Moebius map z = 1/(lambda - mu0).
Complex phi_mobius(Complex lambda, double mu0);
Complex phi_mobius_inverse(Complex z, double mu0);

/// dist(phi(lambda), phi(levels)) * (1 + |lambda|)^2 / dist(lambda, levels):
/// the quantity whose positive infimum the distortion bound asserts.
double distortion_ratio(Complex lambda, double mu0, const LevelGeometry& geom);

struct SamplerSpec {
  long count = 10000;
  double radius = 50.0;
  std::uint64_t seed = 0;
};

struct DistortionProfile {
  double empirical_inf;      // infimum of the distortion ratio over the samples
  Complex argmin;
  double halfline_inf;       // same ratio with the half line [level0, inf)
  double ball_region_inf;    // restricted to the union of level balls
  long complement_samples;   // samples that landed in the ball complement
  long sandwich_violations;  // failures of the two-sided distance comparison
};

/// Samples the disk |lambda| <= radius (minus thin tubes around the levels),
/// tracks the empirical infima of the distortion ratios, and verifies the
/// exact two-sided comparison between point-set and half-line distances on the
/// ball complement, in both the lambda and the image plane.
DistortionProfile distortion_profile(double mu0, const LevelGeometry& geom,
                                     const SamplerSpec& sampler);

/// Axis-aligned rectangle with two vertices on the real axis and the other
/// two at signed height h (one half-plane).
struct RectangleDomain {
  double x_left = 0;
  double x_right = 1;
  double height = 1;           // signed; > 0 for the upper half-plane
  double contained_level = 0;  // the one Landau level inside, when applicable
  double delta = 0;            // horizontal margin used to build the rectangle

  Complex v1() const { return {x_left, 0}; }
  Complex v2() const { return {x_left, height}; }
  Complex v3() const { return {x_right, height}; }
  Complex v4() const { return {x_right, 0}; }
  double width() const { return x_right - x_left; }
  Complex center() const { return {0.5 * (x_left + x_right), 0.5 * height}; }
  bool contains(Complex lambda, double pad = 0) const;
  void validate() const;

  /// Rectangle around level j: horizontal reach gap/2 - delta on both sides,
  /// height 2 v_sup into the requested half-plane.
  static RectangleDomain around_level(const LevelGeometry& geom, int j, double delta,
                                      double v_sup, bool upper_half = true);
};

/// Conformal map of the unit disk onto a rectangle with prescribed conformal
/// center, in derivative form C / prod (z - z_k)^{1/2} with the prevertices
/// on the unit circle. Calibrated once, then evaluated by path quadrature.
struct ConformalRectMap {
  std::array<Complex, 4> prevertices;  // ordered to match v1..v4 of the rectangle
  Complex scale;                       // derivative at the conformal center
  Complex lambda0;
  RectangleDomain rect;
  int n_quad = 128;

  // centered-map internals
  double alpha = 0;        // symmetric prevertex angle of the centered problem
  double c_centered = 1;   // positive scale of the centered problem
  Complex orientation{0, -1};
  Complex automorphism_a{0, 0};

  Complex forward(Complex z) const;
  Complex derivative(Complex z) const;
  Complex inverse(Complex lambda) const;
};

/// Solves the prevertex problem (two real unknowns for the centered,
/// reflection-symmetric configuration: the prevertex angle and the scale) by
/// bisection plus damped Newton on the half-side lengths; a general conformal
/// center is reached by composing with a disk automorphism.
ConformalRectMap sc_calibrate(const RectangleDomain& rect, Complex lambda0, int n_quad);

struct Comparability {
  double c_min;       // boundary relation: dist(l, edge) dist(l, vertices) vs dist(z, circle)
  double c_max;
  double edge_c_min;  // real-axis-edge relation of the same shape
  double edge_c_max;
};

/// Ratios of boundary/corner distances in the rectangle against their disk
/// counterparts over an interior polar grid; returns the extreme ratios of
/// the two comparability relations separately (each has its own constants).
Comparability comparability_check(const ConformalRectMap& map, int grid_n);

struct PreparedRectMap {
  ConformalRectMap map;
  bool height_scaled;
  double scale_factor;
};

/// Map for the zero-counting pipeline: conformal center at the rectangle
/// center, with the height enlarged (for map purposes only) whenever the
/// center would otherwise sit closer than 1 + 2 v_sup to the real axis or to
/// the numerical-range strip.
PreparedRectMap prepare_level_map(const RectangleDomain& rect, double v_sup, int n_quad);

}  // namespace magspec

#endif  // MAGSPEC_CONFORMAL_HPP
