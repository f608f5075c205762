// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAGSPEC_GEOMETRY_HPP
#define MAGSPEC_GEOMETRY_HPP

#include <vector>

#include "magspec/landau.hpp"
#include "magspec/types.hpp"

namespace magspec {

/// A finite prefix of the Landau level set, with the exclusion radii r_j
/// (distance from a level to the rest of the set) and the ball/complement
/// partition built from them. The prefix is generated far enough past
/// `coverage` that distances evaluated inside |lambda| <= coverage agree with
/// the full infinite set.
struct LevelGeometry {
  std::vector<double> levels;  // increasing
  std::vector<double> radii;   // r_j
  double gap = 0;              // constant spacing
  double coverage = 0;
  bool infinite_tail = true;   // the list is a prefix of an unbounded sequence

  static LevelGeometry make(const MagneticModel& model, double coverage_radius);
  static LevelGeometry from_levels(std::vector<double> levels, double coverage_radius,
                                   bool infinite_tail = true);

  double level0() const { return levels.front(); }
  double dist_levels(Complex lambda) const;
  /// Distance to the half line [level0, +inf).
  double dist_halfline(Complex lambda) const;
  /// Inside the union of balls B(level_j, 2 r_j)?
  bool in_ball_union(Complex lambda) const;
  bool in_complement(Complex lambda) const { return !in_ball_union(lambda); }
};

double dist_to_levels(Complex lambda, const LevelGeometry& geom);
double dist_to_halfline(Complex lambda, double level0);

/// Images 1/(level_j - mu0) of the level prefix under the resolvent-type
/// Moebius map, completed by the segment [0, smallest image] that carries the
/// accumulation of the infinite tail.
struct LevelImages {
  std::vector<double> images;  // decreasing, positive
  std::vector<double> radii;   // image-plane exclusion radii
  double mu0 = 0;
  bool has_tail = true;

  static LevelImages make(const LevelGeometry& geom, double mu0);

  double dist_images(Complex z) const;
  /// Distance to the image [0, 1/(level0 - mu0)] of the half line.
  double dist_image_halfline(Complex z) const;
  bool in_ball_union(Complex z) const;
  bool in_complement(Complex z) const { return !in_ball_union(z); }
};

double dist_point_segment(Complex z, Complex a, Complex b);

}  // namespace magspec

#endif  // MAGSPEC_GEOMETRY_HPP
