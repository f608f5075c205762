// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "magspec/geometry.hpp"

using namespace magspec;

TEST_CASE("distances to levels and the half line") {
  const auto geom = LevelGeometry::from_levels({1, 3, 5, 7, 9}, 8.0);
  CHECK(dist_to_levels(Complex(3, 4), geom) == doctest::Approx(4.0));
  CHECK(dist_to_levels(Complex(2, 0), geom) == doctest::Approx(1.0));
  CHECK(dist_to_halfline(Complex(-1, 0), 0.0) == doctest::Approx(1.0));
  CHECK(dist_to_halfline(Complex(4, -2), 1.0) == doctest::Approx(2.0));
  CHECK(dist_to_halfline(Complex(0, 1), 1.0) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("constant-gap levels give constant exclusion radii") {
  const auto geom = LevelGeometry::make({Family::Schrodinger2d, 1.0, 1}, 20.0);
  CHECK(geom.gap == doctest::Approx(2.0));
  for (double r : geom.radii) CHECK(r == doctest::Approx(2.0));
  CHECK(geom.levels.back() > 20.0);
}

TEST_CASE("ball union membership") {
  const auto geom = LevelGeometry::from_levels({0, 2, 4, 6, 8, 10}, 9.0);
  CHECK(geom.in_ball_union(Complex(2.0, 1.0)));        // within 2 gaps of a level
  CHECK(geom.in_complement(Complex(2.0, 7.0)));        // far above
  CHECK(geom.in_complement(Complex(-9.0, 0.0)));       // far left
  CHECK(!geom.in_ball_union(Complex(5.0, 4.5)));
}

TEST_CASE("image geometry carries the accumulation tail") {
  const auto geom = LevelGeometry::from_levels({1, 3, 5, 7, 9, 11, 13}, 12.0);
  const auto li = LevelImages::make(geom, -2.0);
  CHECK(li.images.front() == doctest::Approx(1.0 / 3.0));
  // a negative real point sees the accumulation point at 0
  CHECK(li.dist_images(Complex(-0.5, 0)) == doctest::Approx(0.5).epsilon(1e-14));
  // the image of the half line is the segment [0, 1/(level0 - mu0)]
  CHECK(li.dist_image_halfline(Complex(0.1, 0.2)) == doctest::Approx(0.2));
  CHECK(li.dist_image_halfline(Complex(-0.3, 0.4)) == doctest::Approx(0.5));
  CHECK(li.dist_image_halfline(Complex(0.5, 0.0)) == doctest::Approx(0.5 - 1.0 / 3.0));
}

TEST_CASE("point-segment distance") {
  CHECK(dist_point_segment(Complex(0.5, 1), Complex(0, 0), Complex(1, 0)) == doctest::Approx(1.0));
  CHECK(dist_point_segment(Complex(2, 0), Complex(0, 0), Complex(1, 0)) == doctest::Approx(1.0));
  CHECK(dist_point_segment(Complex(-3, 4), Complex(0, 0), Complex(1, 0)) == doctest::Approx(5.0));
}
