// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "magspec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace magspec {

LevelGeometry LevelGeometry::make(const MagneticModel& model, double coverage_radius) {
  model.validate();
  if (!(coverage_radius >= 0)) throw std::invalid_argument("LevelGeometry: coverage must be >= 0");
  std::vector<double> lv;
  int j = 0;
  while (model.level(j) <= coverage_radius + 3.0 * model.level_gap() || j < 2)
    lv.push_back(model.level(j++));
  return from_levels(std::move(lv), coverage_radius);
}

LevelGeometry LevelGeometry::from_levels(std::vector<double> levels, double coverage_radius,
                                         bool infinite_tail) {
  if (levels.size() < 1) throw std::invalid_argument("LevelGeometry: need at least one level");
  for (size_t i = 1; i < levels.size(); ++i)
    if (!(levels[i] > levels[i - 1]))
      throw std::invalid_argument("LevelGeometry: levels must strictly increase");
  LevelGeometry g;
  g.levels = std::move(levels);
  g.coverage = coverage_radius;
  g.infinite_tail = infinite_tail;
  g.radii.resize(g.levels.size());
  const size_t n = g.levels.size();
  for (size_t i = 0; i < n; ++i) {
    double r = std::numeric_limits<double>::infinity();
    if (i > 0) r = std::min(r, g.levels[i] - g.levels[i - 1]);
    if (i + 1 < n) r = std::min(r, g.levels[i + 1] - g.levels[i]);
    g.radii[i] = r;
  }
  if (n == 1) g.radii[0] = std::numeric_limits<double>::infinity();
  g.gap = n > 1 ? g.levels[1] - g.levels[0] : 0.0;
  return g;
}

double LevelGeometry::dist_levels(Complex lambda) const {
  double best = std::numeric_limits<double>::infinity();
  for (double lv : levels) best = std::min(best, std::abs(lambda - lv));
  return best;
}

double LevelGeometry::dist_halfline(Complex lambda) const {
  return dist_to_halfline(lambda, levels.front());
}

bool LevelGeometry::in_ball_union(Complex lambda) const {
  for (size_t i = 0; i < levels.size(); ++i)
    if (std::abs(lambda - levels[i]) < 2.0 * radii[i]) return true;
  return false;
}

double dist_to_levels(Complex lambda, const LevelGeometry& geom) {
  return geom.dist_levels(lambda);
}

double dist_to_halfline(Complex lambda, double level0) {
  if (lambda.real() >= level0) return std::abs(lambda.imag());
  return std::abs(lambda - Complex(level0, 0));
}

LevelImages LevelImages::make(const LevelGeometry& geom, double mu0) {
  if (!(mu0 < geom.level0())) throw std::invalid_argument("LevelImages: mu0 must lie left of the levels");
  LevelImages li;
  li.mu0 = mu0;
  li.has_tail = geom.infinite_tail;
  li.images.reserve(geom.levels.size());
  for (double lv : geom.levels) li.images.push_back(1.0 / (lv - mu0));
  li.radii.resize(li.images.size());
  const size_t n = li.images.size();
  for (size_t i = 0; i < n; ++i) {
    double r = std::numeric_limits<double>::infinity();
    if (i > 0) r = std::min(r, li.images[i - 1] - li.images[i]);
    if (i + 1 < n) r = std::min(r, li.images[i] - li.images[i + 1]);
    li.radii[i] = r;
  }
  if (n == 1) li.radii[0] = std::numeric_limits<double>::infinity();
  return li;
}

double dist_point_segment(Complex z, Complex a, Complex b) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0) return std::abs(z - a);
  double t = ((z - a) * std::conj(ab)).real() / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(z - (a + t * ab));
}

double LevelImages::dist_images(Complex z) const {
  double best = std::numeric_limits<double>::infinity();
  for (double w : images) best = std::min(best, std::abs(z - w));
  // The infinite tail of images accumulates at 0; the segment below the
  // smallest computed image stands in for it.
  if (has_tail)
    best = std::min(best, dist_point_segment(z, Complex(0, 0), Complex(images.back(), 0)));
  return best;
}

double LevelImages::dist_image_halfline(Complex z) const {
  return dist_point_segment(z, Complex(0, 0), Complex(images.front(), 0));
}

bool LevelImages::in_ball_union(Complex z) const {
  for (size_t i = 0; i < images.size(); ++i)
    if (std::abs(z - images[i]) < 2.0 * radii[i]) return true;
  return false;
}

}  // namespace magspec
