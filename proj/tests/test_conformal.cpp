// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "magspec/conformal.hpp"
#include "oracles.hpp"

using namespace magspec;

TEST_CASE("moebius map basics and round trip") {
  CHECK(phi_mobius(Complex(0, 0), -1.0) == Complex(1, 0));
  CHECK(std::abs(phi_mobius(Complex(-1, 1), -1.0) - Complex(0, -1)) < 1e-15);
  CHECK_THROWS_AS(phi_mobius(Complex(-1, 0), -1.0), std::invalid_argument);
  CHECK_THROWS_AS(phi_mobius_inverse(Complex(0, 0), -1.0), std::invalid_argument);

  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 10000; ++i) {
    const Complex lam(u(rng), u(rng));
    if (std::abs(lam + 2.0) < 1e-6) continue;
    CHECK(std::abs(phi_mobius_inverse(phi_mobius(lam, -2.0), -2.0) - lam) <
          1e-14 * (1.0 + std::abs(lam)) * (1.0 + std::abs(lam)));
    // left half-plane of mu0 maps into the left half-plane
    if (lam.real() < -2.0) CHECK(phi_mobius(lam, -2.0).real() < 0);
  }
}

TEST_CASE("distortion ratio closed forms") {
  const auto geom = LevelGeometry::make({Family::Schrodinger2d, 1.0, 1}, 40.0);
  const double mu0 = -2.0;

  SUBCASE("left of mu0 the ratio is (1+|l|)^2 / (|l - mu0| |l - level0|)") {
    for (double x : {-3.0, -5.5, -20.0}) {
      const Complex lam(x, 0);
      const double want = std::pow(1.0 + std::abs(lam), 2) /
                          (std::abs(lam - mu0) * std::abs(lam - Complex(1, 0)));
      CHECK(distortion_ratio(lam, mu0, geom) == doctest::Approx(want).epsilon(1e-12));
    }
  }

  SUBCASE("vertical approach to a level has a stable positive limit") {
    std::vector<double> ratios;
    for (double eps : {1e-2, 1e-4, 1e-6, 1e-8})
      ratios.push_back(distortion_ratio(Complex(3.0, eps), mu0, geom));
    for (double r : ratios) CHECK(r > 0);
    CHECK(std::abs(ratios[2] - ratios[3]) < 1e-4 * ratios[3]);
  }

  SUBCASE("points on a level are rejected") {
    CHECK_THROWS_AS(distortion_ratio(Complex(1.0, 0.0), mu0, geom), std::invalid_argument);
  }

  SUBCASE("a single level reduces to the two-point moebius distortion") {
    const auto single = LevelGeometry::from_levels({2.0}, 50.0, /*infinite_tail=*/false);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 200; ++i) {
      const Complex lam(u(rng), u(rng));
      if (std::abs(lam - 2.0) < 1e-9 || std::abs(lam - mu0) < 1e-9) continue;
      const double want = std::pow(1.0 + std::abs(lam), 2) /
                          (std::abs(lam - mu0) * std::abs(Complex(2.0, 0) - mu0));
      CHECK(distortion_ratio(lam, mu0, single) == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("distortion profile: positivity, stability, and the sandwich") {
  const auto geom = LevelGeometry::make({Family::Schrodinger2d, 1.0, 1}, 100.0);
  SamplerSpec small{10000, 100.0, 99};
  SamplerSpec large{100000, 100.0, 99};
  const auto a = distortion_profile(-2.0, geom, small);
  const auto b = distortion_profile(-2.0, geom, large);
  CHECK(a.empirical_inf > 0);
  CHECK(b.empirical_inf > 0);
  CHECK(b.empirical_inf <= a.empirical_inf * (1 + 1e-12));  // prefix sampling
  CHECK(std::abs(a.empirical_inf - b.empirical_inf) < 0.05 * b.empirical_inf);
  CHECK(a.sandwich_violations == 0);
  CHECK(b.sandwich_violations == 0);
  CHECK(b.complement_samples > 1000);
  CHECK(b.halfline_inf > 0);
  CHECK(b.ball_region_inf >= b.empirical_inf);
}

TEST_CASE("rectangle around a level") {
  const auto geom = LevelGeometry::make({Family::Pauli2d, 1.0, 1}, 20.0);
  const auto rect = RectangleDomain::around_level(geom, 1, 0.25, 0.4);
  CHECK(rect.contained_level == doctest::Approx(2.0));
  CHECK(rect.x_left == doctest::Approx(2.0 - (1.0 - 0.25)));
  CHECK(rect.x_right == doctest::Approx(2.0 + (1.0 - 0.25)));
  CHECK(rect.height == doctest::Approx(0.8));
  CHECK_THROWS_AS(RectangleDomain::around_level(geom, 1, 1.5, 0.4), std::invalid_argument);
}

TEST_CASE("square calibration puts prevertices on the diagonals") {
  RectangleDomain sq{0.0, 2.0, 2.0, 1.0, 0.1};
  const auto map = sc_calibrate(sq, sq.center(), 256);
  CHECK(map.alpha == doctest::Approx(M_PI / 4).epsilon(1e-10));
  for (const Complex& pv : map.prevertices) {
    CHECK(std::abs(std::abs(pv) - 1.0) < 1e-12);
    const double a = std::abs(std::fmod(std::arg(pv) + 2 * M_PI, M_PI / 2) - M_PI / 4);
    CHECK(a < 1e-9);
  }
  // vertex images: the calibration residual test, repeated here explicitly
  const std::array<Complex, 4> verts{sq.v1(), sq.v2(), sq.v3(), sq.v4()};
  for (int k = 0; k < 4; ++k)
    CHECK(std::abs(map.forward(map.prevertices[static_cast<size_t>(k)]) -
                   verts[static_cast<size_t>(k)]) < 1e-8);
  // the conformal center maps to lambda0
  CHECK(std::abs(map.forward(Complex(0, 0)) - sq.center()) < 1e-12);
}

TEST_CASE("aspect-2 side lengths against an independent long-double rule") {
  RectangleDomain rect{0.0, 4.0, 2.0, 2.0, 0.1};
  const auto map = sc_calibrate(rect, rect.center(), 256);
  // independent evaluation of the two half-side integrals at the calibrated
  // angle: composite Simpson in long double along the radial rays to 1 and i
  const long double alpha = map.alpha;
  auto kernel_real = [&](long double t) -> long double {
    const long double ca = cosl(alpha);
    return 1.0L / sqrtl((t * t - 2.0L * t * ca + 1.0L) * (t * t + 2.0L * t * ca + 1.0L));
  };
  auto kernel_imag = [&](long double t) -> long double {
    // along the imaginary axis |i t - e^{i a}|^2 |i t - e^{-i a}|^2 =
    // (t^2 + 1)^2 - (2 t sin a)^2
    const long double sa = sinl(alpha);
    return 1.0L / sqrtl((t * t + 1.0L) * (t * t + 1.0L) - 4.0L * t * t * sa * sa);
  };
  const long double u = oracles::simpson(kernel_real, 0.0L, 1.0L - 1e-9L, 400000);
  const long double v = oracles::simpson(kernel_imag, 0.0L, 1.0L, 400000);
  // u corresponds to the half height, v to the half width
  CHECK(static_cast<double>(u / v) == doctest::Approx(1.0 / 2.0).epsilon(1e-4));
  CHECK(map.c_centered * static_cast<double>(u) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("round trip, derivative, and boundary mapping") {
  RectangleDomain rect{-0.5, 2.5, 1.5, 1.0, 0.1};
  const Complex lam0(0.4, 0.9);  // off-center conformal center
  const auto map = sc_calibrate(rect, lam0, 256);
  CHECK(std::abs(map.forward(Complex(0, 0)) - lam0) < 1e-10);

  SUBCASE("interior grid round trip") {
    double worst = 0;
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 12; ++j) {
        const Complex z = std::polar((i + 0.5) / 12.0 * 0.995, 2 * M_PI * (j + 0.5) / 12.0);
        const Complex back = map.inverse(map.forward(z));
        worst = std::max(worst, std::abs(back - z));
      }
    CHECK(worst < 1e-8);
  }

  SUBCASE("forward derivative matches central differences") {
    for (const Complex z : {Complex(0.3, 0.2), Complex(-0.5, 0.4), Complex(0.0, -0.7)}) {
      const double h = 1e-6;
      const Complex fd = (map.forward(z + h) - map.forward(z - h)) / (2.0 * h);
      CHECK(std::abs(fd - map.derivative(z)) < 1e-6 * (1.0 + std::abs(map.derivative(z))));
    }
  }

  SUBCASE("circle arcs land on the rectangle edges") {
    // between consecutive prevertices, boundary points must map onto the
    // corresponding edge
    std::array<double, 4> angles;
    for (int k = 0; k < 4; ++k) angles[static_cast<size_t>(k)] = std::arg(map.prevertices[static_cast<size_t>(k)]);
    std::sort(angles.begin(), angles.end());
    double worst = 0;
    for (int arc = 0; arc < 4; ++arc) {
      const double a0 = angles[static_cast<size_t>(arc)];
      const double a1 = arc == 3 ? angles[0] + 2 * M_PI : angles[static_cast<size_t>(arc + 1)];
      for (int i = 0; i < 512; ++i) {
        const double th = a0 + (a1 - a0) * (i + 0.5) / 512.0;
        const Complex img = map.forward(std::polar(1.0, th));
        const double d = std::min(
            {dist_point_segment(img, rect.v1(), rect.v2()), dist_point_segment(img, rect.v2(), rect.v3()),
             dist_point_segment(img, rect.v3(), rect.v4()), dist_point_segment(img, rect.v4(), rect.v1())});
        worst = std::max(worst, d);
      }
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("comparability ratios are pinched on the interior grid") {
  RectangleDomain sq{0.0, 1.0, 1.0, 0.5, 0.1};
  const auto map = sc_calibrate(sq, sq.center(), 256);
  const auto comp = comparability_check(map, 32);
  CHECK(comp.c_min > 0);
  CHECK(comp.edge_c_min > 0);
  CHECK(comp.c_max / comp.c_min < 50.0);
  CHECK(comp.edge_c_max / comp.edge_c_min < 50.0);

  // at the center, dist(z, circle) = 1 exactly
  const Complex lam0 = sq.center();
  const double want = 0.5 * std::min(std::abs(lam0 - sq.v1()), std::abs(lam0 - sq.v3()));
  (void)want;
  // radial approach to a prevertex stays inside [c_min, c_max]
  const Complex pv = map.prevertices[0];
  for (double r : {0.9, 0.99, 0.999, 0.9999}) {
    const Complex z = r * pv;
    const Complex lam = map.forward(z);
    const double ylo = std::min(0.0, sq.height), yhi = std::max(0.0, sq.height);
    const double db = std::min({lam.real() - sq.x_left, sq.x_right - lam.real(),
                                lam.imag() - ylo, yhi - lam.imag()});
    const double dv = std::min({std::abs(lam - sq.v1()), std::abs(lam - sq.v2()),
                                std::abs(lam - sq.v3()), std::abs(lam - sq.v4())});
    const double ratio = db * dv / (1.0 - std::abs(z));
    CHECK(ratio >= comp.c_min * 0.5);
    CHECK(ratio <= comp.c_max * 2.0);
  }
}

TEST_CASE("pipeline map scales short rectangles for the center condition") {
  RectangleDomain rect{1.0, 3.0, 0.4, 2.0, 0.25};
  const auto prep = prepare_level_map(rect, 0.2, 128);
  CHECK(prep.height_scaled);
  // center now clears the numerical-range strip by one unit
  CHECK(std::abs(prep.map.lambda0.imag()) >= 1.0 + 4.0 * 0.2 - 1e-9);
  const auto tall = prepare_level_map(RectangleDomain{1.0, 3.0, 8.0, 2.0, 0.25}, 0.2, 128);
  CHECK(!tall.height_scaled);
}
