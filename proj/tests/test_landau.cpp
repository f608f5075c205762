// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "magspec/landau.hpp"
#include "oracles.hpp"

using namespace magspec;

namespace {

PotentialSpec scalar_pot(Complex amp, Envelope env) {
  PotentialSpec p;
  p.rows = 1;
  p.entries[0] = Profile{amp, env, std::nullopt};
  return p;
}

}  // namespace

TEST_CASE("level sequences per family") {
  // b(d + 2j)
  CHECK(landau_levels({Family::Schrodinger2d, 1.0, 1}, 3) == std::vector<double>{1, 3, 5, 7});
  // 2 b j
  CHECK(landau_levels({Family::Pauli2d, 2.0, 1}, 2) == std::vector<double>{0, 4, 8});
  // 2 b d j
  CHECK(landau_levels({Family::Pauli3d, 1.0, 1}, 2) == std::vector<double>{0, 2, 4});
  CHECK(landau_levels({Family::Pauli2dGeneral, 0.5, 3}, 2) == std::vector<double>{0, 3, 6});
}

TEST_CASE("levels increase strictly with a constant gap") {
  for (Family fam : {Family::Schrodinger2d, Family::Pauli2d, Family::Pauli3d}) {
    MagneticModel m{fam, 0.7, 1};
    const auto lv = landau_levels(m, 8);
    CHECK(lv.front() >= 0);
    for (size_t i = 1; i < lv.size(); ++i) {
      CHECK(lv[i] > lv[i - 1]);
      CHECK(lv[i] - lv[i - 1] == doctest::Approx(m.level_gap()).epsilon(1e-14));
    }
  }
}

TEST_CASE("constant potential assembles to a multiple of the identity") {
  MagneticModel model{Family::Schrodinger2d, 1.0, 1};
  TruncationSpec trunc{3, 3, std::nullopt};
  const Complex c(0.4, -0.2);
  const auto op = assemble(model, trunc, scalar_pot(c, {Envelope::Kind::Constant, 1.0}), 16);
  const Matrix want = c * Matrix::Identity(op.dim(), op.dim());
  CHECK((op.v - want).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((op.h - (op.h0() + op.v)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("zero amplitude leaves the free operator") {
  MagneticModel model{Family::Pauli2d, 1.5, 1};
  TruncationSpec trunc{3, 2, std::nullopt};
  PotentialSpec pot;
  pot.rows = 2;
  const auto op = assemble(model, trunc, pot, 16);
  CHECK(op.v.cwiseAbs().maxCoeff() == 0.0);
  CHECK((op.h - op.h0()).cwiseAbs().maxCoeff() == 0.0);
  // diagonal is the level multiset with the spin shift
  for (Eigen::Index i = 0; i < op.dim(); ++i) CHECK(op.h0_diag[i] >= 0.0);
}

// Reference values for the lowest-level gaussian diagonal at b = 2, computed
// before the build with an independent extended-precision Simpson rule (the
// closed form is 2^-(m+1)): 0.5, 0.25, 0.125.
TEST_CASE("lowest-level gaussian diagonal matches the frozen quadrature oracle") {
  const double b = 2.0;
  const double frozen[3] = {0.5, 0.25, 0.125};
  for (int m = 0; m <= 2; ++m) {
    const long double oracle = oracles::simpson(
        [&](long double r) -> long double {
          const long double xi = 0.5L * b * r * r;
          long double w = expl(-xi) * b * r;
          for (int k = 1; k <= m; ++k) w *= xi / k;
          return expl(-static_cast<long double>(r) * r) * w;
        },
        0.0L, 12.0L, 60000);
    CHECK(static_cast<double>(oracle) == doctest::Approx(frozen[m]).epsilon(1e-12));
  }

  MagneticModel model{Family::Schrodinger2d, b, 1};
  TruncationSpec trunc{1, 3, std::nullopt};
  const auto op = assemble(model, trunc, scalar_pot(1.0, {Envelope::Kind::Gaussian, 1.0}), 16);
  for (int m = 0; m <= 2; ++m)
    CHECK(op.v(m, m).real() == doctest::Approx(frozen[m]).epsilon(1e-10));
}

TEST_CASE("real symmetric potentials give hermitian matrices") {
  MagneticModel model{Family::Pauli2d, 1.0, 1};
  TruncationSpec trunc{3, 3, std::nullopt};
  PotentialSpec pot;
  pot.rows = 2;
  pot.entry(0, 0) = {Complex(0.3, 0), {Envelope::Kind::Gaussian, 1.2}, std::nullopt};
  pot.entry(1, 1) = {Complex(-0.2, 0), {Envelope::Kind::PowerDecay, 3.0}, std::nullopt};
  pot.entry(0, 1) = {Complex(0.1, 0), {Envelope::Kind::CompactBump, 2.0}, std::nullopt};
  pot.entry(1, 0) = {Complex(0.1, 0), {Envelope::Kind::CompactBump, 2.0}, std::nullopt};
  const auto op = assemble(model, trunc, pot, 16);
  CHECK((op.v - op.v.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("radial quadrature is converged at the accepted order") {
  MagneticModel model{Family::Schrodinger2d, 1.0, 1};
  TruncationSpec trunc{4, 4, std::nullopt};
  for (Envelope env : {Envelope{Envelope::Kind::Gaussian, 0.8},
                       Envelope{Envelope::Kind::PowerDecay, 2.5},
                       Envelope{Envelope::Kind::CompactBump, 1.5}}) {
    const auto a = assemble(model, trunc, scalar_pot(0.5, env), 16);
    const auto b2 = assemble(model, trunc, scalar_pot(0.5, env), 32);
    CHECK((a.v - b2.v).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("3d family: free spectrum is the levels plus box modes") {
  MagneticModel model{Family::Pauli3d, 1.0, 1};
  const Longitudinal lon{4.0, 10};
  TruncationSpec trunc{3, 2, lon};
  PotentialSpec pot;
  pot.rows = 2;
  const auto op = assemble(model, trunc, pot, 16);

  // box-mode eigenvalues against an explicitly diagonalized second-difference
  // matrix
  const double h = 2.0 * lon.box_half_length / (lon.n_x + 1);
  RealMatrix lap = RealMatrix::Zero(lon.n_x, lon.n_x);
  for (int i = 0; i < lon.n_x; ++i) {
    lap(i, i) = 2.0 / (h * h);
    if (i + 1 < lon.n_x) lap(i, i + 1) = lap(i + 1, i) = -1.0 / (h * h);
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(lap);
  const RealVector fd = dirichlet_fd_eigenvalues(lon);
  RealVector fd_sorted = fd;
  std::sort(fd_sorted.data(), fd_sorted.data() + fd_sorted.size());
  CHECK((fd_sorted - es.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);

  // every free eigenvalue is a level plus a box mode, and none dips below the
  // lowest level
  for (Eigen::Index i = 0; i < op.dim(); ++i) {
    CHECK(op.h0_diag[i] >= model.level(0) - 1e-10);
    double best = 1e300;
    for (int j = 0; j <= trunc.n_levels; ++j)
      for (int kx = 0; kx < lon.n_x; ++kx)
        best = std::min(best, std::abs(op.h0_diag[i] - (model.level(j) + fd[kx])));
    CHECK(best < 1e-10);
  }
}

TEST_CASE("sup norm: constants, zeros, and the off-diagonal pair") {
  CHECK(sup_norm(scalar_pot(0.5, {Envelope::Kind::Constant, 1.0}), 16) == doctest::Approx(0.5));
  CHECK(sup_norm(scalar_pot(0.0, {Envelope::Kind::Gaussian, 1.0}), 16) == doctest::Approx(0.0));

  PotentialSpec pot;
  pot.rows = 2;
  pot.entry(0, 1) = {Complex(0.7, 0), {Envelope::Kind::Gaussian, 2.0}, std::nullopt};
  pot.entry(1, 0) = {Complex(0.7, 0), {Envelope::Kind::Gaussian, 2.0}, std::nullopt};
  // operator norm of [[0, g],[g, 0]] is |g|; max at the origin
  CHECK(sup_norm(pot, 16) == doctest::Approx(0.7).epsilon(1e-6));

  // dense-grid oracle on the closed-form 2x2 norm for a mixed pair
  pot.entry(0, 0) = {Complex(0.2, 0.1), {Envelope::Kind::PowerDecay, 2.0}, std::nullopt};
  const double got = sup_norm(pot, 16);
  double want = 0;
  for (int i = 0; i <= 200000; ++i) {
    const double r = 40.0 * i / 200000;
    const double g = 0.7 * std::exp(-r * r / 4.0);
    const double d = std::abs(Complex(0.2, 0.1)) * std::pow(1.0 + r * r, -1.0);
    // closed form for [[d, g],[g, 0]] with d complex of modulus |d|
    Eigen::Matrix2cd m;
    m << Complex(0.2, 0.1) * std::pow(1.0 + r * r, -1.0), g, g, 0.0;
    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m);
    want = std::max(want, svd.singularValues()[0]);
    (void)d;
  }
  CHECK(got == doctest::Approx(want).epsilon(1e-5));
}

TEST_CASE("assembly rejects bad input") {
  MagneticModel model{Family::Schrodinger2d, 1.0, 1};
  TruncationSpec trunc{2, 2, std::nullopt};
  CHECK_THROWS_AS(assemble(model, trunc, scalar_pot(1.0, {Envelope::Kind::Gaussian, 1.0}), 2),
                  std::invalid_argument);
  PotentialSpec two;
  two.rows = 2;
  CHECK_THROWS_AS(assemble(model, trunc, two, 16), std::invalid_argument);

  // longitudinal envelope outside the 3d family
  PotentialSpec bad = scalar_pot(1.0, {Envelope::Kind::Gaussian, 1.0});
  bad.entries[0].longitudinal = Envelope{Envelope::Kind::Gaussian, 1.0};
  CHECK_THROWS_AS(assemble(model, trunc, bad, 16), std::invalid_argument);

  // 3d family with a non-square-integrable longitudinal envelope
  MagneticModel p3{Family::Pauli3d, 1.0, 1};
  TruncationSpec t3{2, 2, Longitudinal{3.0, 6}};
  PotentialSpec pot3;
  pot3.rows = 2;
  pot3.entry(0, 0) = {Complex(0.2, 0), {Envelope::Kind::Gaussian, 1.0},
                      Envelope{Envelope::Kind::PowerDecay, 0.4}};
  CHECK_THROWS_AS(assemble(p3, t3, pot3, 16), std::invalid_argument);
}

TEST_CASE("d = 2 tensor assembly factorizes gaussians") {
  MagneticModel model{Family::Schrodinger2d, 1.0, 2};
  TruncationSpec trunc{2, 2, std::nullopt};
  const auto op = assemble(model, trunc, scalar_pot(1.0, {Envelope::Kind::Gaussian, 1.0}), 16);
  // state count: total level 0 has 1 tuple, level 1 has 2 tuples; times 2^2
  // intra-level choices
  CHECK(op.dim() == 3 * 4);
  // diagonal of h0 is b(d + 2 total)
  for (Eigen::Index i = 0; i < op.dim(); ++i) {
    const int total = op.layout.perp[static_cast<size_t>(i)].total;
    CHECK(op.h0_diag[i] == doctest::Approx(1.0 * (2 + 2 * total)));
  }
  // power decay cannot factorize over the pairs
  CHECK_THROWS_AS(assemble(model, trunc, scalar_pot(1.0, {Envelope::Kind::PowerDecay, 5.0}), 16),
                  std::invalid_argument);
}
