// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "magspec/spectral.hpp"
#include "oracles.hpp"

using namespace magspec;

namespace {

Matrix random_complex(Eigen::Index n, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = scale * Complex(u(rng), u(rng));
  return m;
}

AssembledOperator make_op(Family fam, double b, int n_levels, int m_per, Complex amp,
                          Envelope env = {Envelope::Kind::Gaussian, 1.0}) {
  MagneticModel model{fam, b, 1};
  TruncationSpec trunc{n_levels, m_per, std::nullopt};
  PotentialSpec pot;
  if (fam == Family::Schrodinger2d) {
    pot.rows = 1;
    pot.entries[0] = {amp, env, std::nullopt};
  } else {
    pot.rows = 2;
    pot.entry(0, 0) = {amp, env, std::nullopt};
    pot.entry(0, 1) = {0.5 * amp, env, std::nullopt};
    pot.entry(1, 0) = {Complex(0.1, -0.2) * amp, env, std::nullopt};
    pot.entry(1, 1) = {-amp, env, std::nullopt};
  }
  return assemble(model, trunc, pot, 16);
}

}  // namespace

TEST_CASE("eigenvalues with multiplicity clustering") {
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 1;
  d(1, 1) = 3;
  d(2, 2) = 3;
  const auto spec = eigenvalues(d);
  REQUIRE(spec.items.size() == 2);
  CHECK(spec.items[0].value == Complex(1, 0));
  CHECK(spec.items[0].multiplicity == 1);
  CHECK(spec.items[1].value.real() == doctest::Approx(3.0));
  CHECK(spec.items[1].multiplicity == 2);
}

TEST_CASE("nilpotent block clusters at zero") {
  Matrix j = Matrix::Zero(2, 2);
  j(0, 1) = 1;
  const auto spec = eigenvalues(j);
  REQUIRE(spec.items.size() == 1);
  CHECK(std::abs(spec.items[0].value) < 1e-8);
  CHECK(spec.items[0].multiplicity == 2);
}

TEST_CASE("2x2 closed form cross-check") {
  Matrix m(2, 2);
  m << Complex(1, 0), Complex(2, 0), Complex(0.5, 0), Complex(1, 1);
  const auto spec = eigenvalues(m);
  // roots of l^2 - tr l + det: ((2 + i) +- sqrt 3) / 2
  const Complex r1 = (Complex(2, 1) + std::sqrt(3.0)) / 2.0;
  const Complex r2 = (Complex(2, 1) - std::sqrt(3.0)) / 2.0;
  REQUIRE(spec.items.size() == 2);
  const double d1 = std::min(std::abs(spec.items[0].value - r1), std::abs(spec.items[0].value - r2));
  const double d2 = std::min(std::abs(spec.items[1].value - r1), std::abs(spec.items[1].value - r2));
  CHECK(d1 < 1e-12);
  CHECK(d2 < 1e-12);
}

TEST_CASE("trace identity and hermitian reality") {
  const Matrix a = random_complex(24, 7);
  const auto spec = eigenvalues(a);
  Complex sum = 0;
  for (const auto& it : spec.items) sum += static_cast<double>(it.multiplicity) * it.value;
  CHECK(std::abs(sum - a.trace()) <= 1e-8 * std::max(1.0, std::abs(a.trace())));

  const Matrix h = a + a.adjoint().eval();
  for (const auto& it : eigenvalues(h).items) CHECK(std::abs(it.value.imag()) < 1e-10);
}

TEST_CASE("schatten norms: frobenius, powers, and the jacobi oracle") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3;
  d(1, 1) = 4;
  CHECK(schatten_norm(d, 2).norm == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(schatten_norm(Matrix::Identity(4, 4), 4).norm ==
        doctest::Approx(std::pow(4.0, 0.25)).epsilon(1e-14));

  const Matrix a = random_complex(6, 11);
  for (double p : {1.0, 2.0, 3.5, 6.0}) {
    CHECK(schatten_norm(a, p).norm ==
          doctest::Approx(oracles::schatten_norm_oracle(a, p)).epsilon(1e-10));
  }
}

TEST_CASE("schatten norm properties") {
  const Matrix a = random_complex(8, 3);
  // p = 2 equals the entrywise norm
  CHECK(schatten_norm(a, 2).norm == doctest::Approx(a.norm()).epsilon(1e-12));
  // non-increasing in p
  double prev = schatten_norm(a, 1.0).norm;
  for (double p : {1.5, 2.0, 3.0, 4.0, 8.0, 16.0}) {
    const double cur = schatten_norm(a, p).norm;
    CHECK(cur <= prev * (1 + 1e-12));
    prev = cur;
  }
  // unitary matrices have unit singular values
  Eigen::HouseholderQR<Matrix> qr(random_complex(8, 5));
  const Matrix q = qr.householderQ();
  const auto rep = schatten_norm(q, 3.0);
  for (Eigen::Index i = 0; i < rep.singular_values.size(); ++i)
    CHECK(rep.singular_values[i] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("weighted resolvent: diagonal case and singularity guard") {
  const auto op = make_op(Family::Schrodinger2d, 1.0, 4, 3, Complex(0.2, 0.1));
  const Complex lam(0, 1);
  const Matrix r = weighted_resolvent(op, lam);
  for (Eigen::Index i = 0; i < op.dim(); ++i)
    CHECK(std::abs(r(i, i) - 1.0 / (op.h0_diag[i] - lam)) < 1e-15);
  CHECK_THROWS_AS(weighted_resolvent(op, Complex(op.h0_diag[0], 0)), ResolventSingular);
}

TEST_CASE("gaussian-weighted resolvent matches a doubled-order assembly") {
  const auto op = make_op(Family::Schrodinger2d, 1.0, 4, 3, Complex(0.2, 0.1));
  const Weight w = Weight::perp({Envelope::Kind::Gaussian, 1.0});
  const Complex lam(3.0, 0.5);
  const Matrix coarse = weighted_resolvent(op, lam, w, Weight::identity(), 16);
  const Matrix fine = weighted_resolvent(op, lam, w, Weight::identity(), 32);
  const double ns_coarse = schatten_norm(coarse, 4.0).norm;
  const double ns_fine = schatten_norm(fine, 4.0).norm;
  CHECK(std::isfinite(ns_coarse));
  CHECK(ns_coarse == doctest::Approx(ns_fine).epsilon(1e-8));
}

TEST_CASE("resolvent bound profile: identity weights have a closed form") {
  const auto op = make_op(Family::Schrodinger2d, 1.0, 5, 2, Complex(0.1, 0.0));
  std::vector<Complex> path{{0.4, 0.3}, {2.0, -0.7}, {6.2, 0.05}};
  const auto prof = resolvent_bound_profile(op, 2.0, path);
  for (const auto& pt : prof.points) {
    double want = 0;
    for (Eigen::Index i = 0; i < op.dim(); ++i)
      want += 1.0 / std::norm(Complex(op.h0_diag[i], 0) - pt.lambda);
    CHECK(pt.lhs == doctest::Approx(want).epsilon(1e-12));
    CHECK(std::isfinite(pt.rhs_shape));
  }
  CHECK(prof.sup_ratio > 0);
}

TEST_CASE("resolvent blow-up rate near a level matches the bound exponent") {
  const auto op = make_op(Family::Schrodinger2d, 1.0, 6, 4, Complex(0.0, 0.0));
  for (double p : {4.0, 6.0}) {
    std::vector<double> etas, lhs;
    std::vector<Complex> path;
    for (int k = 1; k <= 8; ++k) {
      etas.push_back(std::pow(2.0, -k));
      path.push_back(Complex(op.model.level(1), etas.back()));
    }
    const auto prof = resolvent_bound_profile(op, p, path);
    for (const auto& pt : prof.points) lhs.push_back(pt.lhs);
    const double slope = oracles::loglog_slope(etas, lhs);
    CHECK(slope > -p - 0.2);
    CHECK(slope < -p + 0.2);
  }
}

TEST_CASE("resolvent comparison at the reference point") {
  SUBCASE("zero potential gives zero displacement") {
    const auto op = make_op(Family::Schrodinger2d, 1.0, 4, 3, Complex(0, 0),
                            {Envelope::Kind::Gaussian, 1.0});
    const auto rep = hansmann_check(op, -1.0, 2.0);
    CHECK(rep.lhs_sum == 0.0);
    CHECK(rep.rhs_norm_p == 0.0);
    CHECK(rep.ratio == 0.0);
  }

  SUBCASE("scalar shift has a diagonal closed form") {
    // V = c I via a constant envelope
    const double c = 0.05;
    const auto op = make_op(Family::Schrodinger2d, 1.0, 4, 3, Complex(c, 0),
                            {Envelope::Kind::Constant, 1.0});
    const double mu0 = -c - 1.0;
    const auto rep = hansmann_check(op, mu0, 2.0);
    double lhs = 0, rhs = 0;
    for (Eigen::Index i = 0; i < op.dim(); ++i) {
      const double l0 = op.h0_diag[i];
      double best = 1e300;
      for (Eigen::Index j = 0; j < op.dim(); ++j)
        best = std::min(best, std::abs(1.0 / (l0 + c - mu0) - 1.0 / (op.h0_diag[j] - mu0)));
      lhs += best * best;
      rhs += std::norm(1.0 / (l0 + c - mu0) - 1.0 / (l0 - mu0));
    }
    CHECK(rep.lhs_sum == doctest::Approx(lhs).epsilon(1e-10));
    CHECK(rep.rhs_norm_p == doctest::Approx(rhs).epsilon(1e-10));
    CHECK(rep.lhs_sum <= rep.rhs_norm_p * (1 + 1e-12));
  }

  SUBCASE("small generic potentials keep a modest displacement ratio") {
    double worst = 0;
    for (int seed = 0; seed < 6; ++seed) {
      const Complex amp(0.05 + 0.01 * seed, 0.03 * (seed % 3));
      const auto op = make_op(Family::Pauli2d, 1.0, 3, 3, amp);
      const auto rep = hansmann_check(op, default_mu0(op), 2.0);
      worst = std::max(worst, rep.ratio);
    }
    CHECK(worst < 10.0);
  }

  SUBCASE("mu0 preconditions are enforced") {
    const auto op = make_op(Family::Schrodinger2d, 1.0, 3, 2, Complex(0.3, 0.1));
    CHECK_THROWS_AS(hansmann_check(op, 0.5, 2.0), std::invalid_argument);
  }
}
