// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <thread>

#include "magspec/detreg.hpp"
#include "magspec/spectral.hpp"

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

AssembledOperator schrodinger_op(Complex amp, int n_levels = 4, int m_per = 3, double b = 1.0) {
  MagneticModel model{Family::Schrodinger2d, b, 1};
  TruncationSpec trunc{n_levels, m_per, std::nullopt};
  PotentialSpec pot;
  pot.rows = 1;
  pot.entries[0] = {amp, {Envelope::Kind::Gaussian, 1.0}, std::nullopt};
  return assemble(model, trunc, pot, 16);
}

// Hand-built truncation whose perturbed matrix carries a Jordan block: the
// double eigenvalue sits off the free spectrum.
AssembledOperator jordan_op(double w) {
  AssembledOperator op;
  op.model = {Family::Schrodinger2d, 1.0, 1};
  op.trunc = {3, 1, std::nullopt};
  op.h0_diag = RealVector::Zero(3);
  op.h0_diag << 1, 3, 5;
  op.v = Matrix::Zero(3, 3);
  op.v(0, 0) = w - 1.0;
  op.v(0, 1) = 1.0;
  op.v(1, 1) = w - 3.0;
  op.h = op.v;
  op.h += op.h0_diag.cast<Complex>().asDiagonal();
  op.v_sup_norm = 1.0;
  return op;
}

}  // namespace

TEST_CASE("regularized determinant basics") {
  CHECK(det_reg(Matrix::Zero(3, 3), 2) == Complex(1, 0));
  Matrix d = Matrix::Zero(1, 1);
  d(0, 0) = Complex(0.3, 0.4);
  CHECK(std::abs(det_reg(d, 1) - Complex(1.3, 0.4)) < 1e-14);
  d(0, 0) = 1.0;
  CHECK(std::abs(det_reg(d, 2) - 2.0 * std::exp(-1.0)) < 1e-12);
}

TEST_CASE("determinant vanishes exactly at eigenvalue -1") {
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = -1.0;
  a(1, 1) = Complex(0.2, 0.1);
  a(2, 2) = Complex(-0.3, 0.4);
  for (int pc : {1, 2, 3}) CHECK(std::abs(det_reg(a, pc)) < 1e-10);
}

TEST_CASE("order-1 regularization is the plain determinant") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    const Matrix a = random_complex(6, seed, 0.5);
    const Complex plain = (Matrix::Identity(6, 6) + a).determinant();
    CHECK(std::abs(det_reg(a, 1) - plain) <= 1e-10 * std::max(1.0, std::abs(plain)));
  }
}

TEST_CASE("trace-based log form agrees with the eigenvalue product") {
  for (std::uint64_t seed : {11u, 12u}) {
    const Matrix a = random_complex(7, seed, 0.6);
    for (int pc : {1, 2, 3, 4}) {
      const Complex via_eig = det_reg(a, pc);
      const Complex via_lu = std::exp(log_det_reg_lu(a, pc));
      CHECK(std::abs(via_eig - via_lu) <= 1e-10 * std::max(1.0, std::abs(via_eig)));
    }
  }
}

TEST_CASE("winding numbers of a synthetic function") {
  const Complex star(0.7, -0.3);
  const DetFunction f([star](Complex l) { return l - star; });
  CHECK(winding_number(f, circle_contour(star, 0.5), 128) == 1);
  CHECK(winding_number(f, circle_contour(star + Complex(2, 0), 0.5), 128) == 0);
  CHECK(winding_number(f, rectangle_contour(star - Complex(1, 1), star + Complex(1, 1)), 128) == 1);

  const DetFunction g([star](Complex l) { return (l - star) * (l - star) * (l + 1.0); });
  CHECK(winding_number(g, circle_contour(star, 0.4), 128) == 2);
}

TEST_CASE("free operator has unit determinant function") {
  const auto op = schrodinger_op(Complex(0, 0));
  const DetFunction f(op, 2.0);
  CHECK(std::abs(f(Complex(2.0, 0.7)) - 1.0) < 1e-14);
  const ZeroSet zs = locate_zeros(f, RectRegion{Complex(0.2, -1.0), Complex(6.2, 1.0)}, 1e-8);
  CHECK(zs.zeros.empty());
}

TEST_CASE("determinant function tends to one far from the spectrum") {
  const auto op = schrodinger_op(Complex(0.25, 0.15));
  const DetFunction f(op, 2.0);
  const double far = 3.0e4 * op.v_sup_norm;
  CHECK(std::abs(f(Complex(1.0, far)) - 1.0) < 1e-6);
}

TEST_CASE("determinant vanishes at the perturbed eigenvalues") {
  const auto op = schrodinger_op(Complex(0.3, 0.2));
  const DetFunction f(op, 2.0);
  int checked = 0;
  for (const auto& it : eigenvalues(op.h).items) {
    double d0 = 1e300;
    for (Eigen::Index i = 0; i < op.dim(); ++i)
      d0 = std::min(d0, std::abs(it.value - op.h0_diag[i]));
    if (d0 < 0.05) continue;  // too close to a free eigenvalue to evaluate
    CHECK(std::abs(f(it.value)) < 1e-8);
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("winding of a jordan-type double eigenvalue") {
  const auto op = jordan_op(2.2);
  const auto spec = eigenvalues(op.h);
  int mult = 0;
  for (const auto& it : spec.items)
    if (std::abs(it.value - Complex(2.2, 0)) < 1e-6) mult = it.multiplicity;
  REQUIRE(mult == 2);
  const DetFunction f(op, 2.0);
  CHECK(winding_number(f, circle_contour(Complex(2.2, 0), 0.3), 256) == 2);
}

TEST_CASE("winding is additive under contour splitting") {
  const auto op = jordan_op(2.2);
  const DetFunction f(op, 2.0);
  // whole box around both 2.2 (double) and 5; split along x = 3.6 (clear of
  // the pole at 3 and of the zeros)
  auto lh = [&f](Complex l) { return f.log_holomorphic(l); };
  const int whole = winding_number(lh, rectangle_contour(Complex(1.6, -0.8), Complex(5.5, 0.8)), 512);
  const int left = winding_number(lh, rectangle_contour(Complex(1.6, -0.8), Complex(3.6, 0.8)), 512);
  const int right = winding_number(lh, rectangle_contour(Complex(3.6, -0.8), Complex(5.5, 0.8)), 512);
  CHECK(whole == 3);
  CHECK(left + right == whole);
}

TEST_CASE("locating zeros in a region that straddles free eigenvalues") {
  const auto op = schrodinger_op(Complex(0.28, 0.21), 4, 3);
  const DetFunction f(op, 2.0);
  const RectRegion region{Complex(0.3, -1.2), Complex(4.21, 1.2)};
  const ZeroSet zs = locate_zeros(f, region, 1e-9);

  std::vector<Complex> eig;
  for (const auto& it : eigenvalues(op.h).items)
    if (it.value.real() >= region.lo.real() && it.value.real() <= region.hi.real() &&
        it.value.imag() >= region.lo.imag() && it.value.imag() <= region.hi.imag())
      for (int m = 0; m < it.multiplicity; ++m) eig.push_back(it.value);

  REQUIRE(zs.total_multiplicity() == static_cast<int>(eig.size()));
  REQUIRE(!zs.zeros.empty());
  for (const auto& z : zs.zeros) {
    double best = 1e300;
    for (const Complex& e : eig) best = std::min(best, std::abs(z.location - e));
    CHECK(best < 1e-7);
  }
  CHECK(zs.residual < 1e-8);
}

TEST_CASE("disk regions filter and verify their boundary") {
  const Complex star(1.9, 0.4);
  const DetFunction f([star](Complex l) { return (l - star) * (l - 10.0); });
  const ZeroSet zs = locate_zeros(f, DiskRegion{Complex(2.0, 0.3), 1.0}, 1e-9);
  REQUIRE(zs.zeros.size() == 1);
  CHECK(std::abs(zs.zeros[0].location - star) < 1e-8);
  CHECK(zs.zeros[0].multiplicity == 1);
}

TEST_CASE("region boundaries must keep clear of the free spectrum") {
  const auto op = schrodinger_op(Complex(0.2, 0.1));
  const DetFunction f(op, 2.0);
  CHECK_THROWS_AS(locate_zeros(f, RectRegion{Complex(1.0 - 1e-9, -0.5), Complex(2.0, 0.5)}, 1e-8),
                  std::invalid_argument);
}

TEST_CASE("value cache is safe under concurrent evaluation") {
  const auto op = schrodinger_op(Complex(0.2, 0.1));
  const DetFunction f(op, 2.0);
  std::vector<Complex> pts;
  for (int i = 0; i < 64; ++i) pts.push_back(Complex(0.2 + 0.05 * i, 0.4));
  std::vector<Complex> a(pts.size()), b(pts.size());
  auto eval_into = [&](std::vector<Complex>& out) {
    std::vector<std::thread> ts;
    std::atomic<size_t> next{0};
    for (int w = 0; w < 4; ++w)
      ts.emplace_back([&]() {
        size_t i;
        while ((i = next.fetch_add(1)) < pts.size()) out[i] = f(pts[i]);
      });
    for (auto& t : ts) t.join();
  };
  eval_into(a);
  eval_into(b);
  for (size_t i = 0; i < pts.size(); ++i) CHECK(a[i] == b[i]);
}
