// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "magspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>

namespace magspec {

int ComplexSpectrum::total_multiplicity() const {
  int n = 0;
  for (const auto& it : items) n += it.multiplicity;
  return n;
}

std::vector<Complex> ComplexSpectrum::expanded() const {
  std::vector<Complex> out;
  out.reserve(static_cast<size_t>(total_multiplicity()));
  for (const auto& it : items)
    for (int k = 0; k < it.multiplicity; ++k) out.push_back(it.value);
  return out;
}

ComplexSpectrum eigenvalues(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eigenvalues: matrix must be square");
  const Eigen::Index n = a.rows();
  ComplexSpectrum spec;
  if (n == 0) return spec;
  Eigen::ComplexEigenSolver<Matrix> es(a, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw EigensolverError("eigenvalues: Schur iteration did not converge");
  std::vector<Complex> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);

  // Union-find clustering at the 1e-8 absolute tolerance.
  constexpr double kClusterTol = 1e-8;
  std::vector<Eigen::Index> parent(static_cast<size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<Eigen::Index(Eigen::Index)> find = [&](Eigen::Index i) {
    while (parent[static_cast<size_t>(i)] != i) {
      parent[static_cast<size_t>(i)] = parent[static_cast<size_t>(parent[static_cast<size_t>(i)])];
      i = parent[static_cast<size_t>(i)];
    }
    return i;
  };
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (std::abs(ev[static_cast<size_t>(i)] - ev[static_cast<size_t>(j)]) <= kClusterTol) {
        const auto ri = find(i), rj = find(j);
        if (ri != rj) parent[static_cast<size_t>(rj)] = ri;
      }
  std::map<Eigen::Index, std::pair<Complex, int>> clusters;
  for (Eigen::Index i = 0; i < n; ++i) {
    auto& c = clusters[find(i)];
    c.first += ev[static_cast<size_t>(i)];
    c.second += 1;
  }
  for (auto& [root, c] : clusters)
    spec.items.push_back({c.first / static_cast<double>(c.second), c.second});
  std::sort(spec.items.begin(), spec.items.end(), [](const auto& x, const auto& y) {
    if (x.value.real() != y.value.real()) return x.value.real() < y.value.real();
    return x.value.imag() < y.value.imag();
  });

  Complex sum = 0;
  for (const auto& it : spec.items) sum += static_cast<double>(it.multiplicity) * it.value;
  const Complex tr = a.trace();
  const double resid = std::abs(sum - tr) / std::max(1.0, std::abs(tr));
  if (resid > 1e-8)
    throw EigensolverError("eigenvalues: trace identity violated, relative residual " +
                           std::to_string(resid));
  return spec;
}

SchattenReport schatten_norm(const Matrix& a, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("schatten_norm: p must be >= 1");
  SchattenReport rep;
  rep.p = p;
  if (a.size() == 0) {
    rep.norm = 0;
    return rep;
  }
  if (std::min(a.rows(), a.cols()) <= 64) {
    Eigen::JacobiSVD<Matrix> svd(a);
    rep.singular_values = svd.singularValues();
  } else {
    Eigen::BDCSVD<Matrix> svd(a);
    rep.singular_values = svd.singularValues();
  }
  double s = 0;
  for (Eigen::Index i = 0; i < rep.singular_values.size(); ++i)
    s += std::pow(rep.singular_values[i], p);
  rep.norm = std::pow(s, 1.0 / p);
  return rep;
}

Matrix weight_matrix(const AssembledOperator& op, const Weight& w, int quad_order) {
  switch (w.kind) {
    case Weight::Kind::Identity: return Matrix::Identity(op.dim(), op.dim());
    case Weight::Kind::Perp: return perp_weight_matrix(op, w.env, quad_order);
    case Weight::Kind::Longitudinal: return longitudinal_weight_matrix(op, w.env);
  }
  throw std::invalid_argument("weight_matrix: bad kind");
}

Matrix weighted_resolvent(const AssembledOperator& op, Complex lambda, const Weight& left,
                          const Weight& right, int quad_order) {
  double dist = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < op.dim(); ++i)
    dist = std::min(dist, std::abs(lambda - op.h0_diag[i]));
  if (dist <= 1e-12)
    throw ResolventSingular("weighted_resolvent: lambda within 1e-12 of sigma(H0)", dist);
  Vector rd(op.dim());
  for (Eigen::Index i = 0; i < op.dim(); ++i) rd[i] = 1.0 / (op.h0_diag[i] - lambda);
  if (left.kind == Weight::Kind::Identity && right.kind == Weight::Kind::Identity)
    return Matrix(rd.asDiagonal());
  if (left.kind == Weight::Kind::Identity)
    return rd.asDiagonal() * weight_matrix(op, right, quad_order);
  if (right.kind == Weight::Kind::Identity)
    return weight_matrix(op, left, quad_order) * rd.asDiagonal();
  return weight_matrix(op, left, quad_order) * rd.asDiagonal() *
         weight_matrix(op, right, quad_order);
}

ResolventBoundProfile resolvent_bound_profile(const AssembledOperator& op, double p,
                                              std::span<const Complex> path,
                                              const Weight& left, const Weight& right,
                                              int quad_order) {
  if (!(p >= 1)) throw std::invalid_argument("resolvent_bound_profile: p must be >= 1");
  double reach = 1.0;
  for (Complex lam : path) reach = std::max(reach, std::abs(lam));
  const LevelGeometry geom = LevelGeometry::make(op.model, reach);

  // Cache the weight matrices; resolvents differ per point only by the
  // diagonal factor.
  const bool li = left.kind == Weight::Kind::Identity;
  const bool ri = right.kind == Weight::Kind::Identity;
  Matrix wl, wr;
  if (!li) wl = weight_matrix(op, left, quad_order);
  if (!ri) wr = weight_matrix(op, right, quad_order);

  ResolventBoundProfile prof;
  prof.sup_ratio = 0;
  for (Complex lam : path) {
    double dist = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < op.dim(); ++i)
      dist = std::min(dist, std::abs(lam - op.h0_diag[i]));
    if (dist <= 1e-12)
      throw ResolventSingular("resolvent_bound_profile: lambda on sigma(H0)", dist);
    Vector rd(op.dim());
    for (Eigen::Index i = 0; i < op.dim(); ++i) rd[i] = 1.0 / (op.h0_diag[i] - lam);
    double lhs;
    if (li && ri) {
      double s = 0;
      for (Eigen::Index i = 0; i < op.dim(); ++i) s += std::pow(std::abs(rd[i]), p);
      lhs = s;
    } else {
      Matrix m;
      if (li) m = rd.asDiagonal() * wr;
      else if (ri) m = wl * rd.asDiagonal();
      else m = wl * rd.asDiagonal() * wr;
      lhs = std::pow(schatten_norm(m, p).norm, p);
    }
    double rhs_shape;
    if (op.model.family == Family::Pauli3d) {
      rhs_shape = std::pow(1.0 + std::abs(lam), op.model.d + 0.5) /
                  (std::pow(geom.dist_halfline(lam), 0.5 * p) *
                   std::pow(geom.dist_levels(lam), 0.25 * p));
    } else {
      rhs_shape = std::pow(1.0 + std::abs(lam), static_cast<double>(op.model.d)) /
                  std::pow(geom.dist_levels(lam), p);
    }
    prof.points.push_back({lam, lhs, rhs_shape});
    prof.sup_ratio = std::max(prof.sup_ratio, lhs / rhs_shape);
  }
  return prof;
}

double default_mu0(const AssembledOperator& op) {
  const double factor = op.model.family == Family::Schrodinger2d ? 1.0 : 2.0;
  return -factor * op.v_sup_norm - 1.0;
}

HansmannReport hansmann_check(const AssembledOperator& op, double mu0, double p) {
  if (!(p >= 1)) throw std::invalid_argument("hansmann_check: p must be >= 1");
  const double factor = op.model.family == Family::Schrodinger2d ? 1.0 : 2.0;
  const double mu1 = -factor * op.v_sup_norm;
  if (!(mu0 <= mu1 - 1.0 + 1e-12))
    throw std::invalid_argument("hansmann_check: mu0 must lie at least one unit left of the numerical-range bound");
  double dist0 = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < op.dim(); ++i)
    dist0 = std::min(dist0, std::abs(mu0 - op.h0_diag[i]));
  if (!(dist0 >= 1.0 - 1e-12))
    throw std::invalid_argument("hansmann_check: mu0 must keep unit distance from sigma(H0)");

  const Eigen::Index n = op.dim();
  Vector b0(n);
  for (Eigen::Index i = 0; i < n; ++i) b0[i] = 1.0 / (op.h0_diag[i] - mu0);
  Matrix shifted = op.h - mu0 * Matrix::Identity(n, n);
  Eigen::PartialPivLU<Matrix> lu(shifted);
  Matrix b = lu.solve(Matrix::Identity(n, n));
  const double inv_resid = (shifted * b - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!(inv_resid < 1e-8))
    throw ResolventSingular("hansmann_check: (H - mu0) is numerically singular", inv_resid);

  HansmannReport rep;
  rep.mu0 = mu0;
  const ComplexSpectrum bs = eigenvalues(b);
  double lhs = 0;
  for (const auto& it : bs.items) {
    double d = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) d = std::min(d, std::abs(it.value - b0[i]));
    lhs += it.multiplicity * std::pow(d, p);
  }
  Matrix diff = b;
  diff -= Matrix(b0.asDiagonal());
  rep.lhs_sum = lhs;
  rep.rhs_norm_p = std::pow(schatten_norm(diff, p).norm, p);
  rep.ratio = rep.rhs_norm_p > 0 ? rep.lhs_sum / rep.rhs_norm_p : 0.0;
  return rep;
}

}  // namespace magspec
