// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "magspec/landau.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "magspec/quadrature.hpp"

namespace magspec {

const char* family_name(Family f) {
  switch (f) {
    case Family::Schrodinger2d: return "schrodinger2d";
    case Family::Pauli2d: return "pauli2d";
    case Family::Pauli2dGeneral: return "pauli2d_general";
    case Family::Pauli3d: return "pauli3d";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  if (name == "schrodinger2d") return Family::Schrodinger2d;
  if (name == "pauli2d") return Family::Pauli2d;
  if (name == "pauli2d_general") return Family::Pauli2dGeneral;
  if (name == "pauli3d") return Family::Pauli3d;
  throw std::invalid_argument("unknown operator family: " + name);
}

void MagneticModel::validate() const {
  if (!(b > 0)) throw std::invalid_argument("MagneticModel: b must be > 0");
  if (d < 1) throw std::invalid_argument("MagneticModel: d must be >= 1");
  if (family == Family::Pauli2d && d != 1)
    throw std::invalid_argument("MagneticModel: the pauli2d family is two-dimensional (d = 1); use pauli2d_general");
}

double MagneticModel::level(int j) const {
  switch (family) {
    case Family::Schrodinger2d: return b * (d + 2.0 * j);
    case Family::Pauli2d: return 2.0 * b * j;
    case Family::Pauli2dGeneral:
    case Family::Pauli3d: return 2.0 * b * d * j;
  }
  return 0;
}

double MagneticModel::level_gap() const { return level(1) - level(0); }

int MagneticModel::spin_blocks() const { return family == Family::Schrodinger2d ? 1 : 2; }

std::vector<double> landau_levels(const MagneticModel& model, int j_max) {
  model.validate();
  if (j_max < 0) throw std::invalid_argument("landau_levels: j_max must be >= 0");
  std::vector<double> out(static_cast<size_t>(j_max) + 1);
  for (int j = 0; j <= j_max; ++j) out[static_cast<size_t>(j)] = model.level(j);
  return out;
}

void Envelope::validate() const {
  switch (kind) {
    case Kind::Gaussian:
      if (!(param > 0)) throw std::invalid_argument("Envelope: gaussian width must be > 0");
      break;
    case Kind::PowerDecay:
      if (!(param > 0)) throw std::invalid_argument("Envelope: decay exponent must be > 0");
      break;
    case Kind::CompactBump:
      if (!(param > 0)) throw std::invalid_argument("Envelope: bump radius must be > 0");
      break;
    case Kind::Constant: break;
  }
}

double Envelope::operator()(double r) const {
  switch (kind) {
    case Kind::Gaussian: {
      const double u = r / param;
      return std::exp(-u * u);
    }
    case Kind::PowerDecay:
      return std::pow(1.0 + r * r, -0.5 * param);
    case Kind::CompactBump: {
      // Smooth mollifier, value 1 at the origin, supported on [0, radius).
      const double u = r / param;
      if (u >= 1.0) return 0.0;
      return std::exp(1.0 - 1.0 / (1.0 - u * u));
    }
    case Kind::Constant: return 1.0;
  }
  return 0;
}

void TruncationSpec::validate(const MagneticModel& model) const {
  if (n_levels < 1) throw std::invalid_argument("TruncationSpec: n_levels must be >= 1");
  if (m_per_level < 1) throw std::invalid_argument("TruncationSpec: m_per_level must be >= 1");
  if (model.family == Family::Pauli3d) {
    if (!longitudinal) throw std::invalid_argument("TruncationSpec: pauli3d requires a longitudinal box");
    if (!(longitudinal->box_half_length > 0))
      throw std::invalid_argument("TruncationSpec: box_half_length must be > 0");
    if (longitudinal->n_x < 2) throw std::invalid_argument("TruncationSpec: n_x must be >= 2");
  } else if (longitudinal) {
    throw std::invalid_argument("TruncationSpec: longitudinal box only applies to pauli3d");
  }
}

bool PotentialSpec::has_longitudinal() const {
  for (int i = 0; i < rows * rows; ++i)
    if (entries[static_cast<size_t>(i)].longitudinal) return true;
  return false;
}

void PotentialSpec::validate(const MagneticModel& model) const {
  const int want_rows = model.family == Family::Schrodinger2d ? 1 : 2;
  if (rows != want_rows)
    throw std::invalid_argument(std::string("PotentialSpec: family ") + family_name(model.family) +
                                " requires a " + std::to_string(want_rows) + "x" +
                                std::to_string(want_rows) + " potential");
  for (int i = 0; i < rows * rows; ++i) {
    const Profile& p = entries[static_cast<size_t>(i)];
    p.perp.validate();
    if (p.longitudinal) {
      if (model.family != Family::Pauli3d)
        throw std::invalid_argument("PotentialSpec: longitudinal envelope only applies to pauli3d");
      p.longitudinal->validate();
      // G must be square integrable on the line.
      if (p.longitudinal->kind == Envelope::Kind::PowerDecay && !(p.longitudinal->param > 0.5))
        throw std::invalid_argument("PotentialSpec: longitudinal power decay needs exponent > 1/2");
      if (p.longitudinal->kind == Envelope::Kind::Constant && std::abs(p.amplitude) > 0)
        throw std::invalid_argument("PotentialSpec: longitudinal envelope must decay");
    }
  }
}

// ---------------------------------------------------------------------------
// Perpendicular basis and radial matrix elements
// ---------------------------------------------------------------------------

namespace {

std::vector<PerpState> enumerate_perp_basis(int d, int n_levels, int m_per_level) {
  std::vector<PerpState> out;
  std::vector<int> n(static_cast<size_t>(d), 0), m(static_cast<size_t>(d), 0);
  // Enumerate all d-tuples with total Landau index < n_levels and each
  // intra-level index < m_per_level, in lexicographic order.
  std::function<void(int, int)> rec_n = [&](int pos, int used) {
    if (pos == d) {
      std::function<void(int)> rec_m = [&](int mp) {
        if (mp == d) {
          PerpState s;
          s.n = n;
          s.m = m;
          s.total = 0;
          for (int v : n) s.total += v;
          out.push_back(std::move(s));
          return;
        }
        for (int v = 0; v < m_per_level; ++v) {
          m[static_cast<size_t>(mp)] = v;
          rec_m(mp + 1);
        }
      };
      rec_m(0);
      return;
    }
    for (int v = 0; used + v < n_levels; ++v) {
      n[static_cast<size_t>(pos)] = v;
      rec_n(pos + 1, used + v);
    }
  };
  rec_n(0, 0);
  std::sort(out.begin(), out.end(), [](const PerpState& a, const PerpState& b) {
    if (a.total != b.total) return a.total < b.total;
    if (a.n != b.n) return a.n < b.n;
    return a.m < b.m;
  });
  return out;
}

// Normalized radial profile of the state (n, m) in the variable xi = b r^2 / 2:
//   R_{n,m}(xi) = sqrt(min!/max!) xi^{k/2} L_{nr}^{k}(xi) e^{-xi/2},
// with nr = min(n, m), k = |n - m|.  Radial matrix elements of an envelope
// F(r) between states with equal angular momentum m - n are
//   int_0^inf F(r(xi)) R R' dxi.
double radial_profile(int n, int m, double xi) {
  const int nr = std::min(n, m);
  const int k = std::abs(n - m);
  const double lognorm = 0.5 * (std::lgamma(nr + 1.0) - std::lgamma(nr + k + 1.0));
  return std::exp(lognorm - 0.5 * xi + 0.5 * k * std::log(std::max(xi, 1e-300))) *
         laguerre(nr, k, xi);
}

std::vector<double> radial_breakpoints(const Envelope& env, double b, int n_levels,
                                       int m_per_level) {
  const int deg = (n_levels - 1) + (m_per_level - 1);
  const double xi_tail = 45.0 + 6.0 * deg;
  double xi_cap = xi_tail;
  if (env.kind == Envelope::Kind::CompactBump) xi_cap = std::min(xi_cap, 0.5 * b * env.param * env.param);
  // Resolve the envelope scale: a gaussian of width w decays on the xi-scale
  // b w^2 / 2.
  double scale_r = 1.0;
  if (env.kind == Envelope::Kind::Gaussian || env.kind == Envelope::Kind::CompactBump)
    scale_r = env.param;
  const double xi_scale = std::max(1e-3, 0.5 * b * std::min(scale_r, 1.0) * std::min(scale_r, 1.0));
  std::vector<double> bp{0.0};
  double s = std::min(0.125, xi_scale / 8.0);
  while (s < xi_cap) {
    bp.push_back(s);
    s *= 2.0;
  }
  if (env.kind == Envelope::Kind::CompactBump) {
    // Refine toward the support edge where the mollifier loses analyticity.
    for (int k = 1; k <= 6; ++k) {
      const double x = xi_cap * (1.0 - std::pow(2.0, -k));
      if (x > bp.back()) bp.push_back(x);
    }
  }
  bp.push_back(xi_cap);
  return bp;
}

// Matrix of a radial envelope in the d = 1 perpendicular basis (n, m), with
// the angular selection rule m - n = m' - n'.
RealMatrix perp_matrix_d1(const Envelope& env, double b, int n_levels, int m_per_level,
                          const std::vector<PerpState>& basis, int order) {
  const Eigen::Index p = static_cast<Eigen::Index>(basis.size());
  if (env.kind == Envelope::Kind::Constant) return RealMatrix::Identity(p, p);
  const auto rule = composite_legendre(radial_breakpoints(env, b, n_levels, m_per_level), order);
  const Eigen::Index nq = rule.nodes.size();
  RealVector envw(nq);
  for (Eigen::Index q = 0; q < nq; ++q)
    envw[q] = rule.weights[q] * env(std::sqrt(2.0 * rule.nodes[q] / b));
  RealMatrix table(p, nq);
  for (Eigen::Index a = 0; a < p; ++a)
    for (Eigen::Index q = 0; q < nq; ++q)
      table(a, q) = radial_profile(basis[static_cast<size_t>(a)].n[0],
                                   basis[static_cast<size_t>(a)].m[0], rule.nodes[q]);
  RealMatrix out = RealMatrix::Zero(p, p);
  for (Eigen::Index a = 0; a < p; ++a) {
    const auto& sa = basis[static_cast<size_t>(a)];
    for (Eigen::Index c = a; c < p; ++c) {
      const auto& sc = basis[static_cast<size_t>(c)];
      if (sa.m[0] - sa.n[0] != sc.m[0] - sc.n[0]) continue;
      double acc = 0;
      for (Eigen::Index q = 0; q < nq; ++q) acc += envw[q] * table(a, q) * table(c, q);
      out(a, c) = acc;
      out(c, a) = acc;
    }
  }
  return out;
}

RealMatrix perp_matrix(const Envelope& env, const MagneticModel& model,
                       const TruncationSpec& trunc, const std::vector<PerpState>& basis,
                       int order) {
  const Eigen::Index p = static_cast<Eigen::Index>(basis.size());
  if (env.kind == Envelope::Kind::Constant) return RealMatrix::Identity(p, p);
  if (model.d == 1) return perp_matrix_d1(env, model.b, trunc.n_levels, trunc.m_per_level, basis, order);
  // d > 1: only envelopes that factorize over the 2d pairs are assembled
  // (a gaussian of |X| is the product of per-pair gaussians).
  if (env.kind != Envelope::Kind::Gaussian)
    throw std::invalid_argument("assemble: d > 1 supports only gaussian or constant envelopes");
  const auto pair_basis = enumerate_perp_basis(1, trunc.n_levels, trunc.m_per_level);
  std::map<std::pair<int, int>, Eigen::Index> pair_index;
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(pair_basis.size()); ++i)
    pair_index[{pair_basis[static_cast<size_t>(i)].n[0], pair_basis[static_cast<size_t>(i)].m[0]}] = i;
  const RealMatrix p1 =
      perp_matrix_d1(env, model.b, trunc.n_levels, trunc.m_per_level, pair_basis, order);
  RealMatrix out(p, p);
  for (Eigen::Index a = 0; a < p; ++a) {
    const auto& sa = basis[static_cast<size_t>(a)];
    for (Eigen::Index c = 0; c < p; ++c) {
      const auto& sc = basis[static_cast<size_t>(c)];
      double prod = 1.0;
      for (int i = 0; i < model.d; ++i) {
        const auto ia = pair_index.at({sa.n[static_cast<size_t>(i)], sa.m[static_cast<size_t>(i)]});
        const auto ic = pair_index.at({sc.n[static_cast<size_t>(i)], sc.m[static_cast<size_t>(i)]});
        prod *= p1(ia, ic);
        if (prod == 0.0) break;
      }
      out(a, c) = prod;
    }
  }
  return out;
}

// Orthogonal sine transform of the Dirichlet box: S(i, k) are the
// second-difference eigenvectors on the interior grid.
RealMatrix sine_transform(int n_x) {
  RealMatrix s(n_x, n_x);
  const double c = std::sqrt(2.0 / (n_x + 1.0));
  for (int i = 0; i < n_x; ++i)
    for (int k = 0; k < n_x; ++k)
      s(i, k) = c * std::sin((i + 1.0) * (k + 1.0) * M_PI / (n_x + 1.0));
  return s;
}

RealMatrix longitudinal_matrix(const Envelope& env, const Longitudinal& lon) {
  if (env.kind == Envelope::Kind::Constant) return RealMatrix::Identity(lon.n_x, lon.n_x);
  const double h = 2.0 * lon.box_half_length / (lon.n_x + 1.0);
  RealVector g(lon.n_x);
  for (int i = 0; i < lon.n_x; ++i) {
    const double x = -lon.box_half_length + (i + 1.0) * h;
    g[i] = env(std::abs(x));
  }
  const RealMatrix s = sine_transform(lon.n_x);
  return s.transpose() * g.asDiagonal() * s;
}

}  // namespace

RealVector dirichlet_fd_eigenvalues(const Longitudinal& lon) {
  RealVector ev(lon.n_x);
  const double h = 2.0 * lon.box_half_length / (lon.n_x + 1.0);
  for (int k = 1; k <= lon.n_x; ++k)
    ev[k - 1] = (2.0 - 2.0 * std::cos(k * M_PI / (lon.n_x + 1.0))) / (h * h);
  return ev;
}

// ---------------------------------------------------------------------------
// sup norm of the potential
// ---------------------------------------------------------------------------

namespace {

double matrix_norm_2x2(const Eigen::Matrix2cd& m) {
  const double fro2 = m.squaredNorm();
  const double det2 = std::norm(m.determinant());
  const double disc = std::max(0.0, fro2 * fro2 - 4.0 * det2);
  return std::sqrt(0.5 * (fro2 + std::sqrt(disc)));
}

double pointwise_norm(const PotentialSpec& pot, double r, double x, bool abs_amp) {
  if (pot.rows == 1) {
    const Profile& p = pot.entries[0];
    double v = std::abs(p.amplitude) * p.perp(r);
    if (p.longitudinal) v *= (*p.longitudinal)(x);
    return v;
  }
  Eigen::Matrix2cd m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const Profile& p = pot.entry(i, j);
      double e = p.perp(r);
      if (p.longitudinal) e *= (*p.longitudinal)(x);
      m(i, j) = abs_amp ? Complex(std::abs(p.amplitude) * e, 0) : p.amplitude * e;
    }
  return matrix_norm_2x2(m);
}

}  // namespace

double sup_norm(const PotentialSpec& pot, int grid_n) {
  if (grid_n < 16) throw std::invalid_argument("sup_norm: grid_n must be >= 16");
  if (pot.rows != 1 && pot.rows != 2) throw std::invalid_argument("sup_norm: rows must be 1 or 2");
  for (int i = 0; i < pot.rows * pot.rows; ++i) {
    const Profile& p = pot.entries[static_cast<size_t>(i)];
    p.perp.validate();
    if (p.longitudinal) p.longitudinal->validate();
    if (!p.perp.decaying() && p.perp.kind != Envelope::Kind::Constant)
      throw std::invalid_argument("sup_norm: non-decaying envelope");
  }
  const bool has_long = pot.has_longitudinal();

  double scale = 1.0;
  for (int i = 0; i < pot.rows * pot.rows; ++i) {
    const Envelope& e = pot.entries[static_cast<size_t>(i)].perp;
    if (e.kind == Envelope::Kind::Gaussian || e.kind == Envelope::Kind::CompactBump)
      scale = std::max(scale, e.param);
    const auto& lg = pot.entries[static_cast<size_t>(i)].longitudinal;
    if (lg && (lg->kind == Envelope::Kind::Gaussian || lg->kind == Envelope::Kind::CompactBump))
      scale = std::max(scale, lg->param);
  }

  double extent = 8.0 * scale;
  int n = grid_n;
  double prev = -1.0;
  for (int round = 0; round < 40; ++round) {
    double best = pointwise_norm(pot, 1e18, 1e18, false);  // limit at infinity
    for (int i = 0; i <= n; ++i) {
      const double r = extent * i / n;
      if (!has_long) {
        best = std::max(best, pointwise_norm(pot, r, 0.0, false));
      } else {
        for (int j = 0; j <= n; ++j)
          best = std::max(best, pointwise_norm(pot, r, extent * j / n, false));
      }
    }
    // Everything beyond the grid is dominated by the entrywise envelope at the
    // grid edge (envelopes are nonincreasing); extend the box if that bound
    // still exceeds what the grid has seen.
    double tail = pointwise_norm(pot, extent, 0.0, true);
    if (has_long)
      tail = std::max({tail, pointwise_norm(pot, 0.0, extent, true),
                       pointwise_norm(pot, extent, extent, true)});
    if (tail > best * (1.0 + 1e-9) && tail > 1e-300) {
      extent *= 2.0;
      prev = -1.0;
      continue;
    }
    if (prev >= 0.0) {
      const double denom = std::max(best, 1e-300);
      if (std::abs(best - prev) <= 1e-6 * denom) return best;
    }
    prev = best;
    n *= 2;
  }
  throw NumericalError("sup_norm: dyadic refinement did not converge");
}

// ---------------------------------------------------------------------------
// Operator assembly
// ---------------------------------------------------------------------------

namespace {

struct EnvelopeKey {
  int kind;
  double param;
  bool operator<(const EnvelopeKey& o) const {
    return kind != o.kind ? kind < o.kind : param < o.param;
  }
};

// Computes the perpendicular matrix at the requested order and at twice the
// order; rejects the envelope if any entry still moves by more than 1e-8.
RealMatrix converged_perp_matrix(const Envelope& env, const MagneticModel& model,
                                 const TruncationSpec& trunc,
                                 const std::vector<PerpState>& basis, int order) {
  const RealMatrix coarse = perp_matrix(env, model, trunc, basis, order);
  if (env.kind == Envelope::Kind::Constant) return coarse;
  const RealMatrix fine = perp_matrix(env, model, trunc, basis, 2 * order);
  const double drift = (fine - coarse).cwiseAbs().maxCoeff();
  if (drift > 1e-8)
    throw QuadratureError("assemble: radial quadrature not converged (entry drift " +
                          std::to_string(drift) + ")");
  return fine;
}

}  // namespace

AssembledOperator assemble(const MagneticModel& model, const TruncationSpec& trunc,
                           const PotentialSpec& pot, int quad_order) {
  model.validate();
  trunc.validate(model);
  pot.validate(model);
  if (quad_order < 4) throw std::invalid_argument("assemble: quad_order must be >= 4");

  AssembledOperator op;
  op.model = model;
  op.trunc = trunc;
  op.pot = pot;
  op.layout.perp = enumerate_perp_basis(model.d, trunc.n_levels, trunc.m_per_level);
  op.layout.spin = model.spin_blocks();
  op.layout.n_long = trunc.longitudinal ? trunc.longitudinal->n_x : 1;

  const Eigen::Index np = static_cast<Eigen::Index>(op.layout.perp.size());
  const Eigen::Index nl = op.layout.n_long;
  const Eigen::Index dim = op.layout.dim();

  // Unperturbed diagonal: exact level multiset, with the +gap spin shift for
  // Pauli families and the box-mode offsets for the 3d family.
  op.h0_diag.resize(dim);
  RealVector fd = RealVector::Zero(nl);
  if (trunc.longitudinal) fd = dirichlet_fd_eigenvalues(*trunc.longitudinal);
  for (int s = 0; s < op.layout.spin; ++s) {
    for (Eigen::Index p = 0; p < np; ++p) {
      const int j = op.layout.perp[static_cast<size_t>(p)].total + s;  // spin-up lives one level higher
      for (Eigen::Index k = 0; k < nl; ++k)
        op.h0_diag[(s * np + p) * nl + k] = model.level(j) + (trunc.longitudinal ? fd[k] : 0.0);
    }
  }

  // Potential blocks: per spin pair, amplitude * (perp matrix (x) long matrix).
  std::map<EnvelopeKey, RealMatrix> perp_cache;
  std::map<EnvelopeKey, RealMatrix> long_cache;
  auto perp_for = [&](const Envelope& env) -> const RealMatrix& {
    const EnvelopeKey key{static_cast<int>(env.kind), env.param};
    auto it = perp_cache.find(key);
    if (it == perp_cache.end())
      it = perp_cache.emplace(key, converged_perp_matrix(env, model, trunc, op.layout.perp, quad_order)).first;
    return it->second;
  };
  auto long_for = [&](const Envelope& env) -> const RealMatrix& {
    const EnvelopeKey key{static_cast<int>(env.kind), env.param};
    auto it = long_cache.find(key);
    if (it == long_cache.end())
      it = long_cache.emplace(key, longitudinal_matrix(env, *trunc.longitudinal)).first;
    return it->second;
  };

  op.v = Matrix::Zero(dim, dim);
  for (int si = 0; si < op.layout.spin; ++si) {
    for (int sj = 0; sj < op.layout.spin; ++sj) {
      const Profile& prof = pot.rows == 1 ? pot.entries[0] : pot.entry(si, sj);
      if (prof.amplitude == Complex(0, 0)) continue;
      const RealMatrix& pm = perp_for(prof.perp);
      if (trunc.longitudinal) {
        const Envelope genv = prof.longitudinal.value_or(Envelope{Envelope::Kind::Constant, 1.0});
        const RealMatrix& gm = long_for(genv);
        for (Eigen::Index a = 0; a < np; ++a)
          for (Eigen::Index c = 0; c < np; ++c) {
            if (pm(a, c) == 0.0) continue;
            op.v.block((si * np + a) * nl, (sj * np + c) * nl, nl, nl) +=
                prof.amplitude * pm(a, c) * gm;
          }
      } else {
        op.v.block(si * np, sj * np, np, np) += prof.amplitude * pm;
      }
    }
  }

  op.h = op.v;
  op.h += op.h0_diag.cast<Complex>().asDiagonal();
  op.v_sup_norm = sup_norm(pot, 64);
  return op;
}

Matrix perp_weight_matrix(const AssembledOperator& op, const Envelope& env, int quad_order) {
  env.validate();
  const RealMatrix pm =
      converged_perp_matrix(env, op.model, op.trunc, op.layout.perp, quad_order);
  const Eigen::Index np = static_cast<Eigen::Index>(op.layout.perp.size());
  const Eigen::Index nl = op.layout.n_long;
  Matrix w = Matrix::Zero(op.dim(), op.dim());
  for (int s = 0; s < op.layout.spin; ++s)
    for (Eigen::Index a = 0; a < np; ++a)
      for (Eigen::Index c = 0; c < np; ++c) {
        if (pm(a, c) == 0.0) continue;
        for (Eigen::Index k = 0; k < nl; ++k)
          w((s * np + a) * nl + k, (s * np + c) * nl + k) = pm(a, c);
      }
  return w;
}

Matrix longitudinal_weight_matrix(const AssembledOperator& op, const Envelope& env) {
  env.validate();
  if (!op.trunc.longitudinal)
    throw std::invalid_argument("longitudinal_weight_matrix: operator has no longitudinal factor");
  const RealMatrix gm = longitudinal_matrix(env, *op.trunc.longitudinal);
  const Eigen::Index np = static_cast<Eigen::Index>(op.layout.perp.size());
  const Eigen::Index nl = op.layout.n_long;
  Matrix w = Matrix::Zero(op.dim(), op.dim());
  for (int s = 0; s < op.layout.spin; ++s)
    for (Eigen::Index a = 0; a < np; ++a)
      w.block((s * np + a) * nl, (s * np + a) * nl, nl, nl) = gm.cast<Complex>();
  return w;
}

}  // namespace magspec
