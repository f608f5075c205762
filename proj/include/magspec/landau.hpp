// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAGSPEC_LANDAU_HPP
#define MAGSPEC_LANDAU_HPP

#include <array>
#include <optional>
#include <vector>

#include "magspec/types.hpp"

namespace magspec {

enum class Family { Schrodinger2d, Pauli2d, Pauli2dGeneral, Pauli3d };

const char* family_name(Family f);
Family family_from_name(const std::string& name);

/// One magnetic operator family at field strength b and half-dimension d.
/// Owns the Landau level sequence of the unperturbed operator.
struct MagneticModel {
  Family family = Family::Schrodinger2d;
  double b = 1.0;  // magnetic field strength, > 0
  int d = 1;       // half-dimension, >= 1

  void validate() const;
  double level(int j) const;
  double level_gap() const;
  /// Number of 2x2 spin blocks (1 for the scalar Schrodinger family).
  int spin_blocks() const;
};

/// [level(0), ..., level(j_max)], strictly increasing with constant gap.
std::vector<double> landau_levels(const MagneticModel& model, int j_max);

struct Longitudinal {
  double box_half_length = 1.0;  // L > 0
  int n_x = 2;                   // interior grid points, >= 2
};

struct TruncationSpec {
  int n_levels = 1;      // Landau index cutoff J >= 1
  int m_per_level = 1;   // intra-level states kept per level, >= 1
  std::optional<Longitudinal> longitudinal;  // Pauli3d only

  void validate(const MagneticModel& model) const;
};

/// Scalar radial envelope shapes used for potentials and resolvent weights.
struct Envelope {
  enum class Kind { Gaussian, PowerDecay, CompactBump, Constant };
  Kind kind = Kind::Constant;
  double param = 1.0;  // width / decay exponent / bump radius

  double operator()(double r) const;
  /// Limit value as r -> infinity.
  double limit_at_infinity() const { return kind == Kind::Constant ? 1.0 : 0.0; }
  bool decaying() const { return kind != Kind::Constant; }
  void validate() const;
};

/// One matrix entry of the potential: amplitude * F(x_perp) [* G(x)].
struct Profile {
  Complex amplitude{0.0, 0.0};
  Envelope perp{};
  std::optional<Envelope> longitudinal;  // Pauli3d only
};

/// Structured complex matrix-valued potential, 1x1 (scalar families) or 2x2.
struct PotentialSpec {
  int rows = 1;  // 1 or 2
  std::array<Profile, 4> entries{};  // row-major; a 1x1 spec uses entries[0]

  const Profile& entry(int i, int j) const { return entries[static_cast<size_t>(i * rows + j)]; }
  Profile& entry(int i, int j) { return entries[static_cast<size_t>(i * rows + j)]; }
  void validate(const MagneticModel& model) const;
  bool has_longitudinal() const;
};

/// sup over a dyadically refined spatial grid of the pointwise matrix operator
/// norm of V(x); refinement stops when the relative change drops below 1e-6.
double sup_norm(const PotentialSpec& pot, int grid_n);

/// One perpendicular basis state: a d-tuple of (Landau index, intra-level
/// index) pairs; the total level index is the sum of the Landau indices.
struct PerpState {
  std::vector<int> n;  // Landau indices, one per 2d pair
  std::vector<int> m;  // intra-level indices
  int total = 0;       // total Landau index (sum of n)
};

struct BasisLayout {
  std::vector<PerpState> perp;
  int spin = 1;    // spin blocks
  int n_long = 1;  // longitudinal modes (1 when absent)
  Eigen::Index dim() const {
    return static_cast<Eigen::Index>(perp.size()) * spin * n_long;
  }
};

/// A finite truncation of H = H0 + V in the symmetric-gauge Landau basis
/// (tensored with sine modes of the Dirichlet box for the 3d family).
struct AssembledOperator {
  RealVector h0_diag;  // diagonal of H0 (exact level multiset + box modes)
  Matrix v;            // potential matrix in the truncated basis
  Matrix h;            // h0 + v
  MagneticModel model;
  TruncationSpec trunc;
  PotentialSpec pot;
  BasisLayout layout;
  double v_sup_norm = 0;

  Eigen::Index dim() const { return h0_diag.size(); }
  Matrix h0() const {
    return Matrix(h0_diag.cast<Complex>().asDiagonal());
  }
};

/// Builds the truncated operator. Matrix elements of the potential are
/// radial Gauss quadratures in the angular-momentum Landau basis; the
/// quadrature order is doubled once and any entry moving by more than 1e-8
/// raises QuadratureError.
AssembledOperator assemble(const MagneticModel& model, const TruncationSpec& trunc,
                           const PotentialSpec& pot, int quad_order);

/// Landau-basis matrix of a scalar radial weight acting on the perpendicular
/// variables (identity on spin and longitudinal factors).
Matrix perp_weight_matrix(const AssembledOperator& op, const Envelope& env, int quad_order);

/// Sine-basis matrix of a longitudinal weight (identity on the rest).
Matrix longitudinal_weight_matrix(const AssembledOperator& op, const Envelope& env);

/// Eigenvalues of the Dirichlet second-difference Laplacian on [-L, L].
RealVector dirichlet_fd_eigenvalues(const Longitudinal& lon);

}  // namespace magspec

#endif  // MAGSPEC_LANDAU_HPP
