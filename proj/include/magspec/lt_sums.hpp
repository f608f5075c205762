// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAGSPEC_LT_SUMS_HPP
#define MAGSPEC_LT_SUMS_HPP

#include <optional>
#include <string>
#include <vector>

#include "magspec/geometry.hpp"
#include "magspec/landau.hpp"
#include "magspec/spectral.hpp"
#include "magspec/types.hpp"

namespace magspec {

/// Eigenvalue-sum variants: one abstract shape, the per-family shapes with
/// and without the bounded-potential prefactor, the half-line shape of the 3d
/// family, and the tail version (restricted to |lambda| >= tau) of any base.
enum class LTVariant {
  Abstract,
  Schrodinger,
  SchrodingerBounded,
  Pauli2d,
  Pauli2dBounded,
  Pauli3d,
  Tail,
};

const char* lt_variant_name(LTVariant v);
LTVariant lt_variant_from_name(const std::string& name);

struct LTConfig {
  LTVariant variant = LTVariant::Abstract;
  double p = 2.0;
  double eps = 0.1;     // 3d family only, in (0, 1)
  double gamma = 0;     // 3d family only; 0 selects the default d + 3/2 + eps
  std::optional<double> tau;           // required for the tail variant
  LTVariant tail_base = LTVariant::Abstract;
  Family family = Family::Schrodinger2d;
  int d = 1;

  double effective_gamma() const;
  void validate() const;
};

// dist_to_levels / dist_to_halfline live in geometry.hpp and are re-exported
// through the include above.

struct LTSumReport {
  LTConfig config;
  double sum = 0;
  double k = 0;      // the right-hand constant of the variant
  double ratio = 0;  // sum / k
  std::vector<double> term_table;  // per-eigenvalue contributions (expanded)
};

/// Multiplicity-weighted eigenvalue sum of the configured variant.
/// Eigenvalues within 1e-10 of the level set count as lying on it.
LTSumReport lt_sum(const ComplexSpectrum& spec, const LevelGeometry& geom,
                   const LTConfig& config,
                   double k_value = std::numeric_limits<double>::quiet_NaN());

/// The variant's right-hand constant: the L^p envelope integral of the
/// potential (amplitude included), with G-norm and (1 + ||V||_inf) prefactors
/// where the variant carries them.
double k_constant(const PotentialSpec& pot, const LTConfig& config, double quad_rel_tol = 1e-10);

/// True iff every eigenvalue lies in the family's numerical-range box
/// (tolerance 1e-10): Re >= -c ||V|| and |Im| <= c ||V||, with c = 1 for the
/// scalar family and c = 2 for the 2x2 families.
bool numerical_range_box_check(const ComplexSpectrum& spec, double v_sup, Family family);

}  // namespace magspec

#endif  // MAGSPEC_LT_SUMS_HPP
