// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "magspec/lt_sums.hpp"

#include <cmath>

#include "magspec/quadrature.hpp"

namespace magspec {

const char* lt_variant_name(LTVariant v) {
  switch (v) {
    case LTVariant::Abstract: return "abstract";
    case LTVariant::Schrodinger: return "schrodinger";
    case LTVariant::SchrodingerBounded: return "schrodinger_bounded";
    case LTVariant::Pauli2d: return "pauli2d";
    case LTVariant::Pauli2dBounded: return "pauli2d_bounded";
    case LTVariant::Pauli3d: return "pauli3d";
    case LTVariant::Tail: return "tail";
  }
  return "?";
}

LTVariant lt_variant_from_name(const std::string& name) {
  for (LTVariant v : {LTVariant::Abstract, LTVariant::Schrodinger, LTVariant::SchrodingerBounded,
                      LTVariant::Pauli2d, LTVariant::Pauli2dBounded, LTVariant::Pauli3d,
                      LTVariant::Tail})
    if (name == lt_variant_name(v)) return v;
  throw std::invalid_argument("unknown eigenvalue-sum variant: " + name);
}

double LTConfig::effective_gamma() const { return gamma > 0 ? gamma : d + 1.5 + eps; }

void LTConfig::validate() const {
  if (!(p >= 1)) throw std::invalid_argument("LTConfig: p must be >= 1");
  if (d < 1) throw std::invalid_argument("LTConfig: d must be >= 1");
  const LTVariant base = variant == LTVariant::Tail ? tail_base : variant;
  if (base == LTVariant::Tail) throw std::invalid_argument("LTConfig: tail_base cannot be tail");
  // trace-ideal membership of the weighted resolvent demands p >= 2 [d/2] + 2
  const double p_min = 2.0 * (d / 2) + 2.0;
  if (base != LTVariant::Abstract && p < p_min - 1e-12)
    throw std::invalid_argument("LTConfig: family variants need p >= 2 [d/2] + 2");
  if (base == LTVariant::Pauli3d) {
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("LTConfig: eps must lie in (0, 1)");
    if (!(effective_gamma() > d + 1.5))
      throw std::invalid_argument("LTConfig: gamma must exceed d + 3/2");
  }
  if (variant == LTVariant::Tail) {
    if (!tau) throw std::invalid_argument("LTConfig: tail variant requires tau");
    if (!(*tau > 0)) throw std::invalid_argument("LTConfig: tau must be > 0");
  }
}

namespace {

constexpr double kOnLevelTol = 1e-10;

// One eigenvalue's contribution to the configured sum shape.
double lt_term(Complex lambda, const LevelGeometry& geom, const LTConfig& cfg) {
  const LTVariant base = cfg.variant == LTVariant::Tail ? cfg.tail_base : cfg.variant;
  const bool tail = cfg.variant == LTVariant::Tail;
  const double alam = std::abs(lambda);
  if (tail && alam < *cfg.tau) return 0.0;

  double d_lev = geom.dist_levels(lambda);
  if (d_lev < kOnLevelTol) d_lev = 0.0;  // treat eigensolver noise as on-level

  if (base == LTVariant::Pauli3d) {
    double d_half = geom.dist_halfline(lambda);
    if (d_half < kOnLevelTol) d_half = 0.0;
    const double e_lev = std::max(0.25 * cfg.p - 1.0 + cfg.eps, 0.0);
    const double num = std::pow(d_half, 0.5 * cfg.p + 1.0 + cfg.eps) * std::pow(d_lev, e_lev);
    const double den = tail ? std::pow(alam, cfg.effective_gamma())
                            : std::pow(1.0 + alam, cfg.effective_gamma());
    return num / den;
  }
  const double num = std::pow(d_lev, cfg.p);
  const double den = tail ? std::pow(alam, 2.0 * cfg.p) : std::pow(1.0 + alam, 2.0 * cfg.p);
  return num / den;
}

}  // namespace

LTSumReport lt_sum(const ComplexSpectrum& spec, const LevelGeometry& geom, const LTConfig& config,
                   double k_value) {
  config.validate();
  LTSumReport rep;
  rep.config = config;
  rep.k = k_value;
  for (const auto& item : spec.items) {
    const double t = lt_term(item.value, geom, config);
    for (int m = 0; m < item.multiplicity; ++m) rep.term_table.push_back(t);
    rep.sum += item.multiplicity * t;
  }
  if (std::isnan(k_value)) {
    rep.ratio = std::numeric_limits<double>::quiet_NaN();
  } else if (k_value > 0) {
    rep.ratio = rep.sum / k_value;
  } else {
    rep.ratio = rep.sum == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return rep;
}

namespace {

// Pointwise envelope of |V| over the perpendicular (and longitudinal)
// variables, amplitudes included.
double envelope_perp(const PotentialSpec& pot, double r) {
  double best = 0;
  for (int i = 0; i < pot.rows * pot.rows; ++i) {
    const Profile& p = pot.entries[static_cast<size_t>(i)];
    best = std::max(best, std::abs(p.amplitude) * p.perp(r));
  }
  return best;
}

double envelope_long(const PotentialSpec& pot, double x) {
  double best = 0;
  for (int i = 0; i < pot.rows * pot.rows; ++i) {
    const Profile& p = pot.entries[static_cast<size_t>(i)];
    if (p.amplitude == Complex(0, 0)) continue;
    const double g = p.longitudinal ? (*p.longitudinal)(x) : 1.0;
    best = std::max(best, g);
  }
  return best;
}

bool all_amp_zero(const PotentialSpec& pot) {
  for (int i = 0; i < pot.rows * pot.rows; ++i)
    if (pot.entries[static_cast<size_t>(i)].amplitude != Complex(0, 0)) return false;
  return true;
}

// Integrability of the envelope power against the radial volume factor.
void require_integrable(const PotentialSpec& pot, double p, int d, bool longitudinal) {
  for (int i = 0; i < pot.rows * pot.rows; ++i) {
    const Profile& prof = pot.entries[static_cast<size_t>(i)];
    if (prof.amplitude == Complex(0, 0)) continue;
    if (prof.perp.kind == Envelope::Kind::Constant)
      throw std::invalid_argument("k_constant: constant envelope is not L^p");
    if (prof.perp.kind == Envelope::Kind::PowerDecay && !(p * prof.perp.param > 2.0 * d))
      throw std::invalid_argument("k_constant: power decay needs p * m > 2d");
    if (longitudinal) {
      if (!prof.longitudinal || prof.longitudinal->kind == Envelope::Kind::Constant)
        throw std::invalid_argument("k_constant: 3d family needs a decaying longitudinal envelope");
      if (prof.longitudinal->kind == Envelope::Kind::PowerDecay &&
          !(prof.longitudinal->param > 0.5))
        throw std::invalid_argument("k_constant: longitudinal decay needs exponent > 1/2");
    }
  }
}

}  // namespace

double k_constant(const PotentialSpec& pot, const LTConfig& config, double quad_rel_tol) {
  config.validate();
  const LTVariant base = config.variant == LTVariant::Tail ? config.tail_base : config.variant;
  if (all_amp_zero(pot)) return 0.0;
  require_integrable(pot, config.p, config.d, base == LTVariant::Pauli3d);

  // Surface area of the unit sphere in 2d dimensions: 2 pi^d / (d-1)!.
  const double sphere = 2.0 * std::pow(M_PI, config.d) / std::tgamma(static_cast<double>(config.d));
  const double fp = integrate_positive_axis(
      [&](double r) {
        return std::pow(r, 2.0 * config.d - 1.0) * std::pow(envelope_perp(pot, r), config.p);
      },
      quad_rel_tol);
  double k = sphere * fp;

  double v_sup = 0;
  if (base == LTVariant::SchrodingerBounded || base == LTVariant::Pauli2dBounded ||
      base == LTVariant::Pauli3d)
    v_sup = sup_norm(pot, 64);

  switch (base) {
    case LTVariant::Abstract:
    case LTVariant::Schrodinger:
    case LTVariant::Pauli2d:
      break;
    case LTVariant::SchrodingerBounded:
    case LTVariant::Pauli2dBounded:
      k *= std::pow(1.0 + v_sup, 2.0 * config.p);
      break;
    case LTVariant::Pauli3d: {
      const double gp = integrate_positive_axis(
          [&](double x) { return std::pow(envelope_long(pot, x), config.p); }, quad_rel_tol);
      k *= 2.0 * gp;  // both half-lines of the longitudinal axis
      const double g2 = 2.0 * integrate_positive_axis(
                                  [&](double x) {
                                    const double g = envelope_long(pot, x);
                                    return g * g;
                                  },
                                  quad_rel_tol);
      double g_inf = envelope_long(pot, 0.0);
      k *= std::pow(std::sqrt(g2) + g_inf, config.p);
      k *= std::pow(1.0 + v_sup, config.d + 0.5 * config.p + 1.5 + config.eps);
      break;
    }
    case LTVariant::Tail: break;  // unreachable
  }

  if (config.variant == LTVariant::Tail) {
    const double power =
        base == LTVariant::Pauli3d ? config.effective_gamma() : 2.0 * config.p;
    k *= std::pow(1.0 + 1.0 / *config.tau, power);
  }
  if (!std::isfinite(k)) throw NumericalError("k_constant: divergent envelope integral");
  return k;
}

bool numerical_range_box_check(const ComplexSpectrum& spec, double v_sup, Family family) {
  if (!(v_sup >= 0)) throw std::invalid_argument("numerical_range_box_check: v_sup must be >= 0");
  const double c = family == Family::Schrodinger2d ? 1.0 : 2.0;
  constexpr double tol = 1e-10;
  for (const auto& item : spec.items) {
    if (item.value.real() < -c * v_sup - tol) return false;
    if (std::abs(item.value.imag()) > c * v_sup + tol) return false;
  }
  return true;
}

}  // namespace magspec
