// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "magspec/bgk.hpp"

#include <cmath>

namespace magspec {

void GrowthData::validate() const {
  if (!(k0 >= 0) || !(alpha >= 0)) throw std::invalid_argument("GrowthData: k0, alpha must be >= 0");
  if (!(tau > 0)) throw std::invalid_argument("GrowthData: tau must be > 0");
  if (xi.size() != beta.size()) throw std::invalid_argument("GrowthData: xi/beta size mismatch");
  for (const Complex& x : xi)
    if (std::abs(std::abs(x) - 1.0) > 1e-12)
      throw std::invalid_argument("GrowthData: singular points must lie on the unit circle");
  for (double b : beta)
    if (!(b >= 0)) throw std::invalid_argument("GrowthData: exponents must be >= 0");
}

double bgk_zero_sum(std::span<const Complex> zeros, const GrowthData& data) {
  data.validate();
  double s = 0;
  for (const Complex& z : zeros) {
    const double az = std::abs(z);
    if (az >= 1.0) throw std::invalid_argument("bgk_zero_sum: zero outside the open disk");
    double term = std::pow(1.0 - az, data.alpha + 1.0 + data.tau);
    for (size_t j = 0; j < data.xi.size(); ++j) {
      const double e = std::max(data.beta[j] - 1.0 + data.tau, 0.0);
      term *= std::pow(std::abs(z - data.xi[j]), e);
    }
    s += term;
  }
  return s;
}

SyntheticH SyntheticH::from_zeros(std::vector<Complex> zeros) {
  SyntheticH h;
  double b0 = 1.0;
  for (const Complex& a : zeros) {
    const double aa = std::abs(a);
    if (aa >= 1.0) throw std::invalid_argument("SyntheticH: zero on or outside the unit circle");
    if (aa > 0) b0 *= aa;
  }
  h.zeros_ = std::move(zeros);
  h.b0_ = b0;
  return h;
}

Complex SyntheticH::blaschke(Complex z) const {
  Complex p = 1.0;
  for (const Complex& a : zeros_) {
    if (a == Complex(0, 0)) {
      p *= z;
    } else {
      p *= (std::abs(a) / a) * (a - z) / (1.0 - std::conj(a) * z);
    }
  }
  return p;
}

Complex SyntheticH::operator()(Complex z) const { return blaschke(z) / b0_; }

GrowthData fit_growth(const std::function<Complex(Complex)>& h, const GrowthShape& shape,
                      const ProbeGrid& probe) {
  if (probe.n_radial < 4 || probe.n_angular < 8)
    throw std::invalid_argument("fit_growth: probe grid too small");
  if (!(probe.r_max > 0) || !(probe.r_max < 1))
    throw std::invalid_argument("fit_growth: r_max must lie in (0, 1)");
  GrowthData out;
  out.alpha = shape.alpha;
  out.xi = shape.xi;
  out.beta = shape.beta;
  out.tau = shape.tau;
  out.validate();

  double num = 0, den = 0;
  struct Pt {
    double log_h, s;
  };
  std::vector<Pt> pts;
  for (int i = 0; i < probe.n_radial; ++i) {
    const double r = probe.r_max * (i + 0.5) / probe.n_radial;
    for (int j = 0; j < probe.n_angular; ++j) {
      const double th = 2.0 * M_PI * (j + 0.5) / probe.n_angular;
      const Complex z = std::polar(r, th);
      const double ah = std::abs(h(z));
      if (!(ah > 0) || !std::isfinite(ah))
        throw ProbeError("fit_growth: log|h| not finite on the probe grid");
      double s = std::pow(1.0 - r, -shape.alpha);
      for (size_t k = 0; k < shape.xi.size(); ++k)
        s *= std::pow(std::abs(z - shape.xi[k]), -shape.beta[k]);
      const double lh = std::log(ah);
      num += s * lh;
      den += s * s;
      pts.push_back({lh, s});
    }
  }
  out.k0 = den > 0 ? num / den : 0.0;
  // the theorem wants a nonnegative prefactor
  if (out.k0 < 0) out.k0 = 0;
  double resid = -std::numeric_limits<double>::infinity();
  for (const Pt& p : pts) resid = std::max(resid, p.log_h - out.k0 * p.s);
  out.max_residual = resid;
  return out;
}

}  // namespace magspec
