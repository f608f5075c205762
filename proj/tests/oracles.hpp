// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
//
// Test-only reference implementations, kept independent of the library code
// paths they are used to check.

#ifndef MAGSPEC_TESTS_ORACLES_HPP
#define MAGSPEC_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

using Complex = std::complex<double>;

// Singular values by one-sided Jacobi: rotate column pairs until they are
// mutually orthogonal; the singular values are the final column norms.
inline std::vector<double> jacobi_singular_values(Eigen::MatrixXcd a) {
  const Eigen::Index n = a.cols();
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double alpha = a.col(i).squaredNorm();
        const double beta = a.col(j).squaredNorm();
        const Complex gamma = a.col(i).dot(a.col(j));  // conj(a_i) . a_j
        const double g = std::abs(gamma);
        if (g <= 1e-300) continue;
        off = std::max(off, g / std::sqrt(std::max(alpha * beta, 1e-300)));
        const double phi = std::arg(gamma);
        const double theta = 0.5 * std::atan2(2.0 * g, alpha - beta);
        const double c = std::cos(theta), s = std::sin(theta);
        const Eigen::VectorXcd ai = a.col(i);
        const Eigen::VectorXcd aj = a.col(j);
        a.col(i) = c * ai + s * std::polar(1.0, -phi) * aj;
        a.col(j) = -s * std::polar(1.0, phi) * ai + c * aj;
      }
    if (off < 1e-15) break;
  }
  std::vector<double> sv;
  for (Eigen::Index i = 0; i < n; ++i) sv.push_back(a.col(i).norm());
  std::sort(sv.rbegin(), sv.rend());
  return sv;
}

inline double schatten_norm_oracle(const Eigen::MatrixXcd& a, double p) {
  long double s = 0;
  for (double sv : jacobi_singular_values(a)) s += powl(static_cast<long double>(sv), p);
  return static_cast<double>(powl(s, 1.0L / static_cast<long double>(p)));
}

// Composite Simpson rule in long double.
inline long double simpson(const std::function<long double(long double)>& f, long double a,
                           long double b, int n_half) {
  const long double h = (b - a) / (2 * n_half);
  long double s = f(a) + f(b);
  for (int i = 1; i < 2 * n_half; ++i) s += f(a + i * h) * ((i % 2) ? 4.0L : 2.0L);
  return s * h / 3.0L;
}

// Extended-precision eigenvalue-sum oracle; mirrors the documented formulas
// directly, term by term.
struct LTTermOracle {
  std::vector<long double> levels;
  long double level0;

  long double dist_levels(Complex lam) const {
    long double best = 1e300L;
    for (long double lv : levels) {
      const long double dx = static_cast<long double>(lam.real()) - lv;
      const long double dy = lam.imag();
      best = std::min(best, sqrtl(dx * dx + dy * dy));
    }
    return best;
  }
  long double dist_half(Complex lam) const {
    if (lam.real() >= static_cast<double>(level0)) return fabsl(static_cast<long double>(lam.imag()));
    const long double dx = static_cast<long double>(lam.real()) - level0;
    const long double dy = lam.imag();
    return sqrtl(dx * dx + dy * dy);
  }
  long double abs(Complex lam) const {
    return hypotl(static_cast<long double>(lam.real()), static_cast<long double>(lam.imag()));
  }

  long double term_levels(Complex lam, long double p) const {
    long double d = dist_levels(lam);
    if (d < 1e-10L) d = 0;
    return powl(d, p) / powl(1.0L + abs(lam), 2.0L * p);
  }
  long double term_levels_tail(Complex lam, long double p, long double tau) const {
    if (abs(lam) < tau) return 0;
    long double d = dist_levels(lam);
    if (d < 1e-10L) d = 0;
    return powl(d, p) / powl(abs(lam), 2.0L * p);
  }
  long double term_halfline(Complex lam, long double p, long double eps, long double gamma) const {
    long double dl = dist_levels(lam);
    if (dl < 1e-10L) dl = 0;
    long double dh = dist_half(lam);
    if (dh < 1e-10L) dh = 0;
    const long double e = std::max(p / 4.0L - 1.0L + eps, 0.0L);
    return powl(dh, p / 2.0L + 1.0L + eps) * powl(dl, e) / powl(1.0L + abs(lam), gamma);
  }
};

// Extended-precision zero-sum oracle for disk growth data.
inline long double bgk_sum_oracle(const std::vector<Complex>& zeros, long double alpha,
                                  const std::vector<Complex>& xi, const std::vector<long double>& beta,
                                  long double tau) {
  long double s = 0;
  for (const Complex& z : zeros) {
    const long double az = hypotl(z.real(), z.imag());
    long double term = powl(1.0L - az, alpha + 1.0L + tau);
    for (size_t j = 0; j < xi.size(); ++j) {
      const long double dx = static_cast<long double>(z.real()) - xi[j].real();
      const long double dy = static_cast<long double>(z.imag()) - xi[j].imag();
      const long double e = std::max(beta[j] - 1.0L + tau, 0.0L);
      term *= powl(sqrtl(dx * dx + dy * dy), e);
    }
    s += term;
  }
  return s;
}

inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracles

#endif  // MAGSPEC_TESTS_ORACLES_HPP
