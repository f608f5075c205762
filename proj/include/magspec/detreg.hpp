// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAGSPEC_DETREG_HPP
#define MAGSPEC_DETREG_HPP

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <variant>
#include <vector>

#include "magspec/landau.hpp"
#include "magspec/types.hpp"

namespace magspec {

/// Regularized determinant of I + A of order p_ceil, as the product over the
/// eigenvalues mu of A of (1 + mu) exp(sum_{k=1}^{p_ceil-1} (-mu)^k / k).
Complex det_reg(const Matrix& a, int p_ceil);

/// Same quantity through an LU determinant and power traces; algebraically
/// identical on finite matrices and much cheaper for repeated evaluation.
/// Returns one branch of log det; the real part and exp are well defined.
Complex log_det_reg_lu(const Matrix& a, int p_ceil);

/// The holomorphic function lambda -> det_{p_ceil}(I + V (H0 - lambda)^{-1})
/// whose zeros off sigma(H0) are the eigenvalues of H. Synthetic instances
/// can wrap an arbitrary callable for testing contour machinery.
class DetFunction {
 public:
  DetFunction(const AssembledOperator& op, double p);
  explicit DetFunction(std::function<Complex(Complex)> f);

  Complex operator()(Complex lambda) const;
  /// One branch of log f; stable where f itself would over- or underflow.
  Complex log_value(Complex lambda) const;
  /// log f plus sum of mult * log(lambda - mu) over the unperturbed spectrum:
  /// the pole-free branch used for zero counting in regions that contain
  /// points of sigma(H0).
  Complex log_holomorphic(Complex lambda) const;

  int p_ceil() const { return p_ceil_; }
  const AssembledOperator* op() const { return op_; }

 private:
  const AssembledOperator* op_ = nullptr;
  std::function<Complex(Complex)> synthetic_;
  int p_ceil_ = 1;
  std::vector<std::pair<double, int>> poles_;  // value, multiplicity
  struct Cache {
    std::map<std::pair<double, double>, Complex> log_values;
    std::mutex mutex;
  };
  std::shared_ptr<Cache> cache_;

  Complex compute_log(Complex lambda) const;
};

/// Closed polyline contour (last vertex connects back to the first).
struct Contour {
  std::vector<Complex> vertices;
  double length() const;
};

Contour rectangle_contour(Complex lo, Complex hi);
Contour circle_contour(Complex center, double radius, int segments = 64);

/// Winding number of f along the contour: trapezoidal rule for the
/// logarithmic derivative, where f'/f is taken by central differences with
/// step 1e-6 (1 + |lambda|); n_quad sample points are distributed over the
/// contour by arclength. The result must be within 0.05 of an integer; the
/// sampling is refined up to 16x before ContourError is thrown.
int winding_number(const std::function<Complex(Complex)>& log_f, const Contour& contour,
                   int n_quad);
int winding_number(const DetFunction& f, const Contour& contour, int n_quad);

struct RectRegion {
  Complex lo, hi;  // axis-aligned, lo = bottom-left
};
struct DiskRegion {
  Complex center;
  double radius;
};
using Region = std::variant<RectRegion, DiskRegion>;

struct ZeroSet {
  struct Zero {
    Complex location;
    int multiplicity;
  };
  std::vector<Zero> zeros;
  Region region;
  double residual;  // max |f| over the reported zeros

  int total_multiplicity() const;
};

/// Locates all zeros of f inside the region by recursive quadrisection on
/// winding numbers, then polishes each with Newton steps on log f. Cells are
/// counted with the pole-compensated branch, so regions containing points of
/// sigma(H0) report genuine eigenvalues only.
ZeroSet locate_zeros(const DetFunction& f, const Region& region, double tol);

}  // namespace magspec

#endif  // MAGSPEC_DETREG_HPP
