// Copyright magspec contributors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAGSPEC_TYPES_HPP
#define MAGSPEC_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace magspec {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Base class for failures of the numerical machinery (as opposed to
/// precondition violations, which throw std::invalid_argument).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureError : NumericalError {
  using NumericalError::NumericalError;
};

/// Thrown when a resolvent is requested too close to the unperturbed spectrum.
struct ResolventSingular : NumericalError {
  ResolventSingular(const std::string& msg, double dist)
      : NumericalError(msg), distance(dist) {}
  double distance;
};

struct EigensolverError : NumericalError {
  using NumericalError::NumericalError;
};

/// Contour integration failed to produce an integer winding number, usually
/// because the contour runs through (or too close to) a zero or a pole.
struct ContourError : NumericalError {
  using NumericalError::NumericalError;
};

struct CalibrationError : NumericalError {
  CalibrationError(const std::string& msg, double res)
      : NumericalError(msg), residual(res) {}
  double residual;
};

struct MapAccuracyError : NumericalError {
  using NumericalError::NumericalError;
};

struct ProbeError : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace magspec

#endif  // MAGSPEC_TYPES_HPP
