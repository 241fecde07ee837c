#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace smi {

using Real    = double;
using Complex = std::complex<double>;
using Index   = Eigen::Index;

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Failure inside an iterative solver or matrix decomposition.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The sensitivity denominator of the fixed-point derivative is (near) zero,
// which marks a degenerate configuration rather than a recoverable state.
struct SingularSensitivityError : NumericalError {
  using NumericalError::NumericalError;
};

// The sensing-DoF ratio is undefined because the upper bound vanishes.
struct UndefinedDofError : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace smi
