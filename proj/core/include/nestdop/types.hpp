#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Core>

namespace nestdop {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Wraps a normalized frequency (cycles per PRI) into [-1/2, 1/2).
inline double wrap_frequency(double nu) {
  double w = nu - std::floor(nu + 0.5);
  if (w >= 0.5) w -= 1.0;
  return w;
}

}  // namespace nestdop
