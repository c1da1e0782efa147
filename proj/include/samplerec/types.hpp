// Common scalar and dense-matrix aliases used across the library.
#pragma once

#include <complex>

#include <Eigen/Core>

namespace samplerec {

using Index = Eigen::Index;
using Complex = std::complex<double>;

using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

}  // namespace samplerec
