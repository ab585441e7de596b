#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace cqed {

using cplx = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx>;
using Ket = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr cplx kI{0.0, 1.0};

// Positions are measured in wavelengths, so the cavity wave number is 2*pi.
inline constexpr double kWaveNumber = 2.0 * std::numbers::pi;

}  // namespace cqed
