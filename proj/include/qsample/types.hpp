#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qsample {

template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using RealMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using CMatrix = ComplexMatrix<double>;
using Matrix = RealMatrix<double>;
using Vector = RealVector<double>;

/// Outcome probabilities p_k = tr(Pi_k rho), one entry per POVM outcome.
using ProbVector = Vector;

}  // namespace qsample
