#pragma once

#include <complex>

#include <Eigen/Dense>

namespace prism {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using VectorX = Eigen::Vector<Scalar, Eigen::Dynamic>;

using Index = Eigen::Index;
using Complex = std::complex<double>;

using Matrix = MatrixX<double>;
using ComplexMatrix = MatrixX<Complex>;
using Vector = VectorX<double>;
using IntVector = VectorX<int>;
using IntMatrix = MatrixX<int>;

}  // namespace prism
