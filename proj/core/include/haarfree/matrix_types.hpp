#pragma once

#include <complex>

#include <Eigen/Dense>

namespace haarfree {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

}  // namespace haarfree
