#pragma once

#include <Eigen/Dense>
#include <complex>

namespace qprecode {

using cxd = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;
using MatR = Eigen::MatrixXd;
using VecR = Eigen::VectorXd;

}  // namespace qprecode
