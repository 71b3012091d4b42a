#pragma once

#include <Eigen/Dense>

namespace homdet {

/// Nonnegative least squares: minimize |A x - b|_2 subject to x >= 0.
/// Lawson-Hanson active-set iteration; suitable for the small dense systems
/// produced by the decomposition fitter (hundreds of columns).
Eigen::VectorXd nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                     int max_iterations = 0);

} // namespace homdet
