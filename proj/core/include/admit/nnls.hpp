#pragma once

#include <Eigen/Core>

namespace admit {

struct NnlsResult {
    Eigen::VectorXd x;      // argmin ‖Ax − b‖ subject to x >= 0
    double residual = 0.0;  // ‖Ax − b‖ at the solution
    int iterations = 0;
    bool converged = true;
};

/// Lawson–Hanson active-set nonnegative least squares.
///
/// Columns enter the passive set by largest positive dual component; the inner
/// loop backtracks along the segment toward the unconstrained passive-set
/// solution whenever it leaves the feasible orthant. The outer loop is capped
/// at 3·cols iterations (the classical bound); `converged` is false if the cap
/// was hit.
NnlsResult solve_nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

}  // namespace admit
