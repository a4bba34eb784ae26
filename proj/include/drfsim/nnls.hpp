#pragma once

#include <Eigen/Dense>

namespace drfsim {

struct NnlsSolution {
  Eigen::VectorXd x;
  double residual = 0.0;  // ||A x - b||_2
  int iterations = 0;
};

/// min ||A x - b||_2 subject to x >= 0 by the Lawson-Hanson active-set method.
///
/// Variables move from the bound set (x_i = 0) to the free set while some
/// bound variable has a positive descent direction w_i = [A^T (b - A x)]_i
/// above `kkt_tol`; the entering variable is the largest w_i, ties to the
/// lowest index. Each inner step solves the unconstrained least-squares
/// problem on the free set and backtracks onto the feasible region when a
/// free variable would turn non-positive.
///
/// Throws ConvergenceError (carrying the best iterate in its message) after
/// 10 * columns outer iterations.
NnlsSolution nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double kkt_tol = 1e-10);

/// Largest w_i over bound variables, i.e. how far x is from satisfying KKT.
double kkt_violation(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& x);

}  // namespace drfsim
