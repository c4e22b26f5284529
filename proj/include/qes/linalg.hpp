#ifndef QES_LINALG_HPP
#define QES_LINALG_HPP

// Dense complex least squares with column equilibration, used by every
// collocation fit.

#include <Eigen/Dense>

#include <vector>

namespace qes {

struct LeastSquaresResult {
  Eigen::MatrixXcd solution;            // columns match the right-hand sides
  std::vector<double> relative_residual;  // ||A x - b|| / ||b|| per column
  double max_relative_residual = 0.0;
  double condition = 0.0;  // of the column-scaled design matrix
};

/// Solves min ||A X - B|| column by column. Throws IllConditioned when the
/// scaled design matrix has condition number above cond_limit.
LeastSquaresResult least_squares(const Eigen::MatrixXcd& design, const Eigen::MatrixXcd& rhs,
                                 double cond_limit = 1e12);

/// Singular values in decreasing order.
Eigen::VectorXd singular_values(const Eigen::MatrixXcd& a);

/// ||A B - B A||_F / (||A||_F ||B||_F).
double commutator_relnorm(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

}  // namespace qes

#endif
