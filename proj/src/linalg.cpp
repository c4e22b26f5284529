#include "qes/linalg.hpp"

#include <string>

#include "qes/errors.hpp"

namespace qes {

LeastSquaresResult least_squares(const Eigen::MatrixXcd& design, const Eigen::MatrixXcd& rhs, double cond_limit) {
  if (design.rows() < design.cols()) fail(ErrorKind::IllConditioned, "fewer sample points than unknowns");
  if (design.rows() != rhs.rows()) fail(ErrorKind::AssumptionViolated, "row count mismatch in least squares");
  Eigen::VectorXd scale(design.cols());
  for (Eigen::Index j = 0; j < design.cols(); ++j) {
    const double n = design.col(j).norm();
    if (n == 0.0) fail(ErrorKind::IllConditioned, "zero column in design matrix");
    scale(j) = 1.0 / n;
  }
  const Eigen::MatrixXcd scaled = design * scale.asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(scaled, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  LeastSquaresResult out;
  out.condition = s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : std::numeric_limits<double>::infinity();
  if (!(out.condition <= cond_limit)) {
    fail(ErrorKind::IllConditioned, "collocation condition number " + std::to_string(out.condition));
  }
  const Eigen::MatrixXcd y = svd.solve(rhs);
  out.solution = scale.asDiagonal() * y;
  const Eigen::MatrixXcd r = design * out.solution - rhs;
  for (Eigen::Index j = 0; j < rhs.cols(); ++j) {
    const double b = rhs.col(j).norm();
    const double rel = b > 0.0 ? r.col(j).norm() / b : r.col(j).norm();
    out.relative_residual.push_back(rel);
    out.max_relative_residual = std::max(out.max_relative_residual, rel);
  }
  return out;
}

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  return svd.singularValues();
}

double commutator_relnorm(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const double denom = a.norm() * b.norm();
  if (denom == 0.0) return 0.0;
  return (a * b - b * a).norm() / denom;
}

}  // namespace qes
