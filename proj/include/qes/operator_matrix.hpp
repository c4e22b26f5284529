#ifndef QES_OPERATOR_MATRIX_HPP
#define QES_OPERATOR_MATRIX_HPP

#include <Eigen/Dense>

#include <vector>

#include "qes/ring.hpp"
#include "qes/sympoly.hpp"

namespace qes {

/// Dense matrix of an operator restricted to a finite basis. Column j holds
/// the coordinates of the image of basis[j].
template <class R>
struct OperatorMatrix {
  std::vector<Partition> basis;
  std::vector<R> entries;  // row-major
  double closure_residual = 0.0;

  std::size_t dim() const noexcept { return basis.size(); }
  R& at(std::size_t row, std::size_t col) { return entries[row * dim() + col]; }
  const R& at(std::size_t row, std::size_t col) const { return entries[row * dim() + col]; }

  static OperatorMatrix zeros(std::vector<Partition> basis) {
    OperatorMatrix m;
    m.basis = std::move(basis);
    m.entries.assign(m.basis.size() * m.basis.size(), RingTraits<R>::zero());
    return m;
  }
};

inline Eigen::MatrixXcd to_eigen(const OperatorMatrix<cplx>& m) {
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(m.dim()), static_cast<Eigen::Index>(m.dim()));
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m.at(i, j);
  }
  return out;
}

inline OperatorMatrix<cplx> from_eigen(const Eigen::MatrixXcd& a, std::vector<Partition> basis) {
  auto m = OperatorMatrix<cplx>::zeros(std::move(basis));
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) m.at(i, j) = a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  return m;
}

inline OperatorMatrix<cplx> to_complex(const OperatorMatrix<Rational>& m) {
  OperatorMatrix<cplx> out;
  out.basis = m.basis;
  out.closure_residual = m.closure_residual;
  for (const auto& v : m.entries) out.entries.emplace_back(v.get_d());
  return out;
}

}  // namespace qes

#endif
