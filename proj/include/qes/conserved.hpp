#ifndef QES_CONSERVED_HPP
#define QES_CONSERVED_HPP

// Oshima's commuting operators P_1..P_N for N <= 3 and their matrices on the
// gauged invariant space, obtained by collocation.

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "qes/elliptic.hpp"
#include "qes/inozemtsev.hpp"
#include "qes/operator_matrix.hpp"
#include "qes/operators.hpp"

namespace qes::conserved {

struct OshimaCouplings {
  Rational pair = 0;              // l(l+1)
  std::array<Rational, 4> ext{};  // l_i(l_i+1)

  static OshimaCouplings from(const inozemtsev::CouplingSet& c);
};

using Block = std::vector<int>;
using SetPartition = std::vector<Block>;

/// Unordered set partitions of `elements` into nonempty blocks; blocks = -1
/// for any number of blocks. The empty set has one partition (no blocks).
std::vector<SetPartition> set_partitions(const Block& elements, int blocks = -1);

// Building blocks on the variables in I (0-based). shift = -1 omits the
// external factor P(x_{I_1} + w_shift).
ops::CoeffPoly s_function(int n, const Block& I, int shift = -1);
ops::CoeffPoly t_open(int n, const Block& I, int shift = -1);
ops::CoeffPoly t_function(int n, const Block& I, const OshimaCouplings& c);
ops::CoeffPoly q_function(int n, const Block& I, const OshimaCouplings& c);
ops::DiffOperator delta(int n, const Block& I, const OshimaCouplings& c);

/// P_k, k = 1..N. Throws UnsupportedN for N > 3.
ops::DiffOperator build_conserved_operator(int n, int k, const OshimaCouplings& c);

/// Seeded points in the period cell whose pair forms x_j +- x_k and doubled
/// coordinates 2 x_j keep distance >= margin from the lattice.
std::vector<std::vector<cplx>> collocation_points(int n, std::size_t count, const elliptic::EllipticParams& params,
                                                  std::uint64_t seed, double margin = 0.05);

/// Fits P(Phi m_lambda) / Phi in span{m_mu(P(x)) : mu_1 <= d}. closure_residual
/// is the largest relative least-squares residual over lambda.
OperatorMatrix<cplx> conserved_matrix(const ops::DiffOperator& op, const inozemtsev::GaugeChoice& g,
                                      const elliptic::EllipticParams& params,
                                      const std::vector<std::vector<cplx>>& points);

struct AffineFit {
  cplx slope = 0.0;
  cplx offset = 0.0;
  double residual = 0.0;  // ||P - slope H - offset I||_F / ||P||_F
};

/// Least-squares fit P = slope * H + offset * I.
AffineFit affine_fit(const Eigen::MatrixXcd& p, const Eigen::MatrixXcd& h);

}  // namespace qes::conserved

#endif
