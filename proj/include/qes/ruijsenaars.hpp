#ifndef QES_RUIJSENAARS_HPP
#define QES_RUIJSENAARS_HPP

// The lowest BC_N Ruijsenaars difference operator Y1, W(B_N)-invariant theta
// spaces, the isomorphism onto the gauged Inozemtsev spaces and the
// non-relativistic limit.

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "qes/elliptic.hpp"
#include "qes/inozemtsev.hpp"
#include "qes/jet.hpp"
#include "qes/operator_matrix.hpp"

namespace qes::ruijsenaars {

using PointFunction = std::function<cplx(std::span<const cplx>)>;

struct RuijsenaarsParams {
  int N = 1;
  cplx kappa = 0.0;
  cplx mu = 0.0;
  std::array<cplx, 4> nu{};
  std::array<cplx, 4> nubar{};

  /// (2 (N-1) mu + sum_r (nu_r + nubar_r)) / kappa.
  cplx level_k() const;
};

/// Permutation pi_p of {0,1,2,3}: id, (01)(23), (02)(13), (03)(12).
int pi_permutation(int p, int r);

/// W(B_N)-invariant level-k theta functions. One-variable members are
/// products of squares theta_0^2..theta_3^2 of total degree k/2; N-variable
/// members are orbit sums over distinct permutations of an index multiset.
struct ThetaBasis {
  int N = 1;
  int k = 0;
  std::vector<std::array<int, 4>> one_variable;  // exponents of theta_0^2..theta_3^2
  std::vector<Partition> labels;                 // index multisets, one per member
  double rank_certificate = 0.0;                 // sigma_min / sigma_max of a sampled design
  bool fallback = false;

  std::size_t dim() const noexcept { return labels.size(); }
  cplx one_variable_value(std::size_t j, cplx x, const elliptic::EllipticParams& params) const;
  cplx value(std::size_t alpha, std::span<const cplx> x, const elliptic::EllipticParams& params) const;
  PointFunction member(std::size_t alpha, const elliptic::EllipticParams& params) const;
};

/// Throws RankDeficient if even the monomial fallback fails the rank test.
ThetaBasis theta_basis(int n, int k, const elliptic::EllipticParams& params, bool force_fallback = false,
                       double rank_tol = 1e-10);

// Both residuals are divided by max(1, |f(x)|).
struct QuasiperiodicityResidual {
  double tau_shift = 0.0;   // |f(x + n tau) e^{2 pi i k ((x|n) + (n|n) tau / 2)} - f(x)|
  double unit_shift = 0.0;  // |f(x + n) - f(x)|
  double max() const { return std::max(tau_shift, unit_shift); }
};

QuasiperiodicityResidual quasiperiodicity_check(const PointFunction& f, int k, std::span<const cplx> x,
                                                std::span<const int> n, const elliptic::EllipticParams& params);

/// Coefficients of Y1 at x: Y1 f(x) = sum_j forward[j] f(x + kappa e_j)
/// + sum_j backward[j] f(x - kappa e_j) + diagonal f(x).
struct Y1Coefficients {
  std::vector<cplx> forward;
  std::vector<cplx> backward;
  cplx diagonal = 0.0;
};

/// Throws DenominatorNearZero when a theta denominator nearly vanishes.
Y1Coefficients y1_coefficients(const RuijsenaarsParams& rp, const elliptic::EllipticParams& params,
                               std::span<const cplx> x);
cplx y1_apply(const RuijsenaarsParams& rp, const elliptic::EllipticParams& params, const PointFunction& f,
              std::span<const cplx> x);

/// Least-squares fit of Y1 applied to each basis member in the basis.
/// closure_residual is the largest relative residual; a violated level
/// condition shows up as a large residual, not an error.
OperatorMatrix<cplx> verify_y1_invariance(const RuijsenaarsParams& rp, const elliptic::EllipticParams& params,
                                          const ThetaBasis& basis, const std::vector<std::vector<cplx>>& points);

/// Assignment of the gauge exponents b_i to the couplings nu_r + nubar_r.
/// Printed: b0, b1, b2, b3 <-> r = 1, 2, 3, 0. Untwisted: b_r <-> r.
enum class Pairing { Printed, Untwisted };

/// Parameters with mu = -a kappa and nu_r = nubar_r = -kappa b_{m(r)}.
RuijsenaarsParams limit_parameters(int n, const Rational& a, const std::array<Rational, 4>& b, cplx kappa,
                                   Pairing pairing);

/// Theta(x) = prod_{j<k} (theta_1(x_j - x_k) theta_1(x_j + x_k))^a
///            prod_j theta_1^{2 b0} theta_2^{2 b1} theta_3^{2 b2} theta_0^{2 b3}, principal branches.
cplx theta_gauge(const Rational& a, const std::array<Rational, 4>& b, std::span<const cplx> x,
                 const elliptic::EllipticParams& params);

struct LimitRow {
  double kappa = 0.0;
  double error = 0.0;  // |E(kappa)|
};

struct LimitTable {
  std::vector<LimitRow> rows;
  std::vector<double> orders;  // log2-type empirical orders between successive rows
  bool strictly_decreasing = false;
  double final_over_initial = 0.0;
};

/// E(kappa) = [(-Theta Y1 Theta^{-1} f)(x) + C0 f(x)] / kappa^2 - (H f)(x), with
/// C0 eliminated through E(xp) = 0. H carries l(l+1) = a(a-1) and
/// l_i(l_i+1) = 2 b_i (2 b_i - 1).
LimitTable nonrelativistic_limit_check(int n, const Rational& a, const std::array<Rational, 4>& b,
                                       const elliptic::EllipticParams& params, const JetFunction& f,
                                       std::span<const cplx> x, std::span<const cplx> xp,
                                       const std::vector<double>& kappas, Pairing pairing);

struct PhiIsomorphism {
  OperatorMatrix<cplx> matrix;  // column alpha: coordinates of f_alpha Theta / Phi in m_mu(P(x))
  double residual = 0.0;
  double sigma_ratio = 0.0;     // sigma_min / sigma_max
};

/// Theta / Phi(P(x)) continued analytically along straight paths from a
/// fixed base point, so the branches of the individual factors stay
/// coherent.
cplx theta_over_phi(const inozemtsev::GaugeChoice& g, std::span<const cplx> x, const elliptic::EllipticParams& params);

/// Requires basis.k = 2 d with d the gauge degree. Throws RankDeficient when
/// sigma_min / sigma_max < 1e-6.
PhiIsomorphism phi_isomorphism(const inozemtsev::GaugeChoice& g, const elliptic::EllipticParams& params,
                               const ThetaBasis& basis, const std::vector<std::vector<cplx>>& points);

}  // namespace qes::ruijsenaars

#endif
