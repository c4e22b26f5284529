#ifndef QES_DEGENERATION_HPP
#define QES_DEGENERATION_HPP

// The trigonometric BC_N Inozemtsev model, its invariant spaces in the
// variables u_j = sin^2(pi x_j), and the p -> 0 limit of the elliptic model.
// Energies and couplings c1, c2 are stored in units of pi^2.

#include <span>
#include <vector>

#include "qes/elliptic.hpp"
#include "qes/inozemtsev.hpp"
#include "qes/operator_matrix.hpp"
#include "qes/ring.hpp"
#include "qes/sympoly.hpp"

namespace qes::degeneration {

struct DegenerateCoupling {
  int N = 1;
  Rational l = 0;
  Rational l0 = 0;
  Rational l1 = 0;
  Rational a_tilde = 0;
  int L = 0;
  Rational c1 = 0;  // coefficient of cos 2 pi x, over pi^2
  Rational c2 = 0;  // coefficient of cos 4 pi x, over pi^2

  /// c1 and c2 set to the values that make W_L^(D),sym invariant.
  static DegenerateCoupling from_constraints(int n, const Rational& l, const Rational& l0, const Rational& l1,
                                             const Rational& a_tilde, int degree);
  Rational c1_required() const;  // 2 a (2L + l0 + l1 + 3 + 2(N-1)(l+1))
  Rational c2_required() const;  // -a^2 / 2
  bool constraints_hold() const { return c1 == c1_required() && c2 == c2_required(); }
};

/// L = -(N-1)(l+1) - (l0+l1+2)/2 + b, as a rational.
Rational limit_degree_value(int n, const Rational& l, const Rational& l0, const Rational& l1, const Rational& b_tilde);
/// Same, throwing ConstraintViolated unless it is a non-negative integer.
int limit_degree(int n, const Rational& l, const Rational& l0, const Rational& l1, const Rational& b_tilde);

struct LimitCouplings {
  Rational l2;
  Rational l3;
};

/// l2 = a/(8p) + b, l3 = -a/(8p) + b. Throws ZeroNome for p = 0.
LimitCouplings coupling_limit_map(const Rational& a_tilde, const Rational& b_tilde, const Rational& p);

/// Phi_D^{-1} H^(D) Phi_D / pi^2 on symmetric polynomials in u.
SymPoly<Rational> apply_degenerate_hamiltonian(const DegenerateCoupling& dc, const SymPoly<Rational>& f);

/// Matrix on symmetric polynomials of per-variable degree <= L; closure_residual
/// is the coefficient mass leaving the box. With strict = true a violated
/// constraint throws ConstraintViolated instead of returning the open matrix.
OperatorMatrix<Rational> degenerate_hamiltonian_matrix(const DegenerateCoupling& dc, bool strict = false);

/// log |Phi_D(x)| for the ground-state factor of the trigonometric model.
double log_phi_d(const DegenerateCoupling& dc, std::span<const double> x);

/// The gauge selected for the limit: a = l+1, b0 = (l0+1)/2, b1 = (l1+1)/2,
/// b2 = -l2/2, b3 = -l3/2.
inozemtsev::GaugeChoice limit_gauge(int n, const Rational& l, const Rational& l0, const Rational& l1,
                                    const LimitCouplings& lc);

/// log |Psi_D(x)|.
double log_psi_d(int n, const Rational& l, const Rational& l1, const Rational& a_tilde, const Rational& b_tilde,
                 std::span<const double> x);

/// log |Phi(P(x))| for the limit gauge, evaluated stably for small nome.
double log_phi_limit(const inozemtsev::GaugeChoice& g, const Rational& a_tilde, const Rational& b_tilde,
                     const Rational& p, std::span<const double> x, const elliptic::EllipticParams& params);

struct GaugeLimitRow {
  double p = 0.0;
  double ratio = 0.0;      // [Phi/Psi_D](x) / [Phi/Psi_D](x')
  double deviation = 0.0;  // |ratio - 1|
};

struct GaugeLimitTable {
  std::vector<GaugeLimitRow> rows;
  bool monotone = false;  // deviation decreases along the p list
};

GaugeLimitTable gauge_limit_check(int n, const Rational& l, const Rational& l0, const Rational& l1,
                                  const Rational& a_tilde, const Rational& b_tilde, const std::vector<Rational>& ps,
                                  std::span<const double> x, std::span<const double> xp);

struct SpectrumLimitRow {
  double p = 0.0;
  double discrepancy = 0.0;  // max relative gap discrepancy
  std::vector<double> elliptic_gaps;
  std::vector<double> degenerate_gaps;
};

struct SpectrumLimitTable {
  int L = 0;
  std::vector<SpectrumLimitRow> rows;
  std::vector<double> decade_factors;  // discrepancy(p_i) / discrepancy(p_{i+1})
};

/// Elliptic gap spectrum (shifted by (pi^2/3)(l2(l2+1) + l3(l3+1))) against the
/// degenerate gaps, per p. Gaps are differences from the eigenvalue of least
/// real part. Throws ConstraintViolated unless L is a non-negative integer.
SpectrumLimitTable limit_spectrum_check(int n, const Rational& l, const Rational& l0, const Rational& l1,
                                        const Rational& a_tilde, const Rational& b_tilde,
                                        const std::vector<Rational>& ps);

struct SpanComparison {
  int dim = 0;
  int rank_degenerate = 0;  // rank of the Phi_D u^m family
  int rank_limit = 0;       // rank of the Psi_D t^m family
  int rank_combined = 0;
  bool equal() const { return rank_combined == dim && rank_degenerate == dim && rank_limit == dim; }
};

/// Numerical rank comparison of span{Psi_D t(x)^m} and span{Phi_D sin^{2m}},
/// symmetrized, t(x) = pi^2 / sin^2(pi x) - pi^2/3, on sampled real points.
SpanComparison compare_limit_spaces(int n, const Rational& l, const Rational& l0, const Rational& l1,
                                    const Rational& a_tilde, const Rational& b_tilde, std::uint64_t seed = 11);

}  // namespace qes::degeneration

#endif
