#ifndef QES_ELLIPTIC_HPP
#define QES_ELLIPTIC_HPP

// Weierstrass and Jacobi theta functions for the lattice Z + tau Z.
//
// The Weierstrass function is evaluated from its nome expansion after the
// argument has been reduced to the fundamental cell; the lattice sum is only
// used as a test oracle. Half periods are w0 = 0, w1 = 1/2,
// w2 = -(1 + tau)/2, w3 = tau/2 and e_i = P(w_i).

#include <array>
#include <complex>
#include <numbers>
#include <vector>

namespace qes::elliptic {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

class EllipticParams {
 public:
  static constexpr int kDefaultSeriesTerms = 64;
  static constexpr double kDefaultTol = 1e-12;

  /// Requires Im tau > 0.
  static EllipticParams from_tau(cplx tau, int series_terms = kDefaultSeriesTerms,
                                 double tol = kDefaultTol);

  /// Purely imaginary tau = log(p) / (pi i) for a real nome 0 < p < 1.
  static EllipticParams from_nome(double p, int series_terms = kDefaultSeriesTerms,
                                  double tol = kDefaultTol);

  cplx tau() const noexcept { return tau_; }
  cplx nome() const noexcept { return nome_; }
  /// e_i for i = 1, 2, 3.
  cplx e(int i) const { return e_.at(static_cast<std::size_t>(i - 1)); }
  const std::array<cplx, 3>& e_values() const noexcept { return e_; }
  cplx g2() const noexcept { return g2_; }
  cplx g3() const noexcept { return g3_; }
  int series_terms() const noexcept { return series_terms_; }
  double tol() const noexcept { return tol_; }
  /// w_i for i = 0..3.
  cplx half_period(int i) const;
  /// theta_1'(0).
  cplx theta1_prime_zero() const noexcept { return theta1_prime_zero_; }

  /// Copy with a different truncation order (used for self-consistency checks).
  EllipticParams with_series_terms(int series_terms) const;

  // n p^{2n} / (1 - p^{2n}), n = 1..series_terms (index 0 unused).
  const std::vector<cplx>& lambert_coefficients() const noexcept { return lambert_; }

 private:
  EllipticParams() = default;
  void initialise();

  cplx tau_{};
  cplx nome_{};
  std::array<cplx, 3> e_{};
  cplx g2_{};
  cplx g3_{};
  int series_terms_ = kDefaultSeriesTerms;
  double tol_ = kDefaultTol;
  cplx theta1_prime_zero_{};
  std::vector<cplx> lambert_;
};

/// Reduces x modulo the lattice Z + tau Z into |Im x| <= Im(tau)/2, |Re x| <= 1/2.
cplx reduce_to_cell(cplx x, const EllipticParams& params);

/// Distance from x to the nearest lattice point.
double lattice_distance(cplx x, const EllipticParams& params);

struct WpValues {
  cplx value;
  cplx first;
  cplx second;
};

/// P(x), P'(x) and P''(x) in one pass. Throws PoleProximity within
/// sqrt(tol) of a lattice point, SeriesNotConverged if the tail bound is not
/// met within series_terms.
WpValues weierstrass_p_all(cplx x, const EllipticParams& params);

cplx weierstrass_p(cplx x, const EllipticParams& params);
cplx weierstrass_p_prime(cplx x, const EllipticParams& params);
/// P'' = 6 P^2 - g2 / 2.
cplx weierstrass_p_second(cplx x, const EllipticParams& params);

/// P(x + w_i), i = 1, 2, 3, summed directly from the shifted nome expansions
/// (valid for |Im x| < Im(tau)/2). Independent of weierstrass_p.
cplx weierstrass_p_shifted_series(int i, cplx x, const EllipticParams& params);

struct ShiftIdentityReport {
  double addition = 0.0;          // P(x+y) against the addition formula
  double duplication = 0.0;       // P(x+y) + P(x-y) identity
  double half_period_shift = 0.0; // P(x+w_i) = e_i + (e_i-e_i')(e_i-e_i'')/(P(x)-e_i)
  double shifted_series = 0.0;    // P(x+w_i) against the shifted nome expansion
  double second_derivative = 0.0; // P''/P'^2 against the partial-fraction form
  double differential_equation = 0.0;  // P'^2 - (4P^3 - g2 P - g3)
  double max() const;
};

/// Residuals of the standard identities at (x, y). Throws PoleProximity when
/// P(x) - P(y) or P'(x) vanishes to within tol.
ShiftIdentityReport wp_shift_identities_check(cplx x, cplx y, const EllipticParams& params);

/// Jacobi theta_j(x), j in 0..4 with theta_0 == theta_4.
cplx theta(int j, cplx x, const EllipticParams& params);

/// d^order/dx^order theta_j(x), order in 0..12.
cplx theta_derivative(int j, cplx x, int order, const EllipticParams& params);

/// theta_j(x + tau) / theta_j(x). Throws DivisionByNearZero when |theta_j(x)| < tol.
cplx theta_quasiperiod_factor(int j, cplx x, const EllipticParams& params);

}  // namespace qes::elliptic

#endif
