#ifndef QES_INOZEMTSEV_HPP
#define QES_INOZEMTSEV_HPP

// Gauge choices, the gauged Hamiltonian on symmetric polynomials in
// z_j = P(x_j), quasi-exact spectra and the integer-coupling dimension count.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qes/elliptic.hpp"
#include "qes/jet.hpp"
#include "qes/operator_matrix.hpp"
#include "qes/ring.hpp"
#include "qes/sympoly.hpp"

namespace qes::inozemtsev {

struct CouplingSet {
  int N = 1;
  Rational l = 0;
  std::array<Rational, 4> li{};  // l0..l3

  /// l(l+1) and l_i(l_i+1), the combinations that enter the Hamiltonian.
  Rational pair_strength() const { return l * (l + 1); }
  Rational external_strength(int i) const;
};

struct GaugeChoice {
  int N = 1;
  Rational a = 0;
  std::array<Rational, 4> b{};  // b0..b3

  /// -((N-1) a + b0 + b1 + b2 + b3).
  Rational degree_value() const;
  bool admissible() const;
  /// Throws InadmissibleGauge unless the degree is a non-negative integer.
  int degree() const;
  std::string str() const;
  friend bool operator==(const GaugeChoice&, const GaugeChoice&) = default;
};

/// Every sign pattern a in {-l, l+1}, b_i in {-l_i/2, (l_i+1)/2} with a
/// non-negative integer degree. For N = 1 the pair exponent is irrelevant and
/// fixed to a = -l.
std::vector<GaugeChoice> enumerate_gauge_choices(const CouplingSet& c);

/// All sign patterns, admissible or not.
std::vector<GaugeChoice> all_gauge_choices(const CouplingSet& c);

/// Phi(z) = prod_{j<k} (z_j - z_k)^a prod_j prod_{i=1..3} (z_j - e_i)^{b_i},
/// principal branches. Throws BranchPointProximity near a zero carried with a
/// negative or fractional exponent.
cplx gauge_factor_phi(const GaugeChoice& g, std::span<const cplx> z, const elliptic::EllipticParams& params);
Jet gauge_factor_phi(const GaugeChoice& g, std::span<const Jet> z, const std::array<cplx, 3>& e);

/// x -> Phi(P(x)) m_lambda(P(x)).
JetFunction gauged_basis_function(const GaugeChoice& g, const Partition& lambda,
                                  const elliptic::EllipticParams& params);

/// m_lambda(P(x_1), ..., P(x_N)).
cplx monomial_at(const Partition& lambda, std::span<const cplx> z);

/// The gauged Hamiltonian Phi^{-1} H Phi applied to a symmetric polynomial.
template <class R>
SymPoly<R> apply_hamiltonian(const GaugeChoice& g, const std::array<R, 3>& e, const SymPoly<R>& f);

/// Matrix on V_d^sym (basis: partitions in the d-box, reverse-lex order).
/// closure_residual is the coefficient mass falling outside the box.
template <class R>
OperatorMatrix<R> hamiltonian_matrix(const GaugeChoice& g, const std::array<R, 3>& e);

std::array<cplx, 3> e_values(const elliptic::EllipticParams& params);
std::array<EPoly, 3> symbolic_e();

struct EigenCluster {
  cplx value;
  int multiplicity = 1;
};

struct SpectrumResult {
  std::vector<cplx> eigenvalues;  // sorted by real part, then imaginary part
  std::vector<EigenCluster> clusters;
  double backward_error = 0.0;    // ||A V - V diag(w)||_F / ||A||_F
};

SpectrumResult spectrum(const OperatorMatrix<cplx>& m);

struct L2Result {
  bool member = false;
  std::string reason;  // first failed clause: "a", "b0", "b1" or "d"; empty when member
};

/// Requires l, l0, l1 >= 0 (AssumptionViolated otherwise).
L2Result l2_membership(const GaugeChoice& g, const CouplingSet& c);

struct DimensionReport {
  long long total = 0;
  std::vector<GaugeChoice> choices;
  std::optional<long long> closed_form;  // N = 1 and N = 2 only
  bool agrees() const { return !closed_form || *closed_form == total; }
};

/// Sum over admissible gauge choices of binomial(N + d, N). Couplings must be
/// non-negative integers.
DimensionReport dimension_report(const CouplingSet& c);

}  // namespace qes::inozemtsev

#endif
