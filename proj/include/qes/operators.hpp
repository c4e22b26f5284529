#ifndef QES_OPERATORS_HPP
#define QES_OPERATORS_HPP

// Differential operators in x_1..x_N whose coefficients are polynomials in
// P(form) and P'(form) over the linear forms x_j - x_k, x_j + x_k (j < k)
// and x_j + w_i. The lattice invariant g2 is carried as a formal symbol so
// term lists do not depend on tau. Derivatives of coefficients close under
// P'' = 6 P^2 - g2/2.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "qes/elliptic.hpp"
#include "qes/jet.hpp"
#include "qes/ring.hpp"
#include "qes/sympoly.hpp"

namespace qes::ops {

/// x_j -> eps_j x_{sigma(j)}, d_j -> eps_j d_{sigma(j)}.
struct SignedPermutation {
  std::vector<int> sigma;  // 0-based images
  std::vector<int> signs;  // +-1

  static SignedPermutation identity(int n);
  int n() const noexcept { return static_cast<int>(sigma.size()); }
  /// prod of signs; +1 exactly on the even-sign subgroup.
  int epsilon() const;
  /// (this o other)(x) = this(other(x)) as coordinate maps.
  SignedPermutation compose(const SignedPermutation& other) const;
  /// Image of a point under the coordinate map.
  std::vector<cplx> apply(std::span<const cplx> x) const;
};

/// Every element of the signed-permutation group acting on the given
/// coordinates (0-based) of an n-variable space; identity elsewhere.
std::vector<SignedPermutation> signed_permutations(int n, const std::vector<int>& coords);
/// Plain permutations of all n coordinates.
std::vector<SignedPermutation> permutations(int n);

enum class FormKind { Minus, Plus, Shift };

struct LinearForm {
  FormKind kind;
  int j;  // first variable
  int k;  // second variable (Minus/Plus) or half-period index (Shift)
};

/// Indexing of the linear forms for a given N.
class FormTable {
 public:
  explicit FormTable(int n);
  int n() const noexcept { return n_; }
  int size() const noexcept { return static_cast<int>(forms_.size()); }
  const LinearForm& form(int id) const { return forms_.at(static_cast<std::size_t>(id)); }
  int minus(int j, int k) const;  // x_j - x_k, j < k
  int plus(int j, int k) const;   // x_j + x_k, j < k
  int shift(int j, int i) const;  // x_j + w_i
  /// Coefficient of x_v in the form.
  int coefficient(int id, int v) const;
  /// Form id and sign s with w(form) = s * form'.
  std::pair<int, int> transform(int id, const SignedPermutation& w) const;
  cplx evaluate(int id, std::span<const cplx> x, const elliptic::EllipticParams& params) const;
  std::string name(int id) const;

 private:
  int n_;
  std::vector<LinearForm> forms_;
};

/// Polynomial in g2 and P(form), P'(form) with rational coefficients.
/// Monomial key: [g2 power, p_0, q_0, p_1, q_1, ...] per form id.
class CoeffPoly {
 public:
  using Key = std::vector<int>;

  CoeffPoly() = default;
  explicit CoeffPoly(int n_forms) : n_forms_(n_forms) {}
  static CoeffPoly constant(int n_forms, const Rational& c);
  /// P(form) or P'(form).
  static CoeffPoly generator(int n_forms, int form, bool prime);

  const std::map<Key, Rational>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  int n_forms() const noexcept { return n_forms_; }

  void add(const Key& k, const Rational& c);
  CoeffPoly& operator+=(const CoeffPoly& o);
  CoeffPoly operator*(const CoeffPoly& o) const;
  CoeffPoly scaled(const Rational& s) const;
  /// d/dx_v.
  CoeffPoly derivative(const FormTable& table, int v) const;
  CoeffPoly transformed(const FormTable& table, const SignedPermutation& w) const;

 private:
  int n_forms_ = 0;
  std::map<Key, Rational> terms_;
};

using MultiIndex = Exponents;

class DiffOperator {
 public:
  DiffOperator() = default;
  explicit DiffOperator(int n);

  static DiffOperator scalar(int n, const Rational& c);
  static DiffOperator multiplication(int n, const CoeffPoly& c);
  /// d/dx_j.
  static DiffOperator derivative(int n, int j);

  int n() const noexcept { return n_; }
  const FormTable& forms() const noexcept { return table_; }
  const std::map<MultiIndex, CoeffPoly>& terms() const noexcept { return terms_; }

  void add_term(const MultiIndex& alpha, const CoeffPoly& c);
  DiffOperator& operator+=(const DiffOperator& o);
  friend DiffOperator operator+(DiffOperator a, const DiffOperator& b) { return a += b; }
  DiffOperator scaled(const Rational& s) const;
  /// Operator product (this o other), derivatives acting through.
  DiffOperator compose(const DiffOperator& other) const;
  DiffOperator transformed(const SignedPermutation& w) const;

  /// Number of (derivative, coefficient monomial) pairs.
  std::size_t term_count() const;
  int max_order() const;
  int max_order_per_variable() const;

 private:
  int n_ = 1;
  FormTable table_{1};
  std::map<MultiIndex, CoeffPoly> terms_;
};

/// Evaluates coefficient monomials at one point.
class CoefficientEvaluator {
 public:
  CoefficientEvaluator(const FormTable& table, std::span<const cplx> x, const elliptic::EllipticParams& params);
  cplx operator()(const CoeffPoly& c) const;

 private:
  std::vector<cplx> wp_;
  std::vector<cplx> wpp_;
  cplx g2_;
};

/// sum over terms of coefficient(x) * d^alpha f(x), derivatives of f exact
/// through Taylor jets. Throws PoleProximity at a coefficient pole.
cplx apply_operator(const DiffOperator& op, const JetFunction& f, std::span<const cplx> x,
                    const elliptic::EllipticParams& params);
/// Same, with the jet of f already computed at x.
cplx apply_operator(const DiffOperator& op, const Jet& fjet, std::span<const cplx> x,
                    const elliptic::EllipticParams& params);

/// H = -sum d_j^2 + 2 l(l+1) sum_{j<k} (P(x_j-x_k) + P(x_j+x_k)) + sum_j sum_i l_i(l_i+1) P(x_j+w_i),
/// with pair = l(l+1) and ext[i] = l_i(l_i+1).
DiffOperator hamiltonian_operator(int n, const Rational& pair, const std::array<Rational, 4>& ext);

}  // namespace qes::ops

#endif
