#ifndef QES_JET_HPP
#define QES_JET_HPP

// Truncated multivariate Taylor jets in N <= 4 variables, each variable
// truncated at the same maximal order. Coefficients are Taylor coefficients,
// so the mixed derivative d^alpha is alpha! * coefficient(alpha).

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "qes/elliptic.hpp"
#include "qes/sympoly.hpp"

namespace qes {

class Jet {
 public:
  Jet() = default;
  Jet(int n_vars, int order);

  static Jet constant(int n_vars, int order, cplx value);
  /// value + h_j.
  static Jet variable(int n_vars, int order, int j, cplx value);

  int n_vars() const noexcept { return n_; }
  int order() const noexcept { return m_; }
  std::size_t size() const noexcept { return c_.size(); }
  cplx value() const { return c_[0]; }

  cplx coefficient(const Exponents& alpha) const;
  void set_coefficient(const Exponents& alpha, cplx v);
  /// d^alpha at the expansion point.
  cplx derivative(const Exponents& alpha) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator*=(cplx s);
  Jet& operator+=(cplx s) { c_[0] += s; return *this; }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
  friend Jet operator*(Jet a, cplx s) { return a *= s; }
  friend Jet operator*(cplx s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, cplx s) { return a += s; }
  friend Jet operator-(Jet a, cplx s) { return a += -s; }
  friend Jet operator/(const Jet& a, const Jet& b);
  Jet operator-() const;

  /// Sum_n taylor[n] (g - g0)^n with taylor[n] = F^(n)(g0)/n!.
  Jet compose(std::span<const cplx> taylor) const;
  /// Largest n with (g - g0)^n possibly nonzero.
  int nilpotency() const noexcept { return n_ * m_; }

  const std::vector<cplx>& data() const noexcept { return c_; }

 private:
  std::size_t index(const Exponents& alpha) const;
  Exponents multi_index(std::size_t idx) const;

  int n_ = 1;
  int m_ = 0;
  std::vector<cplx> c_{0.0};
};

/// Principal branch g0^a, continued analytically through the nilpotent part.
Jet pow(const Jet& g, cplx a);
Jet exp(const Jet& g);
Jet log(const Jet& g);
Jet reciprocal(const Jet& g);

/// P(g) for a jet argument, using P^(n+2) = 6 sum_i C(n,i) P^(i) P^(n-i).
Jet weierstrass_p(const Jet& g, const elliptic::EllipticParams& params);
/// theta_j(g) for a jet argument.
Jet theta(int j, const Jet& g, const elliptic::EllipticParams& params);

/// Taylor coefficients P^(n)(x)/n!, n = 0..order.
std::vector<cplx> weierstrass_taylor(cplx x, int order, const elliptic::EllipticParams& params);

/// A function of N complex variables evaluated on jets of its arguments.
using JetFunction = std::function<Jet(std::span<const Jet>)>;

/// Jet of f at the point x, per-variable order m.
Jet jet_at(const JetFunction& f, std::span<const cplx> x, int order);
/// Plain value f(x).
cplx value_at(const JetFunction& f, std::span<const cplx> x);

}  // namespace qes

#endif
