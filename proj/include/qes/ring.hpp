#ifndef QES_RING_HPP
#define QES_RING_HPP

// Coefficient rings for the polynomial algebra: exact rationals, polynomials
// in the half-period symbols e1, e2 (with e3 = -e1 - e2 eliminated), and
// complex doubles.

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <utility>

namespace qes {

using Rational = mpq_class;
using cplx = std::complex<double>;

/// Parses "p/q", "p" or a plain decimal like "0.25" into an exact rational.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

/// Polynomial in e1, e2 with rational coefficients. e3 is always rewritten
/// as -e1 - e2, so e1 + e2 + e3 = 0 holds identically.
class EPoly {
 public:
  using Key = std::pair<int, int>;

  EPoly() = default;
  EPoly(const Rational& c);  // NOLINT(google-explicit-constructor)
  EPoly(int c) : EPoly(Rational(c)) {}  // NOLINT(google-explicit-constructor)

  /// The symbol e_i, i = 1, 2, 3.
  static EPoly e(int i);

  const std::map<Key, Rational>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  int degree() const;

  EPoly& operator+=(const EPoly& o);
  EPoly& operator-=(const EPoly& o);
  EPoly& operator*=(const EPoly& o);
  friend EPoly operator+(EPoly a, const EPoly& b) { return a += b; }
  friend EPoly operator-(EPoly a, const EPoly& b) { return a -= b; }
  friend EPoly operator*(EPoly a, const EPoly& b) { return a *= b; }
  EPoly operator-() const;
  friend bool operator==(const EPoly& a, const EPoly& b) { return a.terms_ == b.terms_; }

  Rational evaluate(const Rational& e1, const Rational& e2) const;
  cplx evaluate(cplx e1, cplx e2) const;
  std::string str() const;

 private:
  void add_term(const Key& k, const Rational& c);
  std::map<Key, Rational> terms_;
};

template <class R>
struct RingTraits;

template <>
struct RingTraits<Rational> {
  static Rational zero() { return 0; }
  static Rational one() { return 1; }
  static Rational from_rational(const Rational& q) { return q; }
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static double magnitude(const Rational& x) { return std::abs(x.get_d()); }
  static std::string str(const Rational& x) { return to_string(x); }
  static constexpr bool exact = true;
};

template <>
struct RingTraits<EPoly> {
  static EPoly zero() { return {}; }
  static EPoly one() { return EPoly(1); }
  static EPoly from_rational(const Rational& q) { return EPoly(q); }
  static bool is_zero(const EPoly& x) { return x.is_zero(); }
  static double magnitude(const EPoly& x);
  static std::string str(const EPoly& x) { return x.str(); }
  static constexpr bool exact = true;
};

template <>
struct RingTraits<cplx> {
  static cplx zero() { return 0.0; }
  static cplx one() { return 1.0; }
  static cplx from_rational(const Rational& q) { return q.get_d(); }
  // Floating coefficients are never structurally zero; callers compare
  // magnitudes against a scale instead.
  static bool is_zero(const cplx& x) { return x == cplx(0.0); }
  static double magnitude(const cplx& x) { return std::abs(x); }
  static std::string str(const cplx& x);
  static constexpr bool exact = false;
};

}  // namespace qes

#endif
