#ifndef QES_SYMPOLY_HPP
#define QES_SYMPOLY_HPP

// Symmetric polynomials in z_1..z_N (N <= 4) in the monomial-symmetric
// basis m_lambda, over a pluggable coefficient ring. All operators work by
// expanding to plain monomials and collecting S_N orbits back.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <type_traits>
#include <vector>

#include "qes/errors.hpp"
#include "qes/ring.hpp"

namespace qes {

inline constexpr int kMaxVars = 4;
using Exponents = std::array<int, kMaxVars>;

class Partition {
 public:
  Partition() = default;
  /// Sorts into non-increasing order and strips zeros.
  explicit Partition(std::vector<int> parts);

  const std::vector<int>& parts() const noexcept { return parts_; }
  int length() const noexcept { return static_cast<int>(parts_.size()); }
  int largest() const noexcept { return parts_.empty() ? 0 : parts_.front(); }
  int size() const;
  /// Padded exponent vector of length n.
  Exponents padded(int n) const;
  /// (lambda_1 + 1, lambda_2, ...).
  Partition raised() const;
  std::string str() const;

  // Reverse-lexicographic order on padded exponent vectors: compare from the
  // last component. (0),(1),(2),(1,1),(2,1),(2,2) for N = 2, d = 2.
  friend bool operator<(const Partition& a, const Partition& b);
  friend bool operator==(const Partition& a, const Partition& b) { return a.parts_ == b.parts_; }

 private:
  std::vector<int> parts_;
};

/// Distinct permutations of the padded exponent vector of lambda.
std::vector<Exponents> msym_expand(const Partition& lambda, int n_vars);

/// Partitions with at most n_vars parts, each at most max_part, in basis order.
std::vector<Partition> partitions_in_box(int n_vars, int max_part);

/// binomial(n, k) as an unsigned integer.
unsigned long long binomial(int n, int k);

template <class R>
using Poly = std::map<Exponents, R>;

/// Single-variable polynomial, coefficient of z^i at index i.
template <class R>
using UniPoly = std::vector<R>;

template <class R>
class SymPoly {
 public:
  SymPoly() = default;
  explicit SymPoly(int n_vars) : n_vars_(n_vars) {
    if (n_vars < 1 || n_vars > kMaxVars) fail(ErrorKind::LengthExceeded, "n_vars must be 1..4");
  }

  static SymPoly monomial(int n_vars, const Partition& lambda, R c = RingTraits<R>::one()) {
    SymPoly p(n_vars);
    if (lambda.length() > n_vars) fail(ErrorKind::LengthExceeded, "partition longer than n_vars");
    p.add(lambda, c);
    return p;
  }

  int n_vars() const noexcept { return n_vars_; }
  const std::map<Partition, R>& terms() const noexcept { return terms_; }

  R coefficient(const Partition& lambda) const {
    auto it = terms_.find(lambda);
    return it == terms_.end() ? RingTraits<R>::zero() : it->second;
  }

  void add(const Partition& lambda, const R& c) {
    if (RingTraits<R>::is_zero(c)) return;
    auto it = terms_.find(lambda);
    if (it == terms_.end()) {
      terms_.emplace(lambda, c);
      return;
    }
    it->second = it->second + c;
    if (RingTraits<R>::is_zero(it->second)) terms_.erase(it);
  }

  SymPoly& operator+=(const SymPoly& o) {
    for (const auto& [k, c] : o.terms_) add(k, c);
    return *this;
  }
  SymPoly& operator-=(const SymPoly& o) {
    for (const auto& [k, c] : o.terms_) add(k, RingTraits<R>::zero() - c);
    return *this;
  }
  SymPoly scaled(const R& s) const {
    SymPoly out(n_vars_);
    for (const auto& [k, c] : terms_) out.add(k, c * s);
    return out;
  }
  friend SymPoly operator+(SymPoly a, const SymPoly& b) { return a += b; }
  friend SymPoly operator-(SymPoly a, const SymPoly& b) { return a -= b; }
  friend bool operator==(const SymPoly& a, const SymPoly& b) {
    return a.n_vars_ == b.n_vars_ && a.terms_ == b.terms_;
  }

  int degree() const {
    int d = -1;
    for (const auto& [k, c] : terms_) d = std::max(d, k.size());
    return d;
  }

 private:
  int n_vars_ = 1;
  std::map<Partition, R> terms_;
};

template <class R>
void poly_add(Poly<R>& p, const Exponents& e, const std::type_identity_t<R>& c) {
  if (RingTraits<R>::is_zero(c)) return;
  auto it = p.find(e);
  if (it == p.end()) {
    p.emplace(e, c);
    return;
  }
  it->second = it->second + c;
  if (RingTraits<R>::is_zero(it->second)) p.erase(it);
}

template <class R>
Poly<R> expand(const SymPoly<R>& f) {
  Poly<R> out;
  for (const auto& [lambda, c] : f.terms()) {
    for (const auto& e : msym_expand(lambda, f.n_vars())) poly_add(out, e, c);
  }
  return out;
}

namespace detail {

inline Partition sorted_label(const Exponents& e, int n) {
  return Partition(std::vector<int>(e.begin(), e.begin() + n));
}

template <class R>
bool nearly_equal(const R& a, const R& b, double scale) {
  if constexpr (RingTraits<R>::exact) {
    (void)scale;
    return a == b;
  } else {
    return RingTraits<R>::magnitude(a - b) <= 1e-9 * scale;
  }
}

}  // namespace detail

/// Collects a plain polynomial into the m_lambda basis. Throws NotSymmetric if
/// two monomials of one orbit carry different coefficients.
template <class R>
SymPoly<R> collect(const Poly<R>& p, int n_vars) {
  SymPoly<R> out(n_vars);
  double scale = 1.0;
  if constexpr (!RingTraits<R>::exact) {
    for (const auto& [e, c] : p) scale = std::max(scale, RingTraits<R>::magnitude(c));
  }
  std::map<Partition, R> seen;
  for (const auto& [e, c] : p) {
    for (int i = n_vars; i < kMaxVars; ++i) {
      if (e[static_cast<std::size_t>(i)] != 0) fail(ErrorKind::LengthExceeded, "exponent beyond n_vars");
    }
    const Partition label = detail::sorted_label(e, n_vars);
    if (label.padded(n_vars) == e) seen.emplace(label, c);
  }
  for (const auto& [e, c] : p) {
    const Partition label = detail::sorted_label(e, n_vars);
    auto it = seen.find(label);
    if (it == seen.end() || !detail::nearly_equal(it->second, c, scale)) {
      fail(ErrorKind::NotSymmetric, "orbit of " + label.str() + " has unequal coefficients");
    }
  }
  for (const auto& [label, c] : seen) {
    const std::size_t orbit = msym_expand(label, n_vars).size();
    std::size_t count = 0;
    for (const auto& e : msym_expand(label, n_vars)) count += p.count(e);
    if (count != orbit) fail(ErrorKind::NotSymmetric, "orbit of " + label.str() + " is incomplete");
    out.add(label, c);
  }
  return out;
}

template <class R>
Poly<R> poly_multiply(const Poly<R>& a, const Poly<R>& b) {
  Poly<R> out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      Exponents e{};
      for (int i = 0; i < kMaxVars; ++i) e[i] = ea[i] + eb[i];
      poly_add(out, e, ca * cb);
    }
  }
  return out;
}

template <class R>
SymPoly<R> multiply(const SymPoly<R>& a, const SymPoly<R>& b) {
  return collect(poly_multiply(expand(a), expand(b)), a.n_vars());
}

/// c(z_j) * (d/dz_j)^order applied to the monomials of p, for one j.
template <class R>
Poly<R> apply_single(const UniPoly<R>& c, int order, int j, const Poly<R>& p) {
  Poly<R> out;
  for (const auto& [e, coef] : p) {
    const int m = e[static_cast<std::size_t>(j)];
    if (m < order) continue;
    Rational fall = 1;
    for (int t = 0; t < order; ++t) fall *= (m - t);
    const R scaled = coef * RingTraits<R>::from_rational(fall);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (RingTraits<R>::is_zero(c[i])) continue;
      Exponents out_e = e;
      out_e[static_cast<std::size_t>(j)] = m - order + static_cast<int>(i);
      poly_add(out, out_e, c[i] * scaled);
    }
  }
  return out;
}

/// sum_j c(z_j) (d/dz_j)^order f.
template <class R>
SymPoly<R> apply_gauged_term(const UniPoly<R>& c, int order, const SymPoly<R>& f) {
  if (order < 0) fail(ErrorKind::AssumptionViolated, "derivative order must be non-negative");
  const Poly<R> p = expand(f);
  Poly<R> out;
  for (int j = 0; j < f.n_vars(); ++j) {
    for (const auto& [e, c2] : apply_single(c, order, j, p)) poly_add(out, e, c2);
  }
  return collect(out, f.n_vars());
}

/// Exact quotient of p by (z_j - z_k). Throws NonCancellation on a remainder.
template <class R>
Poly<R> divide_by_difference(Poly<R> p, int j, int k) {
  Poly<R> quotient;
  double scale = 1.0;
  if constexpr (!RingTraits<R>::exact) {
    for (const auto& [e, c] : p) scale = std::max(scale, RingTraits<R>::magnitude(c));
  }
  const auto zj = static_cast<std::size_t>(j);
  const auto zk = static_cast<std::size_t>(k);
  while (true) {
    // Highest power of z_j still present.
    auto lead = p.end();
    for (auto it = p.begin(); it != p.end(); ++it) {
      if (it->first[zj] >= 1 && (lead == p.end() || it->first[zj] > lead->first[zj])) lead = it;
    }
    if (lead == p.end()) break;
    const Exponents e = lead->first;
    const R c = lead->second;
    Exponents q = e;
    q[zj] -= 1;
    poly_add(quotient, q, c);
    p.erase(lead);
    Exponents shifted = q;
    shifted[zk] += 1;
    poly_add(p, shifted, c);
  }
  for (const auto& [e, c] : p) {
    if constexpr (RingTraits<R>::exact) {
      (void)c;
      fail(ErrorKind::NonCancellation, "division by (z_j - z_k) left a remainder");
    } else {
      if (RingTraits<R>::magnitude(c) > 1e-9 * scale) {
        fail(ErrorKind::NonCancellation, "division by (z_j - z_k) left a remainder");
      }
    }
  }
  return quotient;
}

/// sum_j sum_{k != j} c(z_j) / (z_j - z_k) d/dz_j f, a polynomial for symmetric f.
template <class R>
SymPoly<R> apply_cross_term(const UniPoly<R>& c, const SymPoly<R>& f) {
  const int n = f.n_vars();
  const Poly<R> p = expand(f);
  Poly<R> out;
  for (int j = 0; j < n; ++j) {
    const Poly<R> gj = apply_single(c, 1, j, p);
    for (int k = j + 1; k < n; ++k) {
      Poly<R> numer = gj;
      for (const auto& [e, coef] : apply_single(c, 1, k, p)) poly_add(numer, e, RingTraits<R>::zero() - coef);
      for (const auto& [e, coef] : divide_by_difference(std::move(numer), j, k)) poly_add(out, e, coef);
    }
  }
  return collect(out, n);
}

/// Polynomial with given coefficient list, as a UniPoly over R.
template <class R>
UniPoly<R> make_unipoly(std::initializer_list<R> coefs) {
  return UniPoly<R>(coefs);
}

/// 4(z - e1)(z - e2)(z - e3).
template <class R>
UniPoly<R> weierstrass_cubic(const std::array<R, 3>& e) {
  UniPoly<R> p{RingTraits<R>::one()};
  for (const R& ei : e) {
    UniPoly<R> next(p.size() + 1, RingTraits<R>::zero());
    for (std::size_t i = 0; i < p.size(); ++i) {
      next[i + 1] = next[i + 1] + p[i];
      next[i] = next[i] - ei * p[i];
    }
    p = std::move(next);
  }
  for (auto& c : p) c = c * RingTraits<R>::from_rational(4);
  return p;
}

template <class R>
UniPoly<R> unipoly_add(const UniPoly<R>& a, const UniPoly<R>& b) {
  UniPoly<R> out(std::max(a.size(), b.size()), RingTraits<R>::zero());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = out[i] + a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = out[i] + b[i];
  return out;
}

template <class R>
UniPoly<R> unipoly_scale(const UniPoly<R>& a, const R& s) {
  UniPoly<R> out = a;
  for (auto& c : out) c = c * s;
  return out;
}

/// Substitutes e1, e2 into every coefficient of an EPoly-valued SymPoly.
SymPoly<Rational> substitute(const SymPoly<EPoly>& f, const Rational& e1, const Rational& e2);

}  // namespace qes

#endif
