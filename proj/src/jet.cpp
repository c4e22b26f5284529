#include "qes/jet.hpp"

#include <cmath>

#include "qes/errors.hpp"

namespace qes {

Jet::Jet(int n_vars, int order) : n_(n_vars), m_(order) {
  if (n_vars < 1 || n_vars > kMaxVars) fail(ErrorKind::LengthExceeded, "jet variables must be 1..4");
  if (order < 0) fail(ErrorKind::AssumptionViolated, "jet order must be non-negative");
  std::size_t size = 1;
  for (int i = 0; i < n_vars; ++i) size *= static_cast<std::size_t>(order + 1);
  c_.assign(size, 0.0);
}

Jet Jet::constant(int n_vars, int order, cplx value) {
  Jet j(n_vars, order);
  j.c_[0] = value;
  return j;
}

Jet Jet::variable(int n_vars, int order, int j, cplx value) {
  Jet out = constant(n_vars, order, value);
  if (order >= 1) {
    Exponents e{};
    e[static_cast<std::size_t>(j)] = 1;
    out.set_coefficient(e, 1.0);
  }
  return out;
}

std::size_t Jet::index(const Exponents& alpha) const {
  std::size_t idx = 0;
  std::size_t stride = 1;
  for (int i = 0; i < n_; ++i) {
    idx += static_cast<std::size_t>(alpha[static_cast<std::size_t>(i)]) * stride;
    stride *= static_cast<std::size_t>(m_ + 1);
  }
  return idx;
}

Exponents Jet::multi_index(std::size_t idx) const {
  Exponents e{};
  for (int i = 0; i < n_; ++i) {
    e[static_cast<std::size_t>(i)] = static_cast<int>(idx % static_cast<std::size_t>(m_ + 1));
    idx /= static_cast<std::size_t>(m_ + 1);
  }
  return e;
}

cplx Jet::coefficient(const Exponents& alpha) const {
  for (int i = 0; i < kMaxVars; ++i) {
    const int a = alpha[static_cast<std::size_t>(i)];
    if (a < 0 || a > m_ || (i >= n_ && a != 0)) return 0.0;
  }
  return c_[index(alpha)];
}

void Jet::set_coefficient(const Exponents& alpha, cplx v) {
  for (int i = 0; i < n_; ++i) {
    if (alpha[static_cast<std::size_t>(i)] > m_) fail(ErrorKind::AssumptionViolated, "jet index beyond order");
  }
  c_[index(alpha)] = v;
}

cplx Jet::derivative(const Exponents& alpha) const {
  for (int i = 0; i < n_; ++i) {
    if (alpha[static_cast<std::size_t>(i)] > m_) {
      fail(ErrorKind::AssumptionViolated, "derivative order exceeds jet order");
    }
  }
  double fact = 1.0;
  for (int i = 0; i < n_; ++i) {
    for (int t = 2; t <= alpha[static_cast<std::size_t>(i)]; ++t) fact *= t;
  }
  return fact * coefficient(alpha);
}

namespace {

void check_compatible(const Jet& a, const Jet& b) {
  if (a.n_vars() != b.n_vars() || a.order() != b.order()) {
    fail(ErrorKind::AssumptionViolated, "jets of different shapes");
  }
}

}  // namespace

Jet& Jet::operator+=(const Jet& o) {
  check_compatible(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  check_compatible(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet& Jet::operator*=(const Jet& o) {
  check_compatible(*this, o);
  std::vector<cplx> out(c_.size(), 0.0);
  const std::size_t base = static_cast<std::size_t>(m_ + 1);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == cplx(0.0)) continue;
    const Exponents ei = multi_index(i);
    for (std::size_t j = 0; j < c_.size(); ++j) {
      if (o.c_[j] == cplx(0.0)) continue;
      // Per-variable digit addition without carry.
      std::size_t idx = 0;
      std::size_t stride = 1;
      std::size_t rest = j;
      bool ok = true;
      for (int v = 0; v < n_; ++v) {
        const std::size_t d = static_cast<std::size_t>(ei[static_cast<std::size_t>(v)]) + rest % base;
        rest /= base;
        if (d >= base) {
          ok = false;
          break;
        }
        idx += d * stride;
        stride *= base;
      }
      if (ok) out[idx] += c_[i] * o.c_[j];
    }
  }
  c_ = std::move(out);
  return *this;
}

Jet& Jet::operator*=(cplx s) {
  for (auto& v : c_) v *= s;
  return *this;
}

Jet Jet::operator-() const {
  Jet out = *this;
  for (auto& v : out.c_) v = -v;
  return out;
}

Jet Jet::compose(std::span<const cplx> taylor) const {
  Jet u = *this;
  u.c_[0] = 0.0;
  Jet out = constant(n_, m_, taylor.empty() ? cplx(0.0) : taylor[0]);
  Jet power = constant(n_, m_, 1.0);
  const int top = std::min<int>(nilpotency(), static_cast<int>(taylor.size()) - 1);
  for (int n = 1; n <= top; ++n) {
    power *= u;
    out += power * taylor[static_cast<std::size_t>(n)];
  }
  return out;
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet pow(const Jet& g, cplx a) {
  const cplx g0 = g.value();
  const int top = g.nilpotency();
  std::vector<cplx> t(static_cast<std::size_t>(top) + 1);
  // binom(a, n) g0^(a - n)
  cplx binom = 1.0;
  const cplx base = std::pow(g0, a);
  cplx inv = 1.0;
  for (int n = 0; n <= top; ++n) {
    t[static_cast<std::size_t>(n)] = binom * base * inv;
    binom *= (a - double(n)) / double(n + 1);
    inv /= g0;
  }
  return g.compose(t);
}

Jet exp(const Jet& g) {
  const int top = g.nilpotency();
  std::vector<cplx> t(static_cast<std::size_t>(top) + 1);
  cplx c = std::exp(g.value());
  for (int n = 0; n <= top; ++n) {
    t[static_cast<std::size_t>(n)] = c;
    c /= double(n + 1);
  }
  return g.compose(t);
}

Jet log(const Jet& g) {
  const cplx g0 = g.value();
  const int top = g.nilpotency();
  std::vector<cplx> t(static_cast<std::size_t>(top) + 1);
  t[0] = std::log(g0);
  cplx inv = 1.0;
  for (int n = 1; n <= top; ++n) {
    inv /= g0;
    t[static_cast<std::size_t>(n)] = ((n % 2 == 1) ? 1.0 : -1.0) * inv / double(n);
  }
  return g.compose(t);
}

Jet reciprocal(const Jet& g) {
  const cplx g0 = g.value();
  if (g0 == cplx(0.0)) fail(ErrorKind::DivisionByNearZero, "reciprocal of a jet with zero value");
  const int top = g.nilpotency();
  std::vector<cplx> t(static_cast<std::size_t>(top) + 1);
  cplx inv = 1.0 / g0;
  for (int n = 0; n <= top; ++n) {
    t[static_cast<std::size_t>(n)] = ((n % 2 == 0) ? 1.0 : -1.0) * inv;
    inv /= g0;
  }
  return g.compose(t);
}

std::vector<cplx> weierstrass_taylor(cplx x, int order, const elliptic::EllipticParams& params) {
  const auto w = elliptic::weierstrass_p_all(x, params);
  std::vector<cplx> d(static_cast<std::size_t>(std::max(order, 2)) + 1, 0.0);
  d[0] = w.value;
  d[1] = w.first;
  d[2] = w.second;
  for (int n = 1; n + 2 <= order; ++n) {
    cplx s = 0.0;
    double c = 1.0;
    for (int i = 0; i <= n; ++i) {
      s += c * d[static_cast<std::size_t>(i)] * d[static_cast<std::size_t>(n - i)];
      c = c * (n - i) / (i + 1);
    }
    d[static_cast<std::size_t>(n + 2)] = 6.0 * s;
  }
  d.resize(static_cast<std::size_t>(order) + 1);
  double fact = 1.0;
  for (int n = 0; n <= order; ++n) {
    if (n > 1) fact *= n;
    d[static_cast<std::size_t>(n)] /= fact;
  }
  return d;
}

Jet weierstrass_p(const Jet& g, const elliptic::EllipticParams& params) {
  const auto t = weierstrass_taylor(g.value(), g.nilpotency(), params);
  return g.compose(t);
}

Jet theta(int j, const Jet& g, const elliptic::EllipticParams& params) {
  const int top = g.nilpotency();
  std::vector<cplx> t(static_cast<std::size_t>(top) + 1);
  double fact = 1.0;
  for (int n = 0; n <= top; ++n) {
    if (n > 1) fact *= n;
    t[static_cast<std::size_t>(n)] = elliptic::theta_derivative(j, g.value(), n, params) / fact;
  }
  return g.compose(t);
}

Jet jet_at(const JetFunction& f, std::span<const cplx> x, int order) {
  const int n = static_cast<int>(x.size());
  std::vector<Jet> vars;
  vars.reserve(x.size());
  for (int j = 0; j < n; ++j) vars.push_back(Jet::variable(n, order, j, x[static_cast<std::size_t>(j)]));
  return f(vars);
}

cplx value_at(const JetFunction& f, std::span<const cplx> x) { return jet_at(f, x, 0).value(); }

}  // namespace qes
