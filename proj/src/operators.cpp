#include "qes/operators.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "qes/errors.hpp"

namespace qes::ops {

SignedPermutation SignedPermutation::identity(int n) {
  SignedPermutation w;
  w.sigma.resize(static_cast<std::size_t>(n));
  std::iota(w.sigma.begin(), w.sigma.end(), 0);
  w.signs.assign(static_cast<std::size_t>(n), 1);
  return w;
}

int SignedPermutation::epsilon() const {
  int e = 1;
  for (int s : signs) e *= s;
  return e;
}

SignedPermutation SignedPermutation::compose(const SignedPermutation& other) const {
  // this(y)_j = eps_j y_{sigma(j)}, y = other(x): y_m = eps'_m x_{sigma'(m)}.
  SignedPermutation out;
  out.sigma.resize(sigma.size());
  out.signs.resize(sigma.size());
  for (std::size_t j = 0; j < sigma.size(); ++j) {
    const auto m = static_cast<std::size_t>(sigma[j]);
    out.sigma[j] = other.sigma[m];
    out.signs[j] = signs[j] * other.signs[m];
  }
  return out;
}

std::vector<cplx> SignedPermutation::apply(std::span<const cplx> x) const {
  std::vector<cplx> y(sigma.size());
  for (std::size_t j = 0; j < sigma.size(); ++j) y[j] = double(signs[j]) * x[static_cast<std::size_t>(sigma[j])];
  return y;
}

std::vector<SignedPermutation> signed_permutations(int n, const std::vector<int>& coords) {
  std::vector<int> perm = coords;
  std::sort(perm.begin(), perm.end());
  const std::vector<int> sorted = perm;
  std::vector<SignedPermutation> out;
  do {
    for (int mask = 0; mask < (1 << coords.size()); ++mask) {
      SignedPermutation w = SignedPermutation::identity(n);
      for (std::size_t t = 0; t < sorted.size(); ++t) {
        const auto src = static_cast<std::size_t>(sorted[t]);
        w.sigma[src] = perm[t];
        w.signs[src] = (mask >> t) & 1 ? -1 : 1;
      }
      out.push_back(std::move(w));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::vector<SignedPermutation> permutations(int n) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<SignedPermutation> out;
  do {
    SignedPermutation w = SignedPermutation::identity(n);
    w.sigma = perm;
    out.push_back(std::move(w));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

FormTable::FormTable(int n) : n_(n) {
  if (n < 1 || n > kMaxVars) fail(ErrorKind::UnsupportedN, "operator algebra supports N = 1..4");
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      forms_.push_back({FormKind::Minus, j, k});
      forms_.push_back({FormKind::Plus, j, k});
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < 4; ++i) forms_.push_back({FormKind::Shift, j, i});
  }
}

int FormTable::minus(int j, int k) const {
  for (int id = 0; id < size(); ++id) {
    const auto& f = forms_[static_cast<std::size_t>(id)];
    if (f.kind == FormKind::Minus && f.j == j && f.k == k) return id;
  }
  fail(ErrorKind::AssumptionViolated, "no such form");
}

int FormTable::plus(int j, int k) const {
  for (int id = 0; id < size(); ++id) {
    const auto& f = forms_[static_cast<std::size_t>(id)];
    if (f.kind == FormKind::Plus && f.j == j && f.k == k) return id;
  }
  fail(ErrorKind::AssumptionViolated, "no such form");
}

int FormTable::shift(int j, int i) const {
  for (int id = 0; id < size(); ++id) {
    const auto& f = forms_[static_cast<std::size_t>(id)];
    if (f.kind == FormKind::Shift && f.j == j && f.k == i) return id;
  }
  fail(ErrorKind::AssumptionViolated, "no such form");
}

int FormTable::coefficient(int id, int v) const {
  const auto& f = form(id);
  if (f.kind == FormKind::Shift) return f.j == v ? 1 : 0;
  if (f.j == v) return 1;
  if (f.k == v) return f.kind == FormKind::Minus ? -1 : 1;
  return 0;
}

std::pair<int, int> FormTable::transform(int id, const SignedPermutation& w) const {
  const auto& f = form(id);
  const int sj = w.sigma[static_cast<std::size_t>(f.j)];
  const int ej = w.signs[static_cast<std::size_t>(f.j)];
  if (f.kind == FormKind::Shift) return {shift(sj, f.k), ej};
  const int sk = w.sigma[static_cast<std::size_t>(f.k)];
  const int ek = w.signs[static_cast<std::size_t>(f.k)] * (f.kind == FormKind::Minus ? -1 : 1);
  // The form is ej x_sj + ek x_sk; normalise the lower index to coefficient +1.
  const int u = std::min(sj, sk);
  const int v = std::max(sj, sk);
  const int cu = sj < sk ? ej : ek;
  const int cv = sj < sk ? ek : ej;
  const int ratio = cu * cv;
  return {ratio > 0 ? plus(u, v) : minus(u, v), cu};
}

cplx FormTable::evaluate(int id, std::span<const cplx> x, const elliptic::EllipticParams& params) const {
  const auto& f = form(id);
  const cplx xj = x[static_cast<std::size_t>(f.j)];
  switch (f.kind) {
    case FormKind::Minus: return xj - x[static_cast<std::size_t>(f.k)];
    case FormKind::Plus: return xj + x[static_cast<std::size_t>(f.k)];
    default: return xj + params.half_period(f.k);
  }
}

std::string FormTable::name(int id) const {
  const auto& f = form(id);
  const std::string xj = "x" + std::to_string(f.j + 1);
  switch (f.kind) {
    case FormKind::Minus: return xj + "-x" + std::to_string(f.k + 1);
    case FormKind::Plus: return xj + "+x" + std::to_string(f.k + 1);
    default: return xj + "+w" + std::to_string(f.k);
  }
}

CoeffPoly CoeffPoly::constant(int n_forms, const Rational& c) {
  CoeffPoly p(n_forms);
  p.add(Key(static_cast<std::size_t>(1 + 2 * n_forms), 0), c);
  return p;
}

CoeffPoly CoeffPoly::generator(int n_forms, int form, bool prime) {
  CoeffPoly p(n_forms);
  Key k(static_cast<std::size_t>(1 + 2 * n_forms), 0);
  k[static_cast<std::size_t>(1 + 2 * form + (prime ? 1 : 0))] = 1;
  p.add(k, 1);
  return p;
}

void CoeffPoly::add(const Key& k, const Rational& c) {
  if (sgn(c) == 0) return;
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    terms_.emplace(k, c);
    return;
  }
  it->second += c;
  if (sgn(it->second) == 0) terms_.erase(it);
}

CoeffPoly& CoeffPoly::operator+=(const CoeffPoly& o) {
  if (n_forms_ == 0) n_forms_ = o.n_forms_;
  for (const auto& [k, c] : o.terms_) add(k, c);
  return *this;
}

CoeffPoly CoeffPoly::operator*(const CoeffPoly& o) const {
  CoeffPoly out(std::max(n_forms_, o.n_forms_));
  for (const auto& [ka, ca] : terms_) {
    for (const auto& [kb, cb] : o.terms_) {
      Key k = ka;
      for (std::size_t i = 0; i < k.size(); ++i) k[i] += kb[i];
      out.add(k, ca * cb);
    }
  }
  return out;
}

CoeffPoly CoeffPoly::scaled(const Rational& s) const {
  CoeffPoly out(n_forms_);
  for (const auto& [k, c] : terms_) out.add(k, c * s);
  return out;
}

CoeffPoly CoeffPoly::derivative(const FormTable& table, int v) const {
  CoeffPoly out(n_forms_);
  for (const auto& [k, c] : terms_) {
    for (int f = 0; f < n_forms_; ++f) {
      const auto ip = static_cast<std::size_t>(1 + 2 * f);
      const int p = k[ip];
      const int q = k[ip + 1];
      if (p == 0 && q == 0) continue;
      const int cf = table.coefficient(f, v);
      if (cf == 0) continue;
      if (p > 0) {
        Key nk = k;
        nk[ip] -= 1;
        nk[ip + 1] += 1;
        out.add(nk, c * cf * p);
      }
      if (q > 0) {
        Key nk = k;
        nk[ip] += 2;
        nk[ip + 1] -= 1;
        out.add(nk, c * cf * q * 6);
        Key gk = k;
        gk[ip + 1] -= 1;
        gk[0] += 1;
        out.add(gk, c * cf * q * Rational(-1, 2));
      }
    }
  }
  return out;
}

CoeffPoly CoeffPoly::transformed(const FormTable& table, const SignedPermutation& w) const {
  CoeffPoly out(n_forms_);
  for (const auto& [k, c] : terms_) {
    Key nk(k.size(), 0);
    nk[0] = k[0];
    int sign = 1;
    for (int f = 0; f < n_forms_; ++f) {
      const auto ip = static_cast<std::size_t>(1 + 2 * f);
      if (k[ip] == 0 && k[ip + 1] == 0) continue;
      const auto [g, s] = table.transform(f, w);
      const auto jp = static_cast<std::size_t>(1 + 2 * g);
      nk[jp] += k[ip];
      nk[jp + 1] += k[ip + 1];
      if (s < 0 && k[ip + 1] % 2 == 1) sign = -sign;
    }
    out.add(nk, sign > 0 ? c : Rational(-c));
  }
  return out;
}

DiffOperator::DiffOperator(int n) : n_(n), table_(n) {}

DiffOperator DiffOperator::scalar(int n, const Rational& c) {
  DiffOperator op(n);
  op.add_term(MultiIndex{}, CoeffPoly::constant(op.table_.size(), c));
  return op;
}

DiffOperator DiffOperator::multiplication(int n, const CoeffPoly& c) {
  DiffOperator op(n);
  op.add_term(MultiIndex{}, c);
  return op;
}

DiffOperator DiffOperator::derivative(int n, int j) {
  DiffOperator op(n);
  MultiIndex a{};
  a[static_cast<std::size_t>(j)] = 1;
  op.add_term(a, CoeffPoly::constant(op.table_.size(), 1));
  return op;
}

void DiffOperator::add_term(const MultiIndex& alpha, const CoeffPoly& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(alpha);
  if (it == terms_.end()) {
    terms_.emplace(alpha, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

DiffOperator& DiffOperator::operator+=(const DiffOperator& o) {
  if (o.n_ != n_) fail(ErrorKind::AssumptionViolated, "operators on different N");
  for (const auto& [a, c] : o.terms_) add_term(a, c);
  return *this;
}

DiffOperator DiffOperator::scaled(const Rational& s) const {
  DiffOperator out(n_);
  for (const auto& [a, c] : terms_) out.add_term(a, c.scaled(s));
  return out;
}

DiffOperator DiffOperator::compose(const DiffOperator& other) const {
  if (other.n_ != n_) fail(ErrorKind::AssumptionViolated, "operators on different N");
  DiffOperator out(n_);
  for (const auto& [beta, b] : other.terms_) {
    // Derivatives of b indexed by gamma, built lazily.
    std::map<MultiIndex, CoeffPoly> derivs;
    derivs[MultiIndex{}] = b;
    std::function<const CoeffPoly&(const MultiIndex&)> deriv_of = [&](const MultiIndex& gamma) -> const CoeffPoly& {
      auto it = derivs.find(gamma);
      if (it != derivs.end()) return it->second;
      MultiIndex prev = gamma;
      int v = 0;
      while (prev[static_cast<std::size_t>(v)] == 0) ++v;
      prev[static_cast<std::size_t>(v)] -= 1;
      CoeffPoly d = deriv_of(prev).derivative(table_, v);
      return derivs.emplace(gamma, std::move(d)).first->second;
    };
    for (const auto& [alpha, a] : terms_) {
      MultiIndex gamma{};
      while (true) {
        Rational weight = 1;
        MultiIndex rest{};
        for (int i = 0; i < kMaxVars; ++i) {
          const auto ui = static_cast<std::size_t>(i);
          weight *= static_cast<long>(binomial(alpha[ui], gamma[ui]));
          rest[ui] = alpha[ui] - gamma[ui] + beta[ui];
        }
        const CoeffPoly& db = deriv_of(gamma);
        if (!db.is_zero()) out.add_term(rest, (a * db).scaled(weight));
        // Next gamma <= alpha.
        int i = 0;
        while (i < kMaxVars) {
          const auto ui = static_cast<std::size_t>(i);
          if (gamma[ui] < alpha[ui]) {
            ++gamma[ui];
            break;
          }
          gamma[ui] = 0;
          ++i;
        }
        if (i == kMaxVars) break;
      }
    }
  }
  return out;
}

DiffOperator DiffOperator::transformed(const SignedPermutation& w) const {
  if (w.n() != n_) fail(ErrorKind::AssumptionViolated, "signed permutation on wrong N");
  DiffOperator out(n_);
  for (const auto& [alpha, c] : terms_) {
    MultiIndex beta{};
    int sign = 1;
    for (int j = 0; j < n_; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      beta[static_cast<std::size_t>(w.sigma[uj])] = alpha[uj];
      if (w.signs[uj] < 0 && alpha[uj] % 2 == 1) sign = -sign;
    }
    const CoeffPoly tc = c.transformed(table_, w);
    out.add_term(beta, sign > 0 ? tc : tc.scaled(-1));
  }
  return out;
}

std::size_t DiffOperator::term_count() const {
  std::size_t n = 0;
  for (const auto& [a, c] : terms_) n += c.terms().size();
  return n;
}

int DiffOperator::max_order() const {
  int m = 0;
  for (const auto& [a, c] : terms_) m = std::max(m, std::accumulate(a.begin(), a.end(), 0));
  return m;
}

int DiffOperator::max_order_per_variable() const {
  int m = 0;
  for (const auto& [a, c] : terms_) m = std::max(m, *std::max_element(a.begin(), a.end()));
  return m;
}

CoefficientEvaluator::CoefficientEvaluator(const FormTable& table, std::span<const cplx> x,
                                           const elliptic::EllipticParams& params)
    : g2_(params.g2()) {
  wp_.resize(static_cast<std::size_t>(table.size()));
  wpp_.resize(static_cast<std::size_t>(table.size()));
  for (int f = 0; f < table.size(); ++f) {
    const auto w = elliptic::weierstrass_p_all(table.evaluate(f, x, params), params);
    wp_[static_cast<std::size_t>(f)] = w.value;
    wpp_[static_cast<std::size_t>(f)] = w.first;
  }
}

cplx CoefficientEvaluator::operator()(const CoeffPoly& c) const {
  cplx sum = 0.0;
  for (const auto& [k, coef] : c.terms()) {
    cplx t = coef.get_d();
    if (k[0]) t *= std::pow(g2_, k[0]);
    for (std::size_t f = 0; f < wp_.size(); ++f) {
      const int p = k[1 + 2 * f];
      const int q = k[2 + 2 * f];
      for (int i = 0; i < p; ++i) t *= wp_[f];
      for (int i = 0; i < q; ++i) t *= wpp_[f];
    }
    sum += t;
  }
  return sum;
}

cplx apply_operator(const DiffOperator& op, const Jet& fjet, std::span<const cplx> x,
                    const elliptic::EllipticParams& params) {
  if (static_cast<int>(x.size()) != op.n()) fail(ErrorKind::AssumptionViolated, "point dimension mismatch");
  const CoefficientEvaluator eval(op.forms(), x, params);
  cplx sum = 0.0;
  for (const auto& [alpha, c] : op.terms()) sum += eval(c) * fjet.derivative(alpha);
  return sum;
}

cplx apply_operator(const DiffOperator& op, const JetFunction& f, std::span<const cplx> x,
                    const elliptic::EllipticParams& params) {
  const Jet fjet = jet_at(f, x, op.max_order_per_variable());
  return apply_operator(op, fjet, x, params);
}

DiffOperator hamiltonian_operator(int n, const Rational& pair, const std::array<Rational, 4>& ext) {
  DiffOperator h(n);
  const FormTable& t = h.forms();
  const int nf = t.size();
  for (int j = 0; j < n; ++j) {
    MultiIndex a{};
    a[static_cast<std::size_t>(j)] = 2;
    h.add_term(a, CoeffPoly::constant(nf, -1));
  }
  CoeffPoly pot(nf);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      pot += CoeffPoly::generator(nf, t.minus(j, k), false).scaled(2 * pair);
      pot += CoeffPoly::generator(nf, t.plus(j, k), false).scaled(2 * pair);
    }
    for (int i = 0; i < 4; ++i) pot += CoeffPoly::generator(nf, t.shift(j, i), false).scaled(ext[static_cast<std::size_t>(i)]);
  }
  h.add_term(MultiIndex{}, pot);
  return h;
}

}  // namespace qes::ops
