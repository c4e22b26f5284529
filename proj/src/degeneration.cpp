#include "qes/degeneration.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "qes/errors.hpp"
#include "qes/linalg.hpp"
#include "qes/parallel.hpp"

namespace qes::degeneration {

using elliptic::EllipticParams;

namespace {

constexpr double kPi = std::numbers::pi;

double d(const Rational& q) { return q.get_d(); }

bool is_nonnegative_integer(const Rational& q) { return q.get_den() == 1 && sgn(q) >= 0; }

// Constant of the gauged operator: N (a^2/2 + 2a(alpha - beta)) - sum_j (alpha + beta + 2 g j)^2.
Rational gauge_constant(const DegenerateCoupling& dc) {
  const Rational alpha = dc.l0 + 1;
  const Rational beta = dc.l1 + 1;
  const Rational g = dc.l + 1;
  Rational c = dc.N * (dc.a_tilde * dc.a_tilde / 2 + 2 * dc.a_tilde * (alpha - beta));
  for (int j = 0; j < dc.N; ++j) {
    const Rational s = alpha + beta + 2 * g * j;
    c -= s * s;
  }
  return c;
}

int numerical_rank(const Eigen::MatrixXd& m, double rel_tol) {
  Eigen::MatrixXd scaled = m;
  for (Eigen::Index c = 0; c < scaled.cols(); ++c) {
    const double n = scaled.col(c).norm();
    if (n > 0.0) scaled.col(c) /= n;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled);
  const auto& s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rel_tol * s(0)) ++r;
  }
  return r;
}

}  // namespace

DegenerateCoupling DegenerateCoupling::from_constraints(int n, const Rational& l, const Rational& l0,
                                                        const Rational& l1, const Rational& a_tilde, int degree) {
  if (degree < 0) fail(ErrorKind::ConstraintViolated, "degree L must be non-negative");
  DegenerateCoupling dc;
  dc.N = n;
  dc.l = l;
  dc.l0 = l0;
  dc.l1 = l1;
  dc.a_tilde = a_tilde;
  dc.L = degree;
  dc.c1 = dc.c1_required();
  dc.c2 = dc.c2_required();
  return dc;
}

Rational DegenerateCoupling::c1_required() const {
  return 2 * a_tilde * (2 * L + l0 + l1 + 3 + 2 * (N - 1) * (l + 1));
}

Rational DegenerateCoupling::c2_required() const { return -a_tilde * a_tilde / 2; }

Rational limit_degree_value(int n, const Rational& l, const Rational& l0, const Rational& l1, const Rational& b_tilde) {
  return -(n - 1) * (l + 1) - (l0 + l1 + 2) / 2 + b_tilde;
}

int limit_degree(int n, const Rational& l, const Rational& l0, const Rational& l1, const Rational& b_tilde) {
  const Rational v = limit_degree_value(n, l, l0, l1, b_tilde);
  if (!is_nonnegative_integer(v)) fail(ErrorKind::ConstraintViolated, "L = " + to_string(v) + " is not a non-negative integer");
  return static_cast<int>(v.get_num().get_si());
}

LimitCouplings coupling_limit_map(const Rational& a_tilde, const Rational& b_tilde, const Rational& p) {
  if (sgn(p) == 0) fail(ErrorKind::ZeroNome, "nome must be nonzero");
  const Rational s = a_tilde / (8 * p);
  return {s + b_tilde, -s + b_tilde};
}

SymPoly<Rational> apply_degenerate_hamiltonian(const DegenerateCoupling& dc, const SymPoly<Rational>& f) {
  const Rational& a = dc.a_tilde;
  const Rational alpha = dc.l0 + 1;
  const Rational beta = dc.l1 + 1;
  const Rational g = dc.l + 1;
  const Rational c3 = 2 * a * (dc.l0 + dc.l1 + 3 + 2 * (dc.N - 1) * (dc.l + 1));

  SymPoly<Rational> out = apply_gauged_term(UniPoly<Rational>{0, -4, 4}, 2, f);
  out += apply_gauged_term(UniPoly<Rational>{-(2 + 4 * alpha), 4 - 8 * a + 4 * alpha + 4 * beta, 8 * a}, 1, f);
  if (dc.N >= 2) out -= apply_cross_term(UniPoly<Rational>{0, 1, -1}, f).scaled(8 * g);
  const Rational k1 = dc.c1 - c3;
  const Rational k2 = dc.c2 + a * a / 2;
  out += apply_gauged_term(UniPoly<Rational>{k1 + k2, -2 * k1 - 8 * k2, 8 * k2}, 0, f);
  out -= f.scaled(gauge_constant(dc));
  return out;
}

OperatorMatrix<Rational> degenerate_hamiltonian_matrix(const DegenerateCoupling& dc, bool strict) {
  if (strict && !dc.constraints_hold()) {
    fail(ErrorKind::ConstraintViolated, "c1, c2 do not satisfy the invariance relations");
  }
  const auto basis = partitions_in_box(dc.N, dc.L);
  auto m = OperatorMatrix<Rational>::zeros(basis);
  std::vector<double> outside(basis.size(), 0.0);
  parallel_for(basis.size(), [&](std::size_t col) {
    const auto img = apply_degenerate_hamiltonian(dc, SymPoly<Rational>::monomial(dc.N, basis[col]));
    for (const auto& [mu, c] : img.terms()) {
      if (mu.largest() > dc.L) {
        outside[col] += std::abs(c.get_d());
        continue;
      }
      const auto row = static_cast<std::size_t>(std::lower_bound(basis.begin(), basis.end(), mu) - basis.begin());
      m.at(row, col) = c;
    }
  });
  for (double o : outside) m.closure_residual += o;
  return m;
}

double log_phi_d(const DegenerateCoupling& dc, std::span<const double> x) {
  double v = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    v += -d(dc.a_tilde) / 2 * std::cos(2 * kPi * x[j]);
    v += d(dc.l0 + 1) * std::log(std::abs(std::sin(kPi * x[j])));
    v += d(dc.l1 + 1) * std::log(std::abs(std::cos(kPi * x[j])));
    for (std::size_t k = j + 1; k < x.size(); ++k) {
      v += d(dc.l + 1) * std::log(std::abs(std::sin(kPi * (x[j] - x[k])) * std::sin(kPi * (x[j] + x[k]))));
    }
  }
  return v;
}

inozemtsev::GaugeChoice limit_gauge(int n, const Rational& l, const Rational& l0, const Rational& l1,
                                    const LimitCouplings& lc) {
  inozemtsev::GaugeChoice g;
  g.N = n;
  g.a = l + 1;
  g.b = {(l0 + 1) / 2, (l1 + 1) / 2, -lc.l2 / 2, -lc.l3 / 2};
  return g;
}

double log_psi_d(int n, const Rational& l, const Rational& l1, const Rational& a_tilde, const Rational& b_tilde,
                 std::span<const double> x) {
  const double sin_exp = d(-2 * (n - 1) * (l + 1) - (l1 + 1) + 2 * b_tilde);
  double v = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    v += sin_exp * std::log(std::abs(std::sin(kPi * x[j])));
    v += d(l1 + 1) * std::log(std::abs(std::cos(kPi * x[j])));
    v += -d(a_tilde) / 2 * std::cos(2 * kPi * x[j]);
    for (std::size_t k = j + 1; k < x.size(); ++k) {
      v += d(l + 1) * std::log(std::abs(std::sin(kPi * (x[j] - x[k])) * std::sin(kPi * (x[j] + x[k]))));
    }
  }
  return v;
}

double log_phi_limit(const inozemtsev::GaugeChoice& g, const Rational& a_tilde, const Rational& b_tilde,
                     const Rational& p, std::span<const double> x, const EllipticParams& params) {
  const double e1 = params.e(1).real();
  const double e2 = params.e(2).real();
  const double e3 = params.e(3).real();
  std::vector<double> z(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) z[j] = elliptic::weierstrass_p(x[j], params).real();
  const double large = d(a_tilde / (16 * p));
  double v = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    for (std::size_t k = j + 1; k < x.size(); ++k) v += d(g.a) * std::log(std::abs(z[j] - z[k]));
    v += d(g.b[1]) * std::log(std::abs(z[j] - e1));
    // b2 log|z - e2| + b3 log|z - e3| with b2, b3 = -(+-a/(8p) + b)/2.
    v += -d(b_tilde) / 2 * (std::log(std::abs(z[j] - e2)) + std::log(std::abs(z[j] - e3)));
    v += -large * std::log1p((e3 - e2) / (z[j] - e3));
  }
  return v;
}

GaugeLimitTable gauge_limit_check(int n, const Rational& l, const Rational& l0, const Rational& l1,
                                  const Rational& a_tilde, const Rational& b_tilde, const std::vector<Rational>& ps,
                                  std::span<const double> x, std::span<const double> xp) {
  GaugeLimitTable t;
  t.rows.resize(ps.size());
  parallel_for(ps.size(), [&](std::size_t i) {
    const Rational& p = ps[i];
    const auto params = EllipticParams::from_nome(d(p));
    const auto lc = coupling_limit_map(a_tilde, b_tilde, p);
    const auto g = limit_gauge(n, l, l0, l1, lc);
    const double lx = log_phi_limit(g, a_tilde, b_tilde, p, x, params) - log_psi_d(n, l, l1, a_tilde, b_tilde, x);
    const double lxp = log_phi_limit(g, a_tilde, b_tilde, p, xp, params) - log_psi_d(n, l, l1, a_tilde, b_tilde, xp);
    const double r = std::exp(lx - lxp);
    t.rows[i] = {d(p), r, std::abs(r - 1.0)};
  });
  t.monotone = t.rows.size() >= 2;
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    if (!(t.rows[i].deviation < t.rows[i - 1].deviation)) t.monotone = false;
  }
  return t;
}

namespace {

std::vector<double> gaps(const std::vector<cplx>& eigenvalues) {
  std::vector<double> out;
  for (std::size_t i = 1; i < eigenvalues.size(); ++i) out.push_back((eigenvalues[i] - eigenvalues[0]).real());
  return out;
}

}  // namespace

SpectrumLimitTable limit_spectrum_check(int n, const Rational& l, const Rational& l0, const Rational& l1,
                                        const Rational& a_tilde, const Rational& b_tilde,
                                        const std::vector<Rational>& ps) {
  SpectrumLimitTable t;
  t.L = limit_degree(n, l, l0, l1, b_tilde);
  const auto dc = DegenerateCoupling::from_constraints(n, l, l0, l1, a_tilde, t.L);
  const auto dm = to_complex(degenerate_hamiltonian_matrix(dc, true));
  auto dspec = inozemtsev::spectrum(dm).eigenvalues;
  for (auto& v : dspec) v *= kPi * kPi;
  const auto dgaps = gaps(dspec);

  t.rows.resize(ps.size());
  parallel_for(ps.size(), [&](std::size_t i) {
    const Rational& p = ps[i];
    const auto params = EllipticParams::from_nome(d(p));
    const auto lc = coupling_limit_map(a_tilde, b_tilde, p);
    const auto g = limit_gauge(n, l, l0, l1, lc);
    if (g.degree() != t.L) fail(ErrorKind::ConstraintViolated, "limit gauge degree differs from L");
    auto em = inozemtsev::hamiltonian_matrix<cplx>(g, inozemtsev::e_values(params));
    const double shift = kPi * kPi / 3 * d(lc.l2 * (lc.l2 + 1) + lc.l3 * (lc.l3 + 1));
    for (std::size_t k = 0; k < em.dim(); ++k) em.at(k, k) += shift;
    const auto espec = inozemtsev::spectrum(em).eigenvalues;
    SpectrumLimitRow row;
    row.p = d(p);
    row.elliptic_gaps = gaps(espec);
    row.degenerate_gaps = dgaps;
    for (std::size_t k = 0; k < dgaps.size(); ++k) {
      row.discrepancy = std::max(row.discrepancy,
                                 std::abs(row.elliptic_gaps[k] - dgaps[k]) / std::max(1.0, std::abs(dgaps[k])));
    }
    t.rows[i] = std::move(row);
  });
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    const double next = t.rows[i].discrepancy;
    t.decade_factors.push_back(next > 0.0 ? t.rows[i - 1].discrepancy / next : INFINITY);
  }
  return t;
}

SpanComparison compare_limit_spaces(int n, const Rational& l, const Rational& l0, const Rational& l1,
                                    const Rational& a_tilde, const Rational& b_tilde, std::uint64_t seed) {
  const int degree = limit_degree(n, l, l0, l1, b_tilde);
  const auto basis = partitions_in_box(n, degree);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  const Eigen::Index rows = 3 * dim + 4;
  const auto dc = DegenerateCoupling::from_constraints(n, l, l0, l1, a_tilde, degree);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.06, 0.44);
  Eigen::MatrixXd m(rows, 2 * dim);
  for (Eigen::Index r = 0; r < rows; ++r) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto& xj : x) xj = unit(rng);
    std::vector<cplx> u(x.size());
    std::vector<cplx> t(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double s = std::sin(kPi * x[j]);
      u[j] = s * s;
      t[j] = kPi * kPi / (s * s) - kPi * kPi / 3;
    }
    const double phi = std::exp(log_phi_d(dc, x));
    const double psi = std::exp(log_psi_d(n, l, l1, a_tilde, b_tilde, x));
    for (Eigen::Index c = 0; c < dim; ++c) {
      m(r, c) = phi * inozemtsev::monomial_at(basis[static_cast<std::size_t>(c)], u).real();
      m(r, dim + c) = psi * inozemtsev::monomial_at(basis[static_cast<std::size_t>(c)], t).real();
    }
  }
  SpanComparison out;
  out.dim = static_cast<int>(dim);
  out.rank_degenerate = numerical_rank(m.leftCols(dim), 1e-9);
  out.rank_limit = numerical_rank(m.rightCols(dim), 1e-9);
  out.rank_combined = numerical_rank(m, 1e-9);
  return out;
}

}  // namespace qes::degeneration
