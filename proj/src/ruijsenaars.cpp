#include "qes/ruijsenaars.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "qes/conserved.hpp"
#include "qes/errors.hpp"
#include "qes/linalg.hpp"
#include "qes/operators.hpp"
#include "qes/parallel.hpp"

namespace qes::ruijsenaars {

using elliptic::EllipticParams;

namespace {

constexpr double kDenominatorTol = 1e-10;
const cplx kI{0.0, 1.0};

cplx checked_theta(int j, cplx x, const EllipticParams& params) {
  const cplx v = elliptic::theta(j, x, params);
  if (std::abs(v) < kDenominatorTol) {
    fail(ErrorKind::DenominatorNearZero, "theta denominator vanishes in Y1");
  }
  return v;
}

// theta_{r+1}, with theta_4 = theta_0.
int theta_index(int r) { return r == 3 ? 0 : r + 1; }

cplx to_c(const Rational& q) { return q.get_d(); }

}  // namespace

cplx RuijsenaarsParams::level_k() const {
  cplx s = 2.0 * static_cast<double>(N - 1) * mu;
  for (int r = 0; r < 4; ++r) s += nu[static_cast<std::size_t>(r)] + nubar[static_cast<std::size_t>(r)];
  return s / kappa;
}

int pi_permutation(int p, int r) {
  static constexpr int table[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  return table[p][r];
}

cplx ThetaBasis::one_variable_value(std::size_t j, cplx x, const EllipticParams& params) const {
  cplx v = 1.0;
  const auto& e = one_variable.at(j);
  for (int i = 0; i < 4; ++i) {
    const int m = e[static_cast<std::size_t>(i)];
    if (m == 0) continue;
    const cplx t = elliptic::theta(i, x, params);
    v *= std::pow(t * t, m);
  }
  return v;
}

cplx ThetaBasis::value(std::size_t alpha, std::span<const cplx> x, const EllipticParams& params) const {
  const std::size_t m = one_variable.size();
  std::vector<cplx> single(static_cast<std::size_t>(N) * m);
  for (int j = 0; j < N; ++j) {
    for (std::size_t s = 0; s < m; ++s) single[static_cast<std::size_t>(j) * m + s] = one_variable_value(s, x[static_cast<std::size_t>(j)], params);
  }
  cplx total = 0.0;
  for (const auto& e : msym_expand(labels.at(alpha), N)) {
    cplx prod = 1.0;
    for (int j = 0; j < N; ++j) prod *= single[static_cast<std::size_t>(j) * m + static_cast<std::size_t>(e[static_cast<std::size_t>(j)])];
    total += prod;
  }
  return total;
}

PointFunction ThetaBasis::member(std::size_t alpha, const EllipticParams& params) const {
  return [this, alpha, params](std::span<const cplx> x) { return value(alpha, x, params); };
}

ThetaBasis theta_basis(int n, int k, const EllipticParams& params, bool force_fallback, double rank_tol) {
  if (k < 0 || k % 2 != 0) fail(ErrorKind::AssumptionViolated, "theta level must be a non-negative even integer");
  if (n < 1 || n > kMaxVars) fail(ErrorKind::UnsupportedN, "theta basis needs 1 <= N <= 4");
  const int l = k / 2;
  ThetaBasis out;
  out.N = n;
  out.k = k;
  out.labels = partitions_in_box(n, l);

  std::mt19937_64 rng(0x5eedULL + static_cast<std::uint64_t>(k));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const cplx tau = params.tau();
  auto one_var_design = [&](const std::vector<std::array<int, 4>>& cands, int rows) {
    ThetaBasis probe;
    probe.one_variable = cands;
    Eigen::MatrixXcd m(rows, static_cast<Eigen::Index>(cands.size()));
    for (int r = 0; r < rows; ++r) {
      const cplx x = unit(rng) + unit(rng) * tau;
      for (std::size_t c = 0; c < cands.size(); ++c) m(r, static_cast<Eigen::Index>(c)) = probe.one_variable_value(c, x, params);
    }
    return m;
  };
  // Rows first: every member shares the quasi-periodic growth of a sample point.
  auto ratio = [](Eigen::MatrixXcd m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const double nr = m.row(r).norm();
      if (nr > 0.0) m.row(r) /= nr;
    }
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double nc = m.col(c).norm();
      if (nc > 0.0) m.col(c) /= nc;
    }
    const Eigen::VectorXd s = singular_values(m);
    return s.size() == 0 || s(0) == 0.0 ? 0.0 : s(s.size() - 1) / s(0);
  };

  std::vector<std::array<int, 4>> cands;
  for (int s = 0; s <= l; ++s) cands.push_back({0, 0, s, l - s});
  const int rows = 3 * (l + 1);
  if (force_fallback || ratio(one_var_design(cands, rows)) < rank_tol) {
    out.fallback = true;
    std::vector<std::array<int, 4>> all;
    for (int a = 0; a <= l; ++a)
      for (int b = 0; a + b <= l; ++b)
        for (int c = 0; a + b + c <= l; ++c) all.push_back({a, b, c, l - a - b - c});
    const Eigen::MatrixXcd m = one_var_design(all, std::max(rows, static_cast<int>(all.size())));
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(m);
    qr.setThreshold(rank_tol);
    const auto rank = qr.rank();
    if (rank < l + 1) fail(ErrorKind::RankDeficient, "theta monomials span rank " + std::to_string(rank));
    cands.clear();
    for (int i = 0; i <= l; ++i) cands.push_back(all[static_cast<std::size_t>(qr.colsPermutation().indices()(i))]);
  }
  out.one_variable = cands;

  const auto pts = conserved::collocation_points(n, 2 * out.dim() + 4, params, 0xbadc0deULL + static_cast<std::uint64_t>(k));
  Eigen::MatrixXcd design(static_cast<Eigen::Index>(pts.size()), static_cast<Eigen::Index>(out.dim()));
  for (std::size_t p = 0; p < pts.size(); ++p) {
    for (std::size_t a = 0; a < out.dim(); ++a) design(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(a)) = out.value(a, pts[p], params);
  }
  out.rank_certificate = ratio(design);
  if (out.rank_certificate < rank_tol) {
    fail(ErrorKind::RankDeficient, "theta basis rank certificate " + std::to_string(out.rank_certificate));
  }
  return out;
}

QuasiperiodicityResidual quasiperiodicity_check(const PointFunction& f, int k, std::span<const cplx> x,
                                                std::span<const int> n, const EllipticParams& params) {
  const cplx tau = params.tau();
  std::vector<cplx> xt(x.begin(), x.end());
  std::vector<cplx> xu(x.begin(), x.end());
  cplx xn = 0.0;
  double nn = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    xt[j] += static_cast<double>(n[j]) * tau;
    xu[j] += static_cast<double>(n[j]);
    xn += x[j] * static_cast<double>(n[j]);
    nn += static_cast<double>(n[j] * n[j]);
  }
  const cplx f0 = f(x);
  const cplx factor = std::exp(2.0 * std::numbers::pi * kI * static_cast<double>(k) * (xn + nn * tau / 2.0));
  const double scale = std::max(1.0, std::abs(f0));
  QuasiperiodicityResidual r;
  r.tau_shift = std::abs(f(xt) * factor - f0) / scale;
  r.unit_shift = std::abs(f(xu) - f0) / scale;
  return r;
}

Y1Coefficients y1_coefficients(const RuijsenaarsParams& rp, const EllipticParams& params, std::span<const cplx> x) {
  const int n = rp.N;
  if (static_cast<int>(x.size()) != n) fail(ErrorKind::AssumptionViolated, "point dimension differs from N");
  const cplx half = rp.kappa / 2.0;
  const cplx mu = rp.mu;
  Y1Coefficients c;
  c.forward.assign(static_cast<std::size_t>(n), 1.0);
  c.backward.assign(static_cast<std::size_t>(n), 1.0);
  for (int j = 0; j < n; ++j) {
    const cplx xj = x[static_cast<std::size_t>(j)];
    cplx fw = 1.0;
    cplx bw = 1.0;
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      const cplx xk = x[static_cast<std::size_t>(k)];
      const cplx dm = checked_theta(1, xj - xk, params);
      const cplx dp = checked_theta(1, xj + xk, params);
      fw *= elliptic::theta(1, xj - xk - mu, params) / dm * elliptic::theta(1, xj + xk - mu, params) / dp;
      bw *= elliptic::theta(1, xj + xk + mu, params) / dp * elliptic::theta(1, xj - xk + mu, params) / dm;
    }
    for (int r = 0; r < 4; ++r) {
      const int t = theta_index(r);
      const cplx nu = rp.nu[static_cast<std::size_t>(r)];
      const cplx nb = rp.nubar[static_cast<std::size_t>(r)];
      const cplx d0 = checked_theta(t, xj, params);
      fw *= elliptic::theta(t, xj - nu, params) / d0 * elliptic::theta(t, xj + half - nb, params) /
            checked_theta(t, xj + half, params);
      bw *= elliptic::theta(t, xj + nu, params) / d0 * elliptic::theta(t, xj - half + nb, params) /
            checked_theta(t, xj - half, params);
    }
    c.forward[static_cast<std::size_t>(j)] = fw;
    c.backward[static_cast<std::size_t>(j)] = bw;
  }

  const cplx scale = std::pow(std::numbers::pi / params.theta1_prime_zero(), 2) * 2.0 /
                     (checked_theta(1, mu, params) * checked_theta(1, rp.kappa + mu, params));
  cplx diag = 0.0;
  for (int p = 0; p < 4; ++p) {
    cplx constant = scale;
    for (int r = 0; r < 4; ++r) {
      const int t = theta_index(r);
      const int q = pi_permutation(p, r);
      constant *= elliptic::theta(t, half + rp.nu[static_cast<std::size_t>(q)], params) *
                  elliptic::theta(t, rp.nubar[static_cast<std::size_t>(q)], params);
    }
    const int t = theta_index(p);
    cplx prod = 1.0;
    for (int j = 0; j < n; ++j) {
      const cplx xj = x[static_cast<std::size_t>(j)];
      prod *= elliptic::theta(t, xj - half - mu, params) / checked_theta(t, xj - half, params) *
              elliptic::theta(t, xj + half + mu, params) / checked_theta(t, xj + half, params);
    }
    diag += constant * prod;
  }
  c.diagonal = diag;
  return c;
}

cplx y1_apply(const RuijsenaarsParams& rp, const EllipticParams& params, const PointFunction& f,
              std::span<const cplx> x) {
  const auto c = y1_coefficients(rp, params, x);
  cplx total = c.diagonal * f(x);
  std::vector<cplx> y(x.begin(), x.end());
  for (std::size_t j = 0; j < x.size(); ++j) {
    y[j] = x[j] + rp.kappa;
    total += c.forward[j] * f(y);
    y[j] = x[j] - rp.kappa;
    total += c.backward[j] * f(y);
    y[j] = x[j];
  }
  return total;
}

OperatorMatrix<cplx> verify_y1_invariance(const RuijsenaarsParams& rp, const EllipticParams& params,
                                          const ThetaBasis& basis, const std::vector<std::vector<cplx>>& points) {
  const std::size_t dim = basis.dim();
  if (points.size() < 2 * dim) fail(ErrorKind::IllConditioned, "need at least 2 dim collocation points");
  const auto rows = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXcd design(rows, static_cast<Eigen::Index>(dim));
  Eigen::MatrixXcd rhs(rows, static_cast<Eigen::Index>(dim));
  parallel_for(points.size(), [&](std::size_t p) {
    for (std::size_t a = 0; a < dim; ++a) {
      design(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(a)) = basis.value(a, points[p], params);
      rhs(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(a)) = y1_apply(rp, params, basis.member(a, params), points[p]);
    }
  });
  // Theta products grow quickly with Im x; equilibrate rows so every point counts.
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double w = design.row(r).norm();
    if (w > 0.0) {
      design.row(r) /= w;
      rhs.row(r) /= w;
    }
  }
  const auto fit = least_squares(design, rhs);
  auto m = from_eigen(fit.solution, basis.labels);
  m.closure_residual = fit.max_relative_residual;
  return m;
}

RuijsenaarsParams limit_parameters(int n, const Rational& a, const std::array<Rational, 4>& b, cplx kappa,
                                   Pairing pairing) {
  RuijsenaarsParams rp;
  rp.N = n;
  rp.kappa = kappa;
  rp.mu = -to_c(a) * kappa;
  // Printed: nu_1 <-> b0, nu_2 <-> b1, nu_3 <-> b2, nu_0 <-> b3.
  static constexpr int printed[4] = {3, 0, 1, 2};
  for (int r = 0; r < 4; ++r) {
    const int i = pairing == Pairing::Printed ? printed[r] : r;
    const cplx v = -kappa * to_c(b[static_cast<std::size_t>(i)]);
    rp.nu[static_cast<std::size_t>(r)] = v;
    rp.nubar[static_cast<std::size_t>(r)] = v;
  }
  return rp;
}

cplx theta_gauge(const Rational& a, const std::array<Rational, 4>& b, std::span<const cplx> x,
                 const EllipticParams& params) {
  const cplx ac = to_c(a);
  cplx v = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    for (std::size_t k = j + 1; k < x.size(); ++k) {
      v *= std::pow(elliptic::theta(1, x[j] - x[k], params) * elliptic::theta(1, x[j] + x[k], params), ac);
    }
    for (int r = 0; r < 4; ++r) {
      v *= std::pow(elliptic::theta(theta_index(r), x[j], params), 2.0 * to_c(b[static_cast<std::size_t>(r)]));
    }
  }
  return v;
}

namespace {

// Theta(x) / Theta(x + delta e_j) as a product of principal powers of factor
// ratios close to 1.
cplx theta_gauge_ratio(const Rational& a, const std::array<Rational, 4>& b, std::span<const cplx> x, std::size_t j,
                       cplx delta, const EllipticParams& params) {
  const cplx ac = to_c(a);
  const cplx xj = x[j];
  const cplx yj = xj + delta;
  cplx v = 1.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (k == j) continue;
    const cplx xk = x[k];
    const cplx r = elliptic::theta(1, xj - xk, params) / elliptic::theta(1, yj - xk, params) *
                   (elliptic::theta(1, xj + xk, params) / elliptic::theta(1, yj + xk, params));
    v *= std::pow(r, ac);
  }
  for (int r = 0; r < 4; ++r) {
    const int t = theta_index(r);
    v *= std::pow(elliptic::theta(t, xj, params) / elliptic::theta(t, yj, params), 2.0 * to_c(b[static_cast<std::size_t>(r)]));
  }
  return v;
}

// (-Theta Y1 Theta^{-1} f)(x).
cplx conjugated_y1(const RuijsenaarsParams& rp, const Rational& a, const std::array<Rational, 4>& b,
                   const EllipticParams& params, const JetFunction& f, std::span<const cplx> x) {
  const auto c = y1_coefficients(rp, params, x);
  cplx total = c.diagonal * value_at(f, x);
  std::vector<cplx> y(x.begin(), x.end());
  for (std::size_t j = 0; j < x.size(); ++j) {
    y[j] = x[j] + rp.kappa;
    total += c.forward[j] * theta_gauge_ratio(a, b, x, j, rp.kappa, params) * value_at(f, y);
    y[j] = x[j] - rp.kappa;
    total += c.backward[j] * theta_gauge_ratio(a, b, x, j, -rp.kappa, params) * value_at(f, y);
    y[j] = x[j];
  }
  return -total;
}

}  // namespace

LimitTable nonrelativistic_limit_check(int n, const Rational& a, const std::array<Rational, 4>& b,
                                       const EllipticParams& params, const JetFunction& f, std::span<const cplx> x,
                                       std::span<const cplx> xp, const std::vector<double>& kappas, Pairing pairing) {
  std::array<Rational, 4> ext;
  for (int i = 0; i < 4; ++i) {
    const Rational tb = 2 * b[static_cast<std::size_t>(i)];
    ext[static_cast<std::size_t>(i)] = tb * (tb - 1);
  }
  const auto h = ops::hamiltonian_operator(n, a * (a - 1), ext);
  const cplx hx = ops::apply_operator(h, f, x, params);
  const cplx hxp = ops::apply_operator(h, f, xp, params);
  const cplx fx = value_at(f, x);
  const cplx fxp = value_at(f, xp);
  if (std::abs(fxp) < kDenominatorTol) fail(ErrorKind::DenominatorNearZero, "test function vanishes at the probe");

  LimitTable table;
  for (double kappa : kappas) {
    const auto rp = limit_parameters(n, a, b, kappa, pairing);
    const double k2 = kappa * kappa;
    const cplx ax = conjugated_y1(rp, a, b, params, f, x) / k2 - hx;
    const cplx axp = conjugated_y1(rp, a, b, params, f, xp) / k2 - hxp;
    table.rows.push_back({kappa, std::abs(ax - axp * fx / fxp)});
  }
  table.strictly_decreasing = table.rows.size() >= 2;
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    const auto& p = table.rows[i - 1];
    const auto& q = table.rows[i];
    if (!(q.error < p.error)) table.strictly_decreasing = false;
    table.orders.push_back(std::log(p.error / q.error) / std::log(p.kappa / q.kappa));
  }
  if (!table.rows.empty() && table.rows.front().error > 0.0) {
    table.final_over_initial = table.rows.back().error / table.rows.front().error;
  }
  return table;
}

namespace {

struct Factor {
  // kind 0: theta_t(s . x), kind 1: P(x_j) - e_i, kind 2: P(x_j) - P(x_k)
  int kind;
  int t;
  int j;
  int k;
  int sign;  // for theta arguments x_j + sign x_k; k < 0 for a single variable
  cplx exponent;
};

cplx factor_value(const Factor& f, std::span<const cplx> x, const EllipticParams& params) {
  switch (f.kind) {
    case 0: {
      cplx arg = x[static_cast<std::size_t>(f.j)];
      if (f.k >= 0) arg += static_cast<double>(f.sign) * x[static_cast<std::size_t>(f.k)];
      return elliptic::theta(f.t, arg, params);
    }
    case 1:
      return elliptic::weierstrass_p(x[static_cast<std::size_t>(f.j)], params) - params.e(f.t);
    default:
      return elliptic::weierstrass_p(x[static_cast<std::size_t>(f.j)], params) -
             elliptic::weierstrass_p(x[static_cast<std::size_t>(f.k)], params);
  }
}

}  // namespace

cplx theta_over_phi(const inozemtsev::GaugeChoice& g, std::span<const cplx> x, const EllipticParams& params) {
  const int n = g.N;
  const cplx a = to_c(g.a);
  std::vector<Factor> factors;
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      factors.push_back({0, 1, j, k, -1, a});
      factors.push_back({0, 1, j, k, +1, a});
      factors.push_back({2, 0, j, k, 0, -a});
    }
    for (int r = 0; r < 4; ++r) {
      factors.push_back({0, theta_index(r), j, -1, 0, 2.0 * to_c(g.b[static_cast<std::size_t>(r)])});
    }
    for (int i = 1; i <= 3; ++i) factors.push_back({1, i, j, -1, 0, -to_c(g.b[static_cast<std::size_t>(i)])});
  }

  const cplx tau = params.tau();
  std::vector<cplx> base(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) base[static_cast<std::size_t>(j)] = 0.137 + 0.191 * j + (0.283 + 0.117 * j) * tau;

  std::vector<cplx> logs(factors.size());
  std::vector<cplx> prev(factors.size());
  for (std::size_t f = 0; f < factors.size(); ++f) {
    prev[f] = factor_value(factors[f], base, params);
    logs[f] = std::log(prev[f]);
  }
  auto point_at = [&](double t) {
    std::vector<cplx> y(base);
    for (std::size_t j = 0; j < y.size(); ++j) y[j] += t * (x[j] - base[j]);
    return y;
  };
  // Advance from t0 to t1, halving the step while any factor turns by more
  // than half a radian.
  std::function<void(double, double, int)> advance = [&](double t0, double t1, int depth) {
    const auto y = point_at(t1);
    std::vector<cplx> next(factors.size());
    bool fine = true;
    for (std::size_t f = 0; f < factors.size() && fine; ++f) {
      next[f] = factor_value(factors[f], y, params);
      if (std::abs(std::arg(next[f] / prev[f])) > 0.5) fine = false;
    }
    if (!fine) {
      if (depth > 40) fail(ErrorKind::BranchPointProximity, "continuation path passes through a zero");
      const double mid = 0.5 * (t0 + t1);
      advance(t0, mid, depth + 1);
      advance(mid, t1, depth + 1);
      return;
    }
    for (std::size_t f = 0; f < factors.size(); ++f) {
      logs[f] += std::log(next[f] / prev[f]);
      prev[f] = next[f];
    }
  };
  constexpr int kSteps = 64;
  for (int s = 0; s < kSteps; ++s) advance(static_cast<double>(s) / kSteps, static_cast<double>(s + 1) / kSteps, 0);
  cplx total = 0.0;
  for (std::size_t f = 0; f < factors.size(); ++f) total += factors[f].exponent * logs[f];
  return std::exp(total);
}

PhiIsomorphism phi_isomorphism(const inozemtsev::GaugeChoice& g, const EllipticParams& params,
                               const ThetaBasis& basis, const std::vector<std::vector<cplx>>& points) {
  const int d = g.degree();
  if (basis.k != 2 * d || basis.N != g.N) fail(ErrorKind::AssumptionViolated, "theta basis level must be twice the gauge degree");
  const auto vbasis = partitions_in_box(g.N, d);
  const std::size_t dim = vbasis.size();
  if (basis.dim() != dim) fail(ErrorKind::AssumptionViolated, "theta and polynomial spaces differ in dimension");
  if (points.size() < 2 * dim) fail(ErrorKind::IllConditioned, "need at least 2 dim collocation points");

  const auto rows = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXcd design(rows, static_cast<Eigen::Index>(dim));
  Eigen::MatrixXcd rhs(rows, static_cast<Eigen::Index>(dim));
  parallel_for(points.size(), [&](std::size_t p) {
    const auto& x = points[p];
    std::vector<cplx> z(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) z[j] = elliptic::weierstrass_p(x[j], params);
    const cplx rho = theta_over_phi(g, x, params);
    for (std::size_t m = 0; m < dim; ++m) {
      design(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(m)) = inozemtsev::monomial_at(vbasis[m], z);
      rhs(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(m)) = basis.value(m, x, params) * rho;
    }
  });
  const auto fit = least_squares(design, rhs);
  PhiIsomorphism out;
  out.matrix = from_eigen(fit.solution, vbasis);
  out.residual = fit.max_relative_residual;
  out.matrix.closure_residual = out.residual;
  const Eigen::VectorXd s = singular_values(fit.solution);
  out.sigma_ratio = s(0) > 0.0 ? s(s.size() - 1) / s(0) : 0.0;
  if (out.sigma_ratio < 1e-6) fail(ErrorKind::RankDeficient, "phi change of basis is numerically singular");
  return out;
}

}  // namespace qes::ruijsenaars
