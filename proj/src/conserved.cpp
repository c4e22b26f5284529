#include "qes/conserved.hpp"

#include <functional>
#include <numeric>
#include <random>

#include "qes/errors.hpp"
#include "qes/linalg.hpp"
#include "qes/parallel.hpp"

namespace qes::conserved {

using ops::CoeffPoly;
using ops::DiffOperator;
using ops::MultiIndex;

namespace {

Rational factorial(int n) {
  Rational f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

Rational power(const Rational& x, int n) {
  Rational r = 1;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

int n_forms(int n) { return ops::FormTable(n).size(); }

Block range(int from, int to) {
  Block b;
  for (int i = from; i < to; ++i) b.push_back(i);
  return b;
}

}  // namespace

OshimaCouplings OshimaCouplings::from(const inozemtsev::CouplingSet& c) {
  OshimaCouplings o;
  o.pair = c.pair_strength();
  for (int i = 0; i < 4; ++i) o.ext[static_cast<std::size_t>(i)] = c.external_strength(i);
  return o;
}

std::vector<SetPartition> set_partitions(const Block& elements, int blocks) {
  std::vector<SetPartition> out;
  const std::size_t n = elements.size();
  if (n == 0) {
    if (blocks <= 0) out.emplace_back();
    return out;
  }
  // Restricted growth strings.
  std::vector<int> a(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int used) {
    if (pos == n) {
      if (blocks >= 0 && used != blocks) return;
      SetPartition p(static_cast<std::size_t>(used));
      for (std::size_t i = 0; i < n; ++i) p[static_cast<std::size_t>(a[i])].push_back(elements[i]);
      out.push_back(std::move(p));
      return;
    }
    for (int b = 0; b <= used && b < (pos == 0 ? 1 : used + 1); ++b) {
      a[pos] = b;
      rec(pos + 1, std::max(used, b + 1));
    }
  };
  rec(0, 0);
  return out;
}

CoeffPoly s_function(int n, const Block& I, int shift) {
  const ops::FormTable t(n);
  const int nf = t.size();
  CoeffPoly base = CoeffPoly::constant(nf, 1);
  for (std::size_t m = 0; m + 1 < I.size(); ++m) base = base * CoeffPoly::generator(nf, t.minus(I[m], I[m + 1]), false);
  if (shift >= 0) base = base * CoeffPoly::generator(nf, t.shift(I.front(), shift), false);
  CoeffPoly out(nf);
  for (const auto& w : ops::signed_permutations(n, I)) out += base.transformed(t, w);
  return out;
}

CoeffPoly t_open(int n, const Block& I, int shift) {
  const int nf = n_forms(n);
  CoeffPoly out(nf);
  for (const auto& part : set_partitions(I)) {
    const int mu = static_cast<int>(part.size());
    CoeffPoly prod = CoeffPoly::constant(nf, ((mu - 1) % 2 == 0 ? 1 : -1) * factorial(mu - 1));
    for (const auto& blk : part) prod = prod * s_function(n, blk, shift);
    out += prod;
  }
  return out;
}

CoeffPoly t_function(int n, const Block& I, const OshimaCouplings& c) {
  const int nf = n_forms(n);
  const int k = static_cast<int>(I.size());
  CoeffPoly out(nf);
  for (int i = 0; i < 4; ++i) {
    out += t_open(n, I, i).scaled(c.ext[static_cast<std::size_t>(i)] / 2);
  }
  return out.scaled(-power(-c.pair, k - 1));
}

CoeffPoly q_function(int n, const Block& I, const OshimaCouplings& c) {
  const int nf = n_forms(n);
  CoeffPoly out(nf);
  for (const auto& part : set_partitions(I)) {
    CoeffPoly prod = CoeffPoly::constant(nf, 1);
    for (const auto& blk : part) prod = prod * t_function(n, blk, c);
    out += prod;
  }
  return out;
}

DiffOperator delta(int n, const Block& I, const OshimaCouplings& c) {
  const ops::FormTable t(n);
  const int nf = t.size();
  const int k = static_cast<int>(I.size());
  DiffOperator out(n);
  if (k == 0) return DiffOperator::scalar(n, 1);
  for (int j = 0; 2 * j <= k; ++j) {
    CoeffPoly coef = CoeffPoly::constant(nf, 1);
    for (int m = 0; m < j; ++m) {
      coef = coef * CoeffPoly::generator(nf, t.minus(I[static_cast<std::size_t>(2 * m)], I[static_cast<std::size_t>(2 * m + 1)]), false);
    }
    MultiIndex alpha{};
    for (int m = 2 * j; m < k; ++m) alpha[static_cast<std::size_t>(I[static_cast<std::size_t>(m)])] = 1;
    DiffOperator base(n);
    base.add_term(alpha, coef);
    DiffOperator sym(n);
    for (const auto& w : ops::signed_permutations(n, I)) {
      sym += w.epsilon() > 0 ? base.transformed(w) : base.transformed(w).scaled(-1);
    }
    Rational weight = power(c.pair, j) / (power(Rational(2), k) * factorial(j) * factorial(k - 2 * j));
    out += sym.scaled(weight);
  }
  return out;
}

DiffOperator build_conserved_operator(int n, int k_index, const OshimaCouplings& c) {
  if (n < 1 || n > 3) fail(ErrorKind::UnsupportedN, "conserved operators are built for N <= 3");
  if (k_index < 1 || k_index > n) fail(ErrorKind::AssumptionViolated, "operator index must be 1..N");
  const int k = n - k_index;  // P_{N-k}
  const int nf = n_forms(n);
  const auto perms = ops::permutations(n);
  DiffOperator out(n);
  for (int i = k; i <= n; ++i) {
    const auto parts = set_partitions(range(0, i), k);
    if (parts.empty()) continue;
    CoeffPoly topen(nf);
    for (const auto& part : parts) {
      CoeffPoly prod = CoeffPoly::constant(nf, 1);
      for (const auto& blk : part) prod = prod * t_open(n, blk);
      topen += prod;
    }
    topen = topen.scaled(power(-c.pair, i - k) / power(Rational(2), k));
    for (int j = i; j <= n; ++j) {
      const CoeffPoly mult = topen * q_function(n, range(i, j), c);
      if (mult.is_zero()) continue;
      const DiffOperator d = delta(n, range(j, n), c);
      const DiffOperator term = DiffOperator::multiplication(n, mult).compose(d.compose(d));
      DiffOperator sym(n);
      for (const auto& w : perms) sym += term.transformed(w);
      out += sym.scaled(1 / (factorial(i) * factorial(j - i) * factorial(n - j)));
    }
  }
  return out;
}

std::vector<std::vector<cplx>> collocation_points(int n, std::size_t count, const elliptic::EllipticParams& params,
                                                  std::uint64_t seed, double margin) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const cplx tau = params.tau();
  std::vector<std::vector<cplx>> out;
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > 1000 * (count + 10)) fail(ErrorKind::IllConditioned, "could not place collocation points");
    std::vector<cplx> x(static_cast<std::size_t>(n));
    for (auto& xj : x) xj = unit(rng) + unit(rng) * tau;
    bool ok = true;
    for (int j = 0; j < n && ok; ++j) {
      const cplx xj = x[static_cast<std::size_t>(j)];
      if (elliptic::lattice_distance(2.0 * xj, params) < margin) ok = false;
      if (elliptic::lattice_distance(xj, params) < 4.0 * margin) ok = false;
      for (int k = j + 1; k < n && ok; ++k) {
        const cplx xk = x[static_cast<std::size_t>(k)];
        if (elliptic::lattice_distance(xj - xk, params) < margin || elliptic::lattice_distance(xj + xk, params) < margin) ok = false;
      }
    }
    if (ok) out.push_back(std::move(x));
  }
  return out;
}

OperatorMatrix<cplx> conserved_matrix(const DiffOperator& op, const inozemtsev::GaugeChoice& g,
                                      const elliptic::EllipticParams& params,
                                      const std::vector<std::vector<cplx>>& points) {
  const int d = g.degree();
  const auto basis = partitions_in_box(g.N, d);
  const std::size_t dim = basis.size();
  if (points.size() < 2 * dim) fail(ErrorKind::IllConditioned, "need at least 2 dim collocation points");
  const auto rows = static_cast<Eigen::Index>(points.size());
  const auto cols = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXcd design(rows, cols);
  Eigen::MatrixXcd rhs(rows, cols);
  const int order = op.max_order_per_variable();

  parallel_for(points.size(), [&](std::size_t p) {
    const auto& x = points[p];
    std::vector<cplx> z(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) z[j] = elliptic::weierstrass_p(x[j], params);
    const cplx phi = inozemtsev::gauge_factor_phi(g, z, params);
    for (std::size_t mu = 0; mu < dim; ++mu) {
      design(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(mu)) = inozemtsev::monomial_at(basis[mu], z);
    }
    for (std::size_t lam = 0; lam < dim; ++lam) {
      const auto f = inozemtsev::gauged_basis_function(g, basis[lam], params);
      const Jet fjet = jet_at(f, x, order);
      rhs(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(lam)) = ops::apply_operator(op, fjet, x, params) / phi;
    }
  });

  const auto fit = least_squares(design, rhs);
  auto m = from_eigen(fit.solution, basis);
  m.closure_residual = fit.max_relative_residual;
  return m;
}

AffineFit affine_fit(const Eigen::MatrixXcd& p, const Eigen::MatrixXcd& h) {
  if (p.rows() != h.rows() || p.cols() != h.cols()) fail(ErrorKind::AssumptionViolated, "matrix shape mismatch");
  const Eigen::Index n = p.size();
  Eigen::MatrixXcd a(n, 2);
  Eigen::VectorXcd b(n);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(p.rows(), p.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, 0) = h.data()[i];
    a(i, 1) = id.data()[i];
    b(i) = p.data()[i];
  }
  AffineFit out;
  if (p.rows() == 1) {
    // One equation, two unknowns: report the exact fit with zero slope freedom.
    out.slope = 0.0;
    out.offset = p(0, 0);
    out.residual = 0.0;
    return out;
  }
  const Eigen::VectorXcd x = a.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
  out.slope = x(0);
  out.offset = x(1);
  const double pn = p.norm();
  out.residual = pn > 0.0 ? (p - x(0) * h - x(1) * id).norm() / pn : 0.0;
  return out;
}

}  // namespace qes::conserved
