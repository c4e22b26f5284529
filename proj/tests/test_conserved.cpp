#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "qes/conserved.hpp"
#include "qes/errors.hpp"
#include "qes/inozemtsev.hpp"
#include "qes/linalg.hpp"
#include "qes/operators.hpp"

using namespace qes;
using namespace qes::conserved;

namespace {

inozemtsev::CouplingSet couplings(int n, Rational l, std::array<Rational, 4> li) {
  inozemtsev::CouplingSet c;
  c.N = n;
  c.l = std::move(l);
  c.li = std::move(li);
  return c;
}

const std::array<Rational, 4> kLi{Rational(1, 5), Rational(2, 7), Rational(1, 2), Rational(73, 210)};
const std::array<Rational, 4> kLiTwo{Rational(1, 5), Rational(2, 7), Rational(1, 2), Rational(493, 210)};
const std::array<Rational, 4> kLiSingle{Rational(1, 5), Rational(2, 7), Rational(1, 2), Rational(71, 70)};

bool same(const ops::CoeffPoly& a, const ops::CoeffPoly& b) { return a.terms() == b.terms(); }

struct Fitted {
  Eigen::MatrixXcd h;
  std::vector<Eigen::MatrixXcd> p;
  std::vector<double> closure;
};

Fitted fit_all(const inozemtsev::CouplingSet& c, const elliptic::EllipticParams& params, std::uint64_t seed) {
  // Lowest degree above zero: a one-dimensional space makes the affine fit trivial.
  auto choices = inozemtsev::enumerate_gauge_choices(c);
  std::erase_if(choices, [](const auto& g) { return g.degree() == 0; });
  REQUIRE(!choices.empty());
  const auto g = *std::min_element(choices.begin(), choices.end(),
                                   [](const auto& x, const auto& y) { return x.degree() < y.degree(); });
  const auto hm = inozemtsev::hamiltonian_matrix<cplx>(g, inozemtsev::e_values(params));
  const auto points = collocation_points(c.N, 3 * hm.dim() + 8, params, seed);
  Fitted out;
  out.h = to_eigen(hm);
  for (int k = 1; k <= c.N; ++k) {
    const auto pm = conserved_matrix(build_conserved_operator(c.N, k, OshimaCouplings::from(c)), g, params, points);
    out.p.push_back(to_eigen(pm));
    out.closure.push_back(pm.closure_residual);
  }
  return out;
}

}  // namespace

TEST_CASE("signed permutations form the hyperoctahedral group") {
  for (int n = 1; n <= 3; ++n) {
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) all[static_cast<std::size_t>(j)] = j;
    const auto group = ops::signed_permutations(n, all);
    long expected = 1 << n;
    for (int j = 2; j <= n; ++j) expected *= j;
    CHECK(static_cast<long>(group.size()) == expected);
    long even = 0;
    for (const auto& w : group) even += w.epsilon() == 1 ? 1 : 0;
    CHECK(even * 2 == expected);
    const std::vector<cplx> x{cplx(0.1, 0.2), cplx(-0.3, 0.05), cplx(0.27, -0.11)};
    const std::span<const cplx> xs(x.data(), static_cast<std::size_t>(n));
    for (const auto& u : group) {
      for (const auto& w : group) {
        const auto composed = u.compose(w).apply(xs);
        const auto wx = w.apply(xs);
        const auto nested = u.apply(wx);
        for (int j = 0; j < n; ++j) CHECK(composed[static_cast<std::size_t>(j)] == nested[static_cast<std::size_t>(j)]);
        CHECK(u.compose(w).epsilon() == u.epsilon() * w.epsilon());
      }
    }
  }
  CHECK(ops::permutations(3).size() == 6);
}

TEST_CASE("set partitions") {
  const std::vector<std::size_t> bell{1, 1, 2, 5, 15};
  for (int n = 0; n <= 4; ++n) {
    Block b;
    for (int j = 0; j < n; ++j) b.push_back(j);
    CHECK(set_partitions(b).size() == bell[static_cast<std::size_t>(n)]);
  }
  CHECK(set_partitions({0, 1, 2}, 2).size() == 3);
  CHECK(set_partitions({0, 1, 2, 3}, 2).size() == 7);
}

TEST_CASE("open T functions in terms of S functions") {
  CHECK(same(t_open(2, {0}), s_function(2, {0})));
  const auto expected = [] {
    auto r = s_function(2, {0, 1});
    r += (s_function(2, {0}) * s_function(2, {1})).scaled(-1);
    return r;
  }();
  CHECK(same(t_open(2, {0, 1}), expected));
}

TEST_CASE("operator evaluation") {
  const auto params = elliptic::EllipticParams::from_tau({0.0, 1.3});
  inozemtsev::GaugeChoice g;
  g.N = 2;
  g.a = Rational(1, 3);
  g.b = {Rational(1, 4), Rational(-1, 6), Rational(1, 10), Rational(-1, 7)};
  const auto f = inozemtsev::gauged_basis_function(g, Partition(), params);
  const std::vector<cplx> x{cplx(0.21, 0.17), cplx(0.34, -0.23)};
  const cplx f0 = value_at(f, x);
  CHECK(std::abs(ops::apply_operator(ops::DiffOperator::scalar(2, 1), f, x, params) - f0) < 1e-14 * std::abs(f0));

  const double h = 1e-5;
  for (int j = 0; j < 2; ++j) {
    auto xp = x, xm = x;
    xp[static_cast<std::size_t>(j)] += h;
    xm[static_cast<std::size_t>(j)] -= h;
    const cplx fd = (value_at(f, xp) - value_at(f, xm)) / (2 * h);
    const cplx exact = ops::apply_operator(ops::DiffOperator::derivative(2, j), f, x, params);
    CHECK(std::abs(fd - exact) < 1e-6 * std::abs(exact));
  }
}

TEST_CASE("jet derivatives against nested finite differences") {
  const auto params = elliptic::EllipticParams::from_tau({0.3, 1.1});
  inozemtsev::GaugeChoice g;
  g.N = 2;
  g.a = Rational(2, 3);
  g.b = {Rational(1, 4), Rational(-1, 6), Rational(1, 10), Rational(-1, 7)};
  const auto f = inozemtsev::gauged_basis_function(g, Partition({1}), params);
  const std::vector<Exponents> orders{{1, 1, 0, 0}, {2, 0, 0, 0}, {2, 1, 0, 0}, {2, 2, 0, 0}, {0, 3, 0, 0}};
  auto fd = [&](const std::vector<cplx>& x, Exponents alpha, double h) {
    // Central difference, recursively in each variable.
    std::function<cplx(std::vector<cplx>, int)> rec = [&](std::vector<cplx> y, int v) -> cplx {
      if (v == 2) return value_at(f, y);
      const int m = alpha[static_cast<std::size_t>(v)];
      cplx s = 0.0;
      for (int i = 0; i <= m; ++i) {
        auto z = y;
        z[static_cast<std::size_t>(v)] += (m / 2.0 - i) * h;
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        s += sign * static_cast<double>(binomial(m, i)) * rec(z, v + 1);
      }
      return s / std::pow(h, m);
    };
    return rec(x, 0);
  };
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.1, 0.4);
  for (int probe = 0; probe < 20; ++probe) {
    const std::vector<cplx> x{cplx(u(rng), u(rng) * 0.8), cplx(u(rng) + 0.05, -u(rng) * 0.7)};
    const Exponents alpha = orders[static_cast<std::size_t>(probe) % orders.size()];
    ops::DiffOperator op(2);
    op.add_term(alpha, ops::CoeffPoly::constant(op.forms().size(), 1));
    const cplx exact = ops::apply_operator(op, f, x, params);
    const int total = alpha[0] + alpha[1];
    const double h = total <= 2 ? 1e-3 : 4e-3;
    // Richardson on the h^2 error term.
    const cplx approx = (4.0 * fd(x, alpha, h / 2) - fd(x, alpha, h)) / 3.0;
    CHECK(std::abs(approx - exact) < 1e-5 * std::max(1.0, std::abs(exact)));
  }
}

TEST_CASE("conserved operators are W(B_N)-invariant") {
  const auto params = elliptic::EllipticParams::from_tau({0.0, 1.3});
  for (int n : {1, 2}) {
    const auto c = couplings(n, Rational(1, 3), kLi);
    inozemtsev::GaugeChoice g;
    g.N = n;
    g.a = Rational(-1, 3);
    g.b = {Rational(-1, 10), Rational(3, 14), Rational(-1, 4), Rational(283, 420)};
    const auto f = inozemtsev::gauged_basis_function(g, Partition({1}), params);
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) all[static_cast<std::size_t>(j)] = j;
    const auto group = ops::signed_permutations(n, all);
    const std::vector<cplx> x{cplx(0.21, 0.17), cplx(0.34, -0.23)};
    const std::span<const cplx> xs(x.data(), static_cast<std::size_t>(n));
    // f is invariant up to a constant branch phase, so compare (P f) / f.
    const cplx fx = value_at(f, xs);
    for (int k = 1; k <= n; ++k) {
      const auto op = build_conserved_operator(n, k, OshimaCouplings::from(c));
      const cplx base = ops::apply_operator(op, f, xs, params) / fx;
      for (const auto& w : group) {
        const auto wx = w.apply(xs);
        const cplx moved_point = ops::apply_operator(op, f, wx, params) / value_at(f, wx);
        CHECK(std::abs(moved_point - base) < 1e-9 * std::max(1.0, std::abs(base)));
        const cplx moved_op = ops::apply_operator(op.transformed(w), f, xs, params) / fx;
        CHECK(std::abs(moved_op - base) < 1e-9 * std::max(1.0, std::abs(base)));
      }
    }
  }
}

TEST_CASE("first operator is a multiple of the Laplacian at top order") {
  const auto c = couplings(2, Rational(1, 3), kLi);
  const auto op = build_conserved_operator(2, 1, OshimaCouplings::from(c));
  CHECK(op.max_order() == 2);
  const auto& t = op.terms();
  const auto d11 = t.find(Exponents{2, 0, 0, 0});
  const auto d22 = t.find(Exponents{0, 2, 0, 0});
  REQUIRE(d11 != t.end());
  REQUIRE(d22 != t.end());
  CHECK(same(d11->second, d22->second));
  REQUIRE(d11->second.terms().size() == 1);
  CHECK(d11->second.terms().begin()->first == std::vector<int>(static_cast<std::size_t>(1 + 2 * op.forms().size()), 0));
  const auto mixed = t.find(Exponents{1, 1, 0, 0});
  CHECK((mixed == t.end() || mixed->second.is_zero()));
  CHECK(build_conserved_operator(2, 2, OshimaCouplings::from(c)).max_order() == 4);
}

TEST_CASE("unsupported particle numbers") {
  const auto c = couplings(4, 1, {0, 0, 0, 0});
  try {
    (void)build_conserved_operator(4, 1, OshimaCouplings::from(c));
    FAIL("expected UnsupportedN");
  } catch (const qes::Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedN);
  }
}

TEST_CASE("closure, commutators and the affine relation for two particles") {
  const auto params = elliptic::EllipticParams::from_tau({0.0, 1.3});
  for (const auto& li : {kLi, kLiTwo}) {
    const auto fitted = fit_all(couplings(2, Rational(1, 3), li), params, 3);
    for (double r : fitted.closure) CHECK(r < 1e-8);
    CHECK(commutator_relnorm(fitted.h, fitted.p[1]) < 1e-8);
    CHECK(commutator_relnorm(fitted.p[0], fitted.p[1]) < 1e-8);
    const auto fit = affine_fit(fitted.p[0], fitted.h);
    CHECK(fit.residual < 1e-8);
    // Normalised so that P1 = -H + const.
    CHECK(std::abs(fit.slope + 1.0) < 1e-8);
    CHECK(std::abs(fit.offset - 2.0 * Rational(Rational(1, 3) * Rational(4, 3)).get_d()) < 1e-7);
  }
}

TEST_CASE("one particle") {
  const auto params = elliptic::EllipticParams::from_tau({0.3, 1.1});
  const auto fitted = fit_all(couplings(1, 0, kLiSingle), params, 4);
  CHECK(fitted.closure[0] < 1e-8);
  CHECK(affine_fit(fitted.p[0], fitted.h).residual < 1e-8);
}

TEST_CASE("collocation is stable under a change of points") {
  const auto params = elliptic::EllipticParams::from_tau({0.0, 1.3});
  const auto c = couplings(2, Rational(1, 3), kLiTwo);
  const auto a = fit_all(c, params, 11);
  const auto b = fit_all(c, params, 12);
  for (std::size_t k = 0; k < a.p.size(); ++k) CHECK((a.p[k] - b.p[k]).norm() < 1e-7 * a.p[k].norm());
}

TEST_CASE("three particles, degree one") {
  const auto params = elliptic::EllipticParams::from_tau({0.0, 1.3});
  const auto c = couplings(3, Rational(1, 3), {Rational(1, 5), Rational(2, 7), Rational(1, 2), Rational(227, 210)});
  REQUIRE_FALSE(inozemtsev::enumerate_gauge_choices(c).empty());
  const auto fitted = fit_all(c, params, 5);
  for (double r : fitted.closure) CHECK(r < 1e-8);
  for (std::size_t k = 1; k < fitted.p.size(); ++k) CHECK(commutator_relnorm(fitted.h, fitted.p[k]) < 1e-8);
  CHECK(affine_fit(fitted.p[0], fitted.h).residual < 1e-8);
}
