#include "qes/inozemtsev.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <set>

#include "qes/errors.hpp"
#include "qes/parallel.hpp"

namespace qes::inozemtsev {

namespace {

bool is_nonneg_integer(const Rational& q) { return q.get_den() == 1 && sgn(q) >= 0; }

}  // namespace

Rational CouplingSet::external_strength(int i) const {
  const Rational& x = li.at(static_cast<std::size_t>(i));
  return x * (x + 1);
}

Rational GaugeChoice::degree_value() const {
  Rational s = Rational(N - 1) * a;
  for (const auto& bi : b) s += bi;
  return -s;
}

bool GaugeChoice::admissible() const { return is_nonneg_integer(degree_value()); }

int GaugeChoice::degree() const {
  const Rational d = degree_value();
  if (!is_nonneg_integer(d)) fail(ErrorKind::InadmissibleGauge, "degree " + d.get_str() + " is not a non-negative integer");
  return static_cast<int>(d.get_num().get_si());
}

std::string GaugeChoice::str() const {
  std::string s = "a=" + a.get_str();
  for (int i = 0; i < 4; ++i) s += " b" + std::to_string(i) + "=" + b[static_cast<std::size_t>(i)].get_str();
  return s;
}

std::vector<GaugeChoice> all_gauge_choices(const CouplingSet& c) {
  if (c.N < 1) fail(ErrorKind::AssumptionViolated, "N must be positive");
  std::vector<GaugeChoice> out;
  const int a_options = c.N >= 2 ? 2 : 1;
  for (int ai = 0; ai < a_options; ++ai) {
    for (int mask = 0; mask < 16; ++mask) {
      GaugeChoice g;
      g.N = c.N;
      g.a = ai == 0 ? Rational(-c.l) : Rational(c.l + 1);
      for (int i = 0; i < 4; ++i) {
        const Rational& li = c.li[static_cast<std::size_t>(i)];
        g.b[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? Rational((li + 1) / 2) : Rational(-li / 2);
      }
      if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
    }
  }
  return out;
}

std::vector<GaugeChoice> enumerate_gauge_choices(const CouplingSet& c) {
  std::vector<GaugeChoice> out;
  for (const auto& g : all_gauge_choices(c)) {
    if (g.admissible()) out.push_back(g);
  }
  return out;
}

cplx gauge_factor_phi(const GaugeChoice& g, std::span<const cplx> z, const elliptic::EllipticParams& params) {
  const int n = static_cast<int>(z.size());
  const double tol = params.tol();
  auto factor = [&](cplx base, const Rational& expo) -> cplx {
    if (sgn(expo) == 0) return 1.0;
    const bool harmless = is_nonneg_integer(expo);
    if (!harmless && std::abs(base) < tol * std::max(1.0, std::abs(base))) {
      fail(ErrorKind::BranchPointProximity, "gauge factor evaluated at a branch point");
    }
    if (expo.get_den() == 1) return std::pow(base, static_cast<int>(expo.get_num().get_si()));
    return std::pow(base, expo.get_d());
  };
  cplx out = 1.0;
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) out *= factor(z[static_cast<std::size_t>(j)] - z[static_cast<std::size_t>(k)], g.a);
  }
  const auto& e = params.e_values();
  for (int j = 0; j < n; ++j) {
    for (int i = 1; i <= 3; ++i) {
      out *= factor(z[static_cast<std::size_t>(j)] - e[static_cast<std::size_t>(i - 1)], g.b[static_cast<std::size_t>(i)]);
    }
  }
  return out;
}

Jet gauge_factor_phi(const GaugeChoice& g, std::span<const Jet> z, const std::array<cplx, 3>& e) {
  const int n = static_cast<int>(z.size());
  Jet out = Jet::constant(z[0].n_vars(), z[0].order(), 1.0);
  auto factor = [&](const Jet& base, const Rational& expo) {
    if (sgn(expo) == 0) return;
    if (expo.get_den() == 1 && sgn(expo) > 0) {
      for (long i = 0; i < expo.get_num().get_si(); ++i) out *= base;
      return;
    }
    out *= pow(base, cplx(expo.get_d()));
  };
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) factor(z[static_cast<std::size_t>(j)] - z[static_cast<std::size_t>(k)], g.a);
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 1; i <= 3; ++i) factor(z[static_cast<std::size_t>(j)] - e[static_cast<std::size_t>(i - 1)], g.b[static_cast<std::size_t>(i)]);
  }
  return out;
}

cplx monomial_at(const Partition& lambda, std::span<const cplx> z) {
  const int n = static_cast<int>(z.size());
  cplx s = 0.0;
  for (const auto& e : msym_expand(lambda, n)) {
    cplx t = 1.0;
    for (int j = 0; j < n; ++j) t *= std::pow(z[static_cast<std::size_t>(j)], e[static_cast<std::size_t>(j)]);
    s += t;
  }
  return s;
}

JetFunction gauged_basis_function(const GaugeChoice& g, const Partition& lambda, const elliptic::EllipticParams& params) {
  const auto e = e_values(params);
  return [g, lambda, params, e](std::span<const Jet> x) {
    const int n = static_cast<int>(x.size());
    std::vector<Jet> z;
    z.reserve(x.size());
    for (const auto& xj : x) z.push_back(weierstrass_p(xj, params));
    Jet m = Jet::constant(x[0].n_vars(), x[0].order(), 0.0);
    for (const auto& ex : msym_expand(lambda, n)) {
      Jet t = Jet::constant(x[0].n_vars(), x[0].order(), 1.0);
      for (int j = 0; j < n; ++j) {
        for (int p = 0; p < ex[static_cast<std::size_t>(j)]; ++p) t *= z[static_cast<std::size_t>(j)];
      }
      m += t;
    }
    return gauge_factor_phi(g, z, e) * m;
  };
}

std::array<cplx, 3> e_values(const elliptic::EllipticParams& params) { return params.e_values(); }

std::array<EPoly, 3> symbolic_e() { return {EPoly::e(1), EPoly::e(2), EPoly::e(3)}; }

template <class R>
SymPoly<R> apply_hamiltonian(const GaugeChoice& g, const std::array<R, 3>& e, const SymPoly<R>& f) {
  using T = RingTraits<R>;
  const int n = f.n_vars();
  if (n != g.N) fail(ErrorKind::AssumptionViolated, "polynomial and gauge disagree on N");
  const UniPoly<R> cubic = weierstrass_cubic<R>(e);

  // First-order coefficient: sum_i (2 b_i + 1/2) * 4 prod_{i' != i} (z - e_i').
  UniPoly<R> first(3, T::zero());
  for (int i = 0; i < 3; ++i) {
    const R w = T::from_rational(2 * g.b[static_cast<std::size_t>(i + 1)] + Rational(1, 2));
    const R& u = e[static_cast<std::size_t>((i + 1) % 3)];
    const R& v = e[static_cast<std::size_t>((i + 2) % 3)];
    const R four = T::from_rational(4);
    first[2] = first[2] + w * four;
    first[1] = first[1] - w * four * (u + v);
    first[0] = first[0] + w * four * u * v;
  }

  const Rational nm1 = n - 1;
  const Rational bsum = g.b[1] + g.b[2] + g.b[3];
  const Rational k1 = -4 * (nm1 * g.a - g.b[0] + bsum + Rational(1, 2)) * (nm1 * g.a + g.b[0] + bsum);
  const Rational& b1 = g.b[1];
  const Rational& b2 = g.b[2];
  const Rational& b3 = g.b[3];
  const R k0 = T::from_rational(4 * Rational(n)) *
                   (T::from_rational((b1 + b2) * (b1 + b2)) * e[2] + T::from_rational((b1 + b3) * (b1 + b3)) * e[1] +
                    T::from_rational((b2 + b3) * (b2 + b3)) * e[0]) -
               T::from_rational(4 * Rational(n) * nm1 * g.a) *
                   (T::from_rational(b1) * e[0] + T::from_rational(b2) * e[1] + T::from_rational(b3) * e[2]);

  SymPoly<R> out = apply_gauged_term(cubic, 2, f).scaled(T::from_rational(-1));
  if (n >= 2 && sgn(g.a) != 0) out -= apply_cross_term(cubic, f).scaled(T::from_rational(2 * g.a));
  out -= apply_gauged_term(first, 1, f);
  // K1 * (sum_j z_j) f, written as sum_j z_j * (d/dz_j)^0.
  out += apply_gauged_term(UniPoly<R>{T::zero(), T::from_rational(k1)}, 0, f);
  out += f.scaled(k0);
  return out;
}

template <class R>
OperatorMatrix<R> hamiltonian_matrix(const GaugeChoice& g, const std::array<R, 3>& e) {
  const int d = g.degree();
  auto m = OperatorMatrix<R>::zeros(partitions_in_box(g.N, d));
  std::vector<double> outside(m.dim(), 0.0);
  parallel_for(m.dim(), [&](std::size_t col) {
    const auto image = apply_hamiltonian(g, e, SymPoly<R>::monomial(g.N, m.basis[col]));
    for (const auto& [mu, c] : image.terms()) {
      if (mu.largest() > d) {
        outside[col] += RingTraits<R>::magnitude(c);
        continue;
      }
      const auto row = static_cast<std::size_t>(std::lower_bound(m.basis.begin(), m.basis.end(), mu) - m.basis.begin());
      m.at(row, col) = c;
    }
  });
  for (double v : outside) m.closure_residual = std::max(m.closure_residual, v);
  return m;
}

template SymPoly<Rational> apply_hamiltonian(const GaugeChoice&, const std::array<Rational, 3>&, const SymPoly<Rational>&);
template SymPoly<EPoly> apply_hamiltonian(const GaugeChoice&, const std::array<EPoly, 3>&, const SymPoly<EPoly>&);
template SymPoly<cplx> apply_hamiltonian(const GaugeChoice&, const std::array<cplx, 3>&, const SymPoly<cplx>&);
template OperatorMatrix<Rational> hamiltonian_matrix(const GaugeChoice&, const std::array<Rational, 3>&);
template OperatorMatrix<EPoly> hamiltonian_matrix(const GaugeChoice&, const std::array<EPoly, 3>&);
template OperatorMatrix<cplx> hamiltonian_matrix(const GaugeChoice&, const std::array<cplx, 3>&);

SpectrumResult spectrum(const OperatorMatrix<cplx>& m) {
  SpectrumResult out;
  if (m.dim() == 0) return out;
  const Eigen::MatrixXcd a = to_eigen(m);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver;
  solver.setMaxIterations(60 * static_cast<Eigen::Index>(std::max<std::size_t>(m.dim(), 1)));
  solver.compute(a, true);
  if (solver.info() != Eigen::Success) fail(ErrorKind::NoConvergence, "eigensolver did not converge");
  const auto& w = solver.eigenvalues();
  const auto& v = solver.eigenvectors();
  const double norm = a.norm();
  out.backward_error = norm > 0.0 ? (a * v - v * w.asDiagonal()).norm() / norm : 0.0;
  out.eigenvalues.assign(w.data(), w.data() + w.size());
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), [](cplx x, cplx y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  for (const cplx& z : out.eigenvalues) {
    if (!out.clusters.empty()) {
      auto& last = out.clusters.back();
      if (std::abs(z - last.value) <= 1e-8 * std::max(1.0, std::abs(z))) {
        ++last.multiplicity;
        continue;
      }
    }
    out.clusters.push_back({z, 1});
  }
  return out;
}

L2Result l2_membership(const GaugeChoice& g, const CouplingSet& c) {
  if (sgn(c.l) < 0 || sgn(c.li[0]) < 0 || sgn(c.li[1]) < 0) {
    fail(ErrorKind::AssumptionViolated, "l, l0 and l1 must be non-negative");
  }
  if (g.N >= 2 && g.a != c.l + 1) return {false, "a"};
  if (g.b[0] != (c.li[0] + 1) / 2) return {false, "b0"};
  if (g.b[1] != (c.li[1] + 1) / 2) return {false, "b1"};
  if (!g.admissible()) return {false, "d"};
  return {true, ""};
}

DimensionReport dimension_report(const CouplingSet& c) {
  auto check_int = [](const Rational& q) {
    if (!is_nonneg_integer(q)) fail(ErrorKind::AssumptionViolated, "couplings must be non-negative integers");
    return q.get_num().get_si();
  };
  const long l = check_int(c.l);
  std::array<long, 4> li{};
  for (int i = 0; i < 4; ++i) li[static_cast<std::size_t>(i)] = check_int(c.li[static_cast<std::size_t>(i)]);

  DimensionReport r;
  r.choices = enumerate_gauge_choices(c);
  for (const auto& g : r.choices) r.total += static_cast<long long>(binomial(c.N + g.degree(), c.N));

  if (c.N == 2) {
    long long cf = (2 * l + 1) * (2 * l + 1);
    for (long x : li) cf += x * (x + 1);
    r.closed_form = cf;
  } else if (c.N == 1) {
    const long lt = li[0] + li[1] + li[2] + li[3];
    const long k0 = *std::max_element(li.begin(), li.end());
    const long k3 = *std::min_element(li.begin(), li.end());
    long long cf;
    if (lt % 2 == 0) {
      cf = 2 * (k0 + k3) >= lt ? 2 * k0 + 1 : lt - 2 * k3 + 1;
    } else {
      cf = 2 * k0 >= lt + 1 ? 2 * k0 + 1 : lt + 2;
    }
    r.closed_form = cf;
  }
  return r;
}

}  // namespace qes::inozemtsev
