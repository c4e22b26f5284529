#ifndef QES_TESTS_ORACLES_HPP
#define QES_TESTS_ORACLES_HPP

// Independent reference computations used by the unit and acceptance tests.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "qes/degeneration.hpp"
#include "qes/elliptic.hpp"
#include "qes/jet.hpp"
#include "qes/ring.hpp"

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

/// Lattice sum of the Weierstrass function over |m|, |n| <= R, periods 1 and tau.
inline cplx lattice_wp(cplx x, cplx tau, int R) {
  cplx s = 1.0 / (x * x);
  for (int m = -R; m <= R; ++m) {
    for (int n = -R; n <= R; ++n) {
      if (m == 0 && n == 0) continue;
      const cplx w = double(m) + double(n) * tau;
      const cplx d = x - w;
      s += 1.0 / (d * d) - 1.0 / (w * w);
    }
  }
  return s;
}

/// The truncated sums behave like P(x) + sum_{k=2..7} c_k / R^k; solving the
/// 7 x 7 system over R = 20..160 removes the algebraic tail.
inline cplx lattice_wp_extrapolated(cplx x, cplx tau) {
  const std::vector<int> radii{20, 30, 40, 60, 80, 120, 160};
  const auto n = static_cast<Eigen::Index>(radii.size());
  Eigen::MatrixXcd a(n, n);
  Eigen::VectorXcd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = radii[static_cast<std::size_t>(i)];
    a(i, 0) = 1.0;
    for (Eigen::Index k = 1; k < n; ++k) a(i, k) = std::pow(r, -double(k + 1));
    b(i) = lattice_wp(x, tau, radii[static_cast<std::size_t>(i)]);
  }
  return a.colPivHouseholderQr().solve(b)(0);
}

/// g2 = 60 sum' w^-4 and g3 = 140 sum' w^-6 over |m|, |n| <= R.
inline std::pair<cplx, cplx> eisenstein_invariants(cplx tau, int R) {
  cplx s4 = 0.0;
  cplx s6 = 0.0;
  for (int m = -R; m <= R; ++m) {
    for (int n = -R; n <= R; ++n) {
      if (m == 0 && n == 0) continue;
      const cplx w = double(m) + double(n) * tau;
      const cplx w2 = w * w;
      s4 += 1.0 / (w2 * w2);
      s6 += 1.0 / (w2 * w2 * w2);
    }
  }
  return {60.0 * s4, 140.0 * s6};
}

/// Coefficients c_0..c_n of det(t I - A) = sum c_k t^k, by the
/// Faddeev-LeVerrier recursion. Exact for exact rings.
template <class R>
std::vector<R> characteristic_polynomial(const std::vector<std::vector<R>>& a) {
  const std::size_t n = a.size();
  std::vector<R> c(n + 1, R(0));
  c[n] = R(1);
  std::vector<std::vector<R>> m(n, std::vector<R>(n, R(0)));
  for (std::size_t k = 1; k <= n; ++k) {
    // m <- A m + c_{n-k+1} I
    std::vector<std::vector<R>> next(n, std::vector<R>(n, R(0)));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        R s(0);
        for (std::size_t l = 0; l < n; ++l) s = s + a[i][l] * m[l][j];
        next[i][j] = s;
      }
      next[i][i] = next[i][i] + c[n - k + 1];
    }
    m = next;
    R trace(0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t l = 0; l < n; ++l) trace = trace + a[i][l] * m[l][i];
    }
    c[n - k] = trace * R(qes::Rational(qes::Rational(-1) / qes::Rational(static_cast<long>(k))));
  }
  return c;
}

/// Roots of the monic polynomial sum c_k t^k by Durand-Kerner iteration.
inline std::vector<cplx> durand_kerner(const std::vector<cplx>& c) {
  const std::size_t n = c.size() - 1;
  std::vector<cplx> z(n);
  double radius = 1.0;
  for (std::size_t k = 0; k < n; ++k) radius = std::max(radius, 1.0 + std::abs(c[k]));
  for (std::size_t k = 0; k < n; ++k) z[k] = radius * std::pow(cplx(0.4, 0.9), double(k));
  auto eval = [&](cplx t) {
    cplx s = c[n];
    for (std::size_t k = n; k-- > 0;) s = s * t + c[k];
    return s;
  };
  for (int it = 0; it < 5000; ++it) {
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cplx denom = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) denom *= z[i] - z[j];
      }
      const cplx step = eval(z[i]) / denom;
      z[i] -= step;
      change = std::max(change, std::abs(step) / std::max(1.0, std::abs(z[i])));
    }
    if (change < 1e-15) break;
  }
  // Two Newton polishes per root.
  for (auto& r : z) {
    for (int it = 0; it < 2; ++it) {
      cplx p = c[n];
      cplx dp = 0.0;
      for (std::size_t k = n; k-- > 0;) {
        dp = dp * r + p;
        p = p * r + c[k];
      }
      if (std::abs(dp) > 0.0) r -= p / dp;
    }
  }
  return z;
}

/// Largest distance from each of `a` to the nearest of `b`, relative to max(1, |a_i|).
inline double set_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double worst = 0.0;
  for (const auto& x : a) {
    double best = 1e300;
    for (const auto& y : b) best = std::min(best, std::abs(x - y));
    worst = std::max(worst, best / std::max(1.0, std::abs(x)));
  }
  return worst;
}

inline qes::Jet jet_sin(const qes::Jet& x) {
  const cplx i(0.0, 1.0);
  return (qes::exp(x * (i * pi)) - qes::exp(x * (-i * pi))) * (1.0 / (2.0 * i));
}

inline qes::Jet jet_cos(const qes::Jet& x) {
  const cplx i(0.0, 1.0);
  return (qes::exp(x * (i * pi)) + qes::exp(x * (-i * pi))) * 0.5;
}

inline double to_d(const qes::Rational& q) { return q.get_d(); }

/// (H^(D) F)(x) / pi^2 and F(x) for F = Phi_D m_lambda(sin^2 pi x), H^(D)
/// evaluated directly in x with derivatives from jets.
inline std::pair<cplx, cplx> degenerate_x_space(const qes::degeneration::DegenerateCoupling& dc,
                                                const qes::Partition& lambda, std::span<const double> xs) {
  const int n = dc.N;
  std::vector<cplx> x(xs.begin(), xs.begin() + n);
  qes::JetFunction f = [&](std::span<const qes::Jet> y) {
    const int order = y[0].order();
    qes::Jet phi = qes::Jet::constant(n, order, 1.0);
    std::vector<qes::Jet> u;
    for (int j = 0; j < n; ++j) {
      const qes::Jet s = jet_sin(y[static_cast<std::size_t>(j)]);
      const qes::Jet c = jet_cos(y[static_cast<std::size_t>(j)]);
      u.push_back(s * s);
      phi = phi * qes::exp(jet_cos(y[static_cast<std::size_t>(j)] * 2.0) * (-to_d(dc.a_tilde) / 2.0)) *
            qes::pow(s, to_d(dc.l0 + 1)) * qes::pow(c, to_d(dc.l1 + 1));
      for (int k = j + 1; k < n; ++k) {
        phi = phi * qes::pow(jet_sin(y[static_cast<std::size_t>(j)] - y[static_cast<std::size_t>(k)]) *
                                 jet_sin(y[static_cast<std::size_t>(j)] + y[static_cast<std::size_t>(k)]),
                             to_d(dc.l + 1));
      }
    }
    qes::Jet m = qes::Jet::constant(n, order, 0.0);
    for (const auto& e : qes::msym_expand(lambda, n)) {
      qes::Jet t = qes::Jet::constant(n, order, 1.0);
      for (int j = 0; j < n; ++j) {
        for (int q = 0; q < e[static_cast<std::size_t>(j)]; ++q) t = t * u[static_cast<std::size_t>(j)];
      }
      m = m + t;
    }
    return phi * m;
  };
  const qes::Jet jet = qes::jet_at(f, x, 2);
  cplx laplacian = 0.0;
  for (int j = 0; j < n; ++j) {
    qes::Exponents a{};
    a[static_cast<std::size_t>(j)] = 2;
    laplacian += jet.derivative(a);
  }
  double potential = 0.0;
  const double p2 = pi * pi;
  for (int j = 0; j < n; ++j) {
    const double xj = xs[static_cast<std::size_t>(j)];
    const double s = std::sin(pi * xj);
    const double c = std::cos(pi * xj);
    potential += p2 * (to_d(dc.l0 * (dc.l0 + 1)) / (s * s) + to_d(dc.l1 * (dc.l1 + 1)) / (c * c) +
                       to_d(dc.c1) * std::cos(2 * pi * xj) + to_d(dc.c2) * std::cos(4 * pi * xj));
    for (int k = j + 1; k < n; ++k) {
      const double xk = xs[static_cast<std::size_t>(k)];
      potential += 2.0 * to_d(dc.l * (dc.l + 1)) * p2 *
                   (1.0 / std::pow(std::sin(pi * (xj - xk)), 2) + 1.0 / std::pow(std::sin(pi * (xj + xk)), 2));
    }
  }
  return {(-laplacian + potential * jet.value()) / p2, jet.value()};
}

/// Eigenvalues (over pi^2) of -d^2/dx^2 + pi^2 (c1 cos 2 pi x + c2 cos 4 pi x)
/// on odd 1-periodic functions, Galerkin in sin(2 pi k x), k = 1..K.
inline std::vector<double> sine_galerkin(double c1, double c2, int K) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(K, K);
  auto add = [&](int row, int k, double v) {
    // sin(2 pi k x) with k <= 0 folds back by oddness.
    if (k == 0) return;
    if (k < 0) {
      k = -k;
      v = -v;
    }
    if (k <= K) h(k - 1, row - 1) += v;
  };
  for (int k = 1; k <= K; ++k) {
    h(k - 1, k - 1) += 4.0 * k * k;
    // cos(2 pi m x) sin(2 pi k x) = (sin(2 pi (k+m) x) + sin(2 pi (k-m) x)) / 2
    add(k, k + 1, c1 / 2);
    add(k, k - 1, c1 / 2);
    add(k, k + 2, c2 / 2);
    add(k, k - 2, c2 / 2);
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(h);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i).real());
  return out;
}

}  // namespace oracle

#endif
