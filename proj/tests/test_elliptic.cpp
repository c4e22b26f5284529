#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qes/elliptic.hpp"
#include "qes/elliptic_identities.hpp"
#include "qes/errors.hpp"

using namespace qes;
using namespace qes::elliptic;

namespace {

std::vector<cplx> random_points(const EllipticParams& p, int count, unsigned seed) {
  return sample_points(p, static_cast<std::size_t>(count), seed);
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

TEST_CASE("half-period values and invariants") {
  for (cplx tau : {cplx(0, 1), cplx(0, 1.3), cplx(0.3, 1.1)}) {
    const auto p = EllipticParams::from_tau(tau);
    CHECK(std::abs(p.e(1) + p.e(2) + p.e(3)) < 1e-12);
    const cplx e1 = p.e(1), e2 = p.e(2), e3 = p.e(3);
    CHECK(std::abs(p.g2() + 4.0 * (e1 * e2 + e2 * e3 + e3 * e1)) < 1e-11);
    CHECK(std::abs(p.g3() - 4.0 * e1 * e2 * e3) < 1e-11);
    CHECK(std::abs(p.nome()) < 1.0);
    for (int i = 1; i <= 3; ++i) {
      CHECK(std::abs(weierstrass_p(p.half_period(i), p) - p.e(i)) < 1e-11);
      CHECK(std::abs(weierstrass_p_prime(p.half_period(i), p)) < 1e-10);
    }
  }
}

TEST_CASE("series value against the extrapolated lattice sum") {
  const auto p = EllipticParams::from_tau({0.0, 1.3});
  const cplx x(0.23, 0.11);
  const cplx series = weierstrass_p(x, p);
  const cplx lattice = oracle::lattice_wp_extrapolated(x, p.tau());
  CHECK(std::abs(series - lattice) < 1e-10);
  // The plain |m|,|n| <= 60 truncation only reaches the 1e-4 level.
  CHECK(std::abs(series - oracle::lattice_wp(x, p.tau(), 60)) < 1e-3);

  const auto p2 = EllipticParams::from_tau({0.3, 1.1});
  for (cplx y : {cplx(0.31, -0.2), cplx(-0.4, 0.35)}) {
    CHECK(std::abs(weierstrass_p(y, p2) - oracle::lattice_wp_extrapolated(y, p2.tau())) < 1e-10);
  }
}

TEST_CASE("lattice invariants from Eisenstein sums") {
  const auto p = EllipticParams::from_tau({0.0, 1.3});
  const auto [g2, g3] = oracle::eisenstein_invariants(p.tau(), 300);
  CHECK(rel(g2, p.g2()) < 1e-4);
  CHECK(rel(g3, p.g3()) < 1e-4);
}

TEST_CASE("evenness and periodicity") {
  const auto p = EllipticParams::from_tau({0.3, 1.1});
  for (cplx x : random_points(p, 10, 4)) {
    CHECK(rel(weierstrass_p(-x, p), weierstrass_p(x, p)) < 1e-12);
    CHECK(rel(weierstrass_p(x + 1.0, p), weierstrass_p(x, p)) < 1e-12);
    CHECK(rel(weierstrass_p(x + p.tau(), p), weierstrass_p(x, p)) < 1e-12);
    CHECK(rel(weierstrass_p_prime(-x, p), -weierstrass_p_prime(x, p)) < 1e-12);
  }
}

TEST_CASE("derivatives against central differences") {
  const auto p = EllipticParams::from_tau({0.0, 1.3});
  const double h = 1e-3;
  auto diff = [&](auto f, cplx x) { return (-f(x + 2 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2 * h)) / (12 * h); };
  for (cplx x : random_points(p, 5, 9)) {
    const cplx fd1 = diff([&](cplx y) { return weierstrass_p(y, p); }, x);
    const cplx fd2 = diff([&](cplx y) { return weierstrass_p_prime(y, p); }, x);
    CHECK(rel(fd1, weierstrass_p_prime(x, p)) < 1e-6);
    CHECK(rel(fd2, weierstrass_p_second(x, p)) < 1e-6);
    const auto all = weierstrass_p_all(x, p);
    CHECK(all.value == weierstrass_p(x, p));
  }
}

TEST_CASE("shift identities and the degenerate addition") {
  const auto p = EllipticParams::from_tau({0.0, 1.0});
  const auto pts = random_points(p, 8, 2);
  for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
    const auto report = wp_shift_identities_check(pts[i], pts[i + 1], p);
    CHECK(report.max() < 1e-10);
  }
  CHECK_THROWS_AS(wp_shift_identities_check(pts[0], pts[0], p), qes::Error);
  try {
    (void)wp_shift_identities_check(pts[0], pts[0], p);
  } catch (const qes::Error& e) {
    CHECK(e.kind() == ErrorKind::PoleProximity);
  }
}

TEST_CASE("half-shift against the cosine expansion") {
  const auto p = EllipticParams::from_tau({0.0, 1.3});
  for (cplx x : random_points(p, 5, 6)) {
    CHECK(rel(weierstrass_p(x + 0.5, p), weierstrass_p_shifted_series(1, x, p)) < 1e-11);
  }
}

TEST_CASE("pole exclusion") {
  const auto p = EllipticParams::from_tau({0.0, 1.3});
  try {
    (void)weierstrass_p(cplx(1e-9, 0.0), p);
    FAIL("expected PoleProximity");
  } catch (const qes::Error& e) {
    CHECK(e.kind() == ErrorKind::PoleProximity);
  }
  try {
    (void)weierstrass_p(p.tau() + 1.0 + cplx(0.0, 1e-8), p);
    FAIL("expected PoleProximity");
  } catch (const qes::Error& e) {
    CHECK(e.kind() == ErrorKind::PoleProximity);
  }
}

TEST_CASE("theta values and periodicity") {
  const auto p = EllipticParams::from_tau({0.0, 1.3});
  CHECK(std::abs(theta(1, 0.0, p)) < 1e-15);
  const cplx lhs = p.theta1_prime_zero();
  const cplx rhs = pi * theta(2, 0.0, p) * theta(3, 0.0, p) * theta(0, 0.0, p);
  CHECK(std::abs(lhs - rhs) < 1e-12);
  for (cplx x : random_points(p, 10, 12)) {
    CHECK(std::abs(theta(1, x + 1.0, p) + theta(1, x, p)) < 1e-11);
    CHECK(std::abs(theta(3, x + 1.0, p) - theta(3, x, p)) < 1e-11);
    CHECK(theta(4, x, p) == theta(0, x, p));
    const cplx factor = std::exp(-pi * I * (2.0 * x + p.tau()));
    CHECK(std::abs(theta_quasiperiod_factor(3, x, p) - factor) < 1e-11 * std::max(1.0, std::abs(factor)));
    CHECK(std::abs(theta_quasiperiod_factor(1, x, p) + factor) < 1e-11 * std::max(1.0, std::abs(factor)));
    const cplx dup = theta(1, 2.0 * x, p) * theta(2, 0.0, p) * theta(3, 0.0, p) * theta(0, 0.0, p) -
                     2.0 * theta(1, x, p) * theta(2, x, p) * theta(3, x, p) * theta(0, x, p);
    CHECK(std::abs(dup) < 1e-10);
  }
  try {
    (void)theta_quasiperiod_factor(1, 0.0, p);
    FAIL("expected DivisionByNearZero");
  } catch (const qes::Error& e) {
    CHECK(e.kind() == ErrorKind::DivisionByNearZero);
  }
}

TEST_CASE("theta derivatives against central differences") {
  const auto p = EllipticParams::from_tau({0.3, 1.1});
  const double h = 1e-4;
  for (int j = 0; j < 4; ++j) {
    const cplx x(0.17, 0.09);
    const cplx fd = (theta(j, x + h, p) - theta(j, x - h, p)) / (2 * h);
    CHECK(rel(fd, theta_derivative(j, x, 1, p)) < 1e-7);
  }
  CHECK(std::abs(theta_derivative(1, 0.0, 1, p) - p.theta1_prime_zero()) < 1e-12);
}

TEST_CASE("second log-derivative of theta_1 differs from P by a constant") {
  const auto p = EllipticParams::from_tau({0.0, 1.3});
  auto second_log = [&](cplx x) {
    auto diff = [&](double h) {
      return -(std::log(theta(1, x + h, p)) - 2.0 * std::log(theta(1, x, p)) + std::log(theta(1, x - h, p))) /
             (h * h);
    };
    // Richardson on the h^2 error term.
    return (4.0 * diff(5e-4) - diff(1e-3)) / 3.0;
  };
  std::vector<cplx> offsets;
  for (cplx x : random_points(p, 10, 21)) offsets.push_back(second_log(x) - weierstrass_p(x, p));
  for (const cplx& c : offsets) CHECK(std::abs(c - offsets.front()) < 1e-6);
}

TEST_CASE("truncation self-consistency") {
  const auto p = EllipticParams::from_tau({0.0, 1.0});
  const auto q = p.with_series_terms(p.series_terms() + 16);
  for (cplx x : random_points(p, 5, 30)) {
    CHECK(std::abs(weierstrass_p(x, p) - weierstrass_p(x, q)) < p.tol());
    CHECK(std::abs(theta(2, x, p) - theta(2, x, q)) < p.tol());
  }
}

TEST_CASE("identity suite at the three reference periods") {
  for (cplx tau : {cplx(0, 1), cplx(0, 1.3), cplx(0.3, 1.1)}) {
    const auto p = EllipticParams::from_tau(tau);
    for (const auto& r : identity_suite(p, 20, 7)) {
      INFO(r.name);
      CHECK(r.residual < 1e-10);
    }
  }
}

TEST_CASE("construction from a nome") {
  const auto p = EllipticParams::from_nome(0.01);
  CHECK(std::abs(p.nome() - 0.01) < 1e-15);
  CHECK(std::abs(p.tau().real()) < 1e-15);
  CHECK_THROWS_AS(EllipticParams::from_tau({0.2, -1.0}), qes::Error);
}
