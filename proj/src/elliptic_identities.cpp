#include "qes/elliptic_identities.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qes::elliptic {

namespace {

double scaled(cplx lhs, cplx rhs) {
  return std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

class Tracker {
 public:
  void record(const std::string& name, double r) {
    for (auto& entry : entries_) {
      if (entry.name == name) {
        entry.residual = std::max(entry.residual, r);
        return;
      }
    }
    entries_.push_back({name, r});
  }
  std::vector<IdentityResidual> take() { return std::move(entries_); }

 private:
  std::vector<IdentityResidual> entries_;
};

// -(log theta_j)''(x).
cplx minus_log_second(int j, cplx x, const EllipticParams& params) {
  const cplx t0 = theta(j, x, params);
  const cplx t1 = theta_derivative(j, x, 1, params);
  const cplx t2 = theta_derivative(j, x, 2, params);
  const cplx r = t1 / t0;
  return -(t2 / t0 - r * r);
}

}  // namespace

std::vector<cplx> sample_points(const EllipticParams& params, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(-0.5, 0.5);
  std::uniform_real_distribution<double> im(-0.35, 0.35);
  std::vector<cplx> out;
  while (out.size() < count) {
    const cplx x = re(rng) + im(rng) * params.tau();
    if (std::abs(x.imag()) > 0.35 * params.tau().imag()) continue;
    if (lattice_distance(x, params) < 0.1) continue;
    bool near_half = false;
    for (int i = 1; i <= 3; ++i) near_half = near_half || lattice_distance(x - params.half_period(i), params) < 0.1;
    if (near_half) continue;
    out.push_back(x);
  }
  return out;
}

std::vector<IdentityResidual> identity_suite(const EllipticParams& params, std::size_t count, std::uint64_t seed) {
  Tracker t;
  const auto& e = params.e_values();
  t.record("e_sum", std::abs(e[0] + e[1] + e[2]) / std::max({1.0, std::abs(e[0]), std::abs(e[1])}));
  for (int i = 1; i <= 3; ++i) {
    t.record("wp_prime_half_period",
             std::abs(weierstrass_p_prime(params.half_period(i), params)) / std::max(1.0, std::pow(std::abs(e[0]), 1.5)));
  }
  const cplx th2 = theta(2, 0.0, params);
  const cplx th3 = theta(3, 0.0, params);
  const cplx th0 = theta(0, 0.0, params);
  t.record("theta1_prime_zero", scaled(theta_derivative(1, 0.0, 1, params), pi * th2 * th3 * th0));
  t.record("theta1_zero", std::abs(theta(1, 0.0, params)));

  const EllipticParams longer = params.with_series_terms(params.series_terms() + 16);
  const auto xs = sample_points(params, count, seed);
  const auto ys = sample_points(params, count, seed + 1);
  std::array<cplx, 4> log_constant{};
  const cplx tau = params.tau();

  for (std::size_t s = 0; s < xs.size(); ++s) {
    const cplx x = xs[s];
    const cplx y = ys[s];
    const cplx px = weierstrass_p(x, params);
    t.record("wp_even", scaled(weierstrass_p(-x, params), px));
    for (int j = 1; j <= 3; ++j) {
      t.record("wp_period", scaled(weierstrass_p(x + 2.0 * params.half_period(j), params), px));
    }
    t.record("wp_series_truncation", scaled(weierstrass_p(x, longer), px));

    const bool separated = lattice_distance(x - y, params) > 0.1 && lattice_distance(x + y, params) > 0.1;
    if (separated) {
      const auto report = wp_shift_identities_check(x, y, params);
      t.record("wp_addition", report.addition);
      t.record("wp_duplication", report.duplication);
      t.record("wp_half_period_shift", report.half_period_shift);
      t.record("wp_shifted_series", report.shifted_series);
      t.record("wp_second_derivative_ratio", report.second_derivative);
      t.record("wp_differential_equation", report.differential_equation);
    }

    const cplx quasi = std::exp(-I * pi * (2.0 * x + tau));
    for (int j = 0; j < 4; ++j) {
      const cplx v = theta(j, x, params);
      const double parity = (j == 1) ? -1.0 : 1.0;
      t.record("theta_parity", scaled(theta(j, -x, params), parity * v));
      const double unit = (j == 1 || j == 2) ? -1.0 : 1.0;
      t.record("theta_unit_shift", scaled(theta(j, x + 1.0, params), unit * v));
      const double sign = (j == 0 || j == 1) ? -1.0 : 1.0;
      t.record("theta_tau_shift", scaled(theta_quasiperiod_factor(j, x, params), sign * quasi));
    }
    t.record("theta_duplication",
             scaled(theta(1, 2.0 * x, params) * th2 * th3 * th0,
                    2.0 * theta(1, x, params) * theta(2, x, params) * theta(3, x, params) * theta(0, x, params)));

    // P(x + w_i) = -(log theta_{i+1})'' + const, with theta_4 = theta_0.
    for (int i = 0; i < 4; ++i) {
      const int j = (i == 3) ? 0 : i + 1;
      const cplx c = minus_log_second(j, x, params) - weierstrass_p(x + params.half_period(i), params);
      if (s == 0) {
        log_constant[static_cast<std::size_t>(i)] = c;
      } else {
        t.record("log_theta_constant", scaled(c, log_constant[static_cast<std::size_t>(i)]));
      }
    }
  }
  return t.take();
}

}  // namespace qes::elliptic
