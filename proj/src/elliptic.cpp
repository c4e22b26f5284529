#include "qes/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qes/errors.hpp"

namespace qes::elliptic {

namespace {

constexpr double kPi2 = pi * pi;
constexpr double kPi3 = pi * pi * pi;

// Terms below this fraction of tol are treated as converged.
constexpr double kTailFraction = 1e-4;

std::string to_str(cplx z) {
  return "(" + std::to_string(z.real()) + "," + std::to_string(z.imag()) + ")";
}

// exp(i*pi*tau*s^2 + i*w*x): one theta series term without intermediate overflow.
cplx theta_term(cplx tau, double s, double w, cplx x) {
  return std::exp(I * pi * tau * (s * s) + I * w * x);
}

}  // namespace

EllipticParams EllipticParams::from_tau(cplx tau, int series_terms, double tol) {
  if (!(tau.imag() > 0.0)) fail(ErrorKind::AssumptionViolated, "Im tau must be positive");
  if (series_terms < 1) fail(ErrorKind::AssumptionViolated, "series_terms must be positive");
  if (!(tol > 0.0)) fail(ErrorKind::AssumptionViolated, "tol must be positive");
  EllipticParams p;
  p.tau_ = tau;
  p.series_terms_ = series_terms;
  p.tol_ = tol;
  p.initialise();
  return p;
}

EllipticParams EllipticParams::from_nome(double p, int series_terms, double tol) {
  if (p == 0.0) fail(ErrorKind::ZeroNome, "nome must be nonzero");
  if (!(p > 0.0 && p < 1.0)) fail(ErrorKind::AssumptionViolated, "real nome must lie in (0,1)");
  return from_tau(cplx(0.0, -std::log(p) / pi), series_terms, tol);
}

EllipticParams EllipticParams::with_series_terms(int series_terms) const {
  return from_tau(tau_, series_terms, tol_);
}

cplx EllipticParams::half_period(int i) const {
  switch (i) {
    case 0: return 0.0;
    case 1: return 0.5;
    case 2: return -(tau_ + 1.0) / 2.0;
    case 3: return tau_ / 2.0;
    default: fail(ErrorKind::AssumptionViolated, "half period index must be 0..3");
  }
}

void EllipticParams::initialise() {
  nome_ = std::exp(I * pi * tau_);
  const double abs_p = std::abs(nome_);
  if (!(abs_p < 1.0)) fail(ErrorKind::AssumptionViolated, "|p| must be < 1");

  lambert_.assign(static_cast<std::size_t>(series_terms_) + 1, 0.0);
  cplx p2n = 1.0;
  for (int n = 1; n <= series_terms_; ++n) {
    p2n *= nome_ * nome_;
    lambert_[static_cast<std::size_t>(n)] = static_cast<double>(n) * p2n / (1.0 - p2n);
  }

  // Half-period values from the shifted expansions at x = 0.
  cplx s1 = 0.0, s2 = 0.0, s3 = 0.0;
  cplx pn = 1.0;
  bool converged = false;
  for (int n = 1; n <= series_terms_; ++n) {
    pn *= nome_;
    const double dn = n;
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const cplx t1 = lambert_[static_cast<std::size_t>(n)] * (sign - 1.0);
    const cplx t3 = dn * pn / (1.0 + pn);
    const cplx t2 = dn * pn * (sign - pn) / (1.0 - pn * pn);
    s1 += t1;
    s2 += t2;
    s3 += t3;
    if (8.0 * kPi2 * dn * std::pow(abs_p, n) * 4.0 < tol_ * kTailFraction * (1.0 - abs_p)) {
      converged = true;
      break;
    }
  }
  if (!converged) fail(ErrorKind::SeriesNotConverged, "half-period series did not converge");
  e_[0] = 2.0 * kPi2 / 3.0 - 8.0 * kPi2 * s1;
  e_[1] = -kPi2 / 3.0 - 8.0 * kPi2 * s2;
  e_[2] = -kPi2 / 3.0 - 8.0 * kPi2 * s3;
  g2_ = -4.0 * (e_[0] * e_[1] + e_[1] * e_[2] + e_[2] * e_[0]);
  g3_ = 4.0 * e_[0] * e_[1] * e_[2];
  theta1_prime_zero_ = theta_derivative(1, 0.0, 1, *this);
}

cplx reduce_to_cell(cplx x, const EllipticParams& params) {
  const cplx tau = params.tau();
  const double n = std::round(x.imag() / tau.imag());
  x -= n * tau;
  const double m = std::round(x.real());
  x -= m;
  return x;
}

double lattice_distance(cplx x, const EllipticParams& params) {
  const cplx r = reduce_to_cell(x, params);
  const cplx tau = params.tau();
  double best = std::abs(r);
  for (int m = -1; m <= 1; ++m) {
    for (int n = -1; n <= 1; ++n) best = std::min(best, std::abs(r - double(m) - double(n) * tau));
  }
  return best;
}

WpValues weierstrass_p_all(cplx x, const EllipticParams& params) {
  const cplx r = reduce_to_cell(x, params);
  const double radius = std::sqrt(params.tol());
  if (lattice_distance(r, params) < radius) {
    fail(ErrorKind::PoleProximity, "argument " + to_str(x) + " is within the pole exclusion radius");
  }
  const cplx s = std::sin(pi * r);
  const cplx c = std::cos(pi * r);
  cplx value = kPi2 / (s * s) - kPi2 / 3.0;
  cplx first = -2.0 * kPi3 * c / (s * s * s);

  const auto& lam = params.lambert_coefficients();
  const double growth = std::exp(2.0 * pi * std::abs(r.imag()));
  const double ratio = std::norm(params.nome()) * growth;
  bool converged = false;
  double bound = 0.0;
  for (int n = 1; n <= params.series_terms(); ++n) {
    const cplx ln = lam[static_cast<std::size_t>(n)];
    const cplx arg = 2.0 * pi * double(n) * r;
    value -= 8.0 * kPi2 * ln * (std::cos(arg) - 1.0);
    first += 16.0 * kPi3 * double(n) * ln * std::sin(arg);
    bound = 8.0 * kPi2 * std::abs(ln) * (std::pow(growth, n) + 1.0) * (1.0 + 2.0 * pi * n);
    const double rho = ratio * (n + 1.0) / n;
    if (rho < 1.0 && bound * rho / (1.0 - rho) < params.tol() * kTailFraction) {
      converged = true;
      break;
    }
  }
  if (!converged && bound > params.tol()) {
    fail(ErrorKind::SeriesNotConverged, "q-series tail bound exceeds tol at " + to_str(x));
  }
  const cplx second = 6.0 * value * value - params.g2() / 2.0;
  return {value, first, second};
}

cplx weierstrass_p(cplx x, const EllipticParams& params) { return weierstrass_p_all(x, params).value; }

cplx weierstrass_p_prime(cplx x, const EllipticParams& params) {
  return weierstrass_p_all(x, params).first;
}

cplx weierstrass_p_second(cplx x, const EllipticParams& params) {
  return weierstrass_p_all(x, params).second;
}

cplx weierstrass_p_shifted_series(int i, cplx x, const EllipticParams& params) {
  if (i < 1 || i > 3) fail(ErrorKind::AssumptionViolated, "shift index must be 1..3");
  const cplx r = reduce_to_cell(x, params);
  const cplx p = params.nome();
  const double abs_p = std::abs(p);
  const double growth = std::exp(2.0 * pi * std::abs(r.imag()));
  cplx value = -kPi2 / 3.0;
  if (i == 1) {
    const cplx c = std::cos(pi * r);
    if (std::abs(c) < std::sqrt(params.tol())) fail(ErrorKind::PoleProximity, "x + 1/2 near a lattice point");
    value += kPi2 / (c * c);
  }
  const auto& lam = params.lambert_coefficients();
  cplx pn = 1.0;
  bool converged = false;
  for (int n = 1; n <= params.series_terms(); ++n) {
    pn *= p;
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const cplx cs = std::cos(2.0 * pi * double(n) * r);
    cplx term;
    switch (i) {
      case 1: term = lam[static_cast<std::size_t>(n)] * (sign * cs - 1.0); break;
      case 2: term = double(n) * pn * (sign * cs - pn) / (1.0 - pn * pn); break;
      default: term = double(n) * pn * (cs - pn) / (1.0 - pn * pn); break;
    }
    value -= 8.0 * kPi2 * term;
    const double rho = abs_p * growth * (n + 1.0) / n;
    const double bound = 8.0 * kPi2 * n * std::pow(abs_p * growth, n) * 2.0 / (1.0 - abs_p);
    if (rho < 1.0 && bound * rho / (1.0 - rho) < params.tol() * kTailFraction) {
      converged = true;
      break;
    }
  }
  if (!converged) fail(ErrorKind::SeriesNotConverged, "shifted expansion did not converge at " + to_str(x));
  return value;
}

double ShiftIdentityReport::max() const {
  return std::max({addition, duplication, half_period_shift, shifted_series, second_derivative,
                   differential_equation});
}

namespace {

double scaled(cplx lhs, cplx rhs) {
  return std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

}  // namespace

ShiftIdentityReport wp_shift_identities_check(cplx x, cplx y, const EllipticParams& params) {
  const WpValues px = weierstrass_p_all(x, params);
  const WpValues py = weierstrass_p_all(y, params);
  const cplx denom = px.value - py.value;
  if (std::abs(denom) < params.tol() * std::max(1.0, std::abs(px.value))) {
    fail(ErrorKind::PoleProximity, "P(x) - P(y) vanishes: y is congruent to +-x");
  }
  if (std::abs(px.first) < params.tol()) fail(ErrorKind::PoleProximity, "P'(x) vanishes at a half period");

  ShiftIdentityReport report;
  const cplx sum_direct = weierstrass_p(x + y, params);
  const cplx diff_direct = weierstrass_p(x - y, params);
  const cplx slope = (px.first - py.first) / denom;
  report.addition = scaled(sum_direct, 0.25 * slope * slope - px.value - py.value);
  report.duplication =
      scaled(sum_direct + diff_direct,
             (px.first * px.first + py.first * py.first) / (2.0 * denom * denom) - 2.0 * px.value -
                 2.0 * py.value);

  const auto& e = params.e_values();
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    const cplx shifted = weierstrass_p(x + params.half_period(i + 1), params);
    const cplx formula = e[i] + (e[i] - e[j]) * (e[i] - e[k]) / (px.value - e[i]);
    report.half_period_shift = std::max(report.half_period_shift, scaled(shifted, formula));
    report.shifted_series =
        std::max(report.shifted_series, scaled(shifted, weierstrass_p_shifted_series(i + 1, x, params)));
  }
  cplx partial = 0.0;
  for (int i = 0; i < 3; ++i) partial += 1.0 / (px.value - e[i]);
  report.second_derivative = scaled(px.second / (px.first * px.first), 0.5 * partial);
  report.differential_equation =
      scaled(px.first * px.first,
             4.0 * px.value * px.value * px.value - params.g2() * px.value - params.g3());
  return report;
}

cplx theta_derivative(int j, cplx x, int order, const EllipticParams& params) {
  if (j == 4) j = 0;
  if (j < 0 || j > 3) fail(ErrorKind::AssumptionViolated, "theta index must be 0..4");
  if (order < 0 || order > 12) fail(ErrorKind::AssumptionViolated, "theta derivative order must be 0..12");
  const cplx tau = params.tau();
  const bool half = (j == 1 || j == 2);
  const double abs_im = std::abs(x.imag());
  cplx sum = (!half && order == 0) ? cplx(1.0) : cplx(0.0);
  double magnitude = std::abs(sum);
  bool converged = false;
  bool past_peak = false;
  double previous_bound = 0.0;
  for (int n = 1; n <= params.series_terms(); ++n) {
    const double s = half ? n - 0.5 : double(n);
    const double w = half ? (2.0 * n - 1.0) * pi : 2.0 * pi * n;
    const cplx plus = theta_term(tau, s, w, x);
    const cplx minus = theta_term(tau, s, -w, x);
    // d^k e^{+-iwx} = (+-iw)^k e^{+-iwx}
    const cplx dp = std::pow(I * w, order) * plus;
    const cplx dm = std::pow(-I * w, order) * minus;
    cplx term;
    switch (j) {
      case 1: term = ((n % 2 == 1) ? 1.0 : -1.0) * (dp - dm) / I; break;   // 2 sin
      case 2: term = dp + dm; break;                                        // 2 cos
      case 3: term = dp + dm; break;
      default: term = ((n % 2 == 0) ? 1.0 : -1.0) * (dp + dm); break;
    }
    sum += term;
    magnitude += std::abs(term);
    const double bound = 2.0 * std::exp(-pi * tau.imag() * s * s + w * abs_im) * std::pow(w, order);
    if (n > 1 && bound < previous_bound) past_peak = true;
    previous_bound = bound;
    if (past_peak && bound < 1e-18 * std::max(1.0, magnitude)) {
      converged = true;
      break;
    }
  }
  if (!converged && previous_bound > params.tol()) {
    fail(ErrorKind::SeriesNotConverged, "theta series did not converge at " + to_str(x));
  }
  return sum;
}

cplx theta(int j, cplx x, const EllipticParams& params) { return theta_derivative(j, x, 0, params); }

cplx theta_quasiperiod_factor(int j, cplx x, const EllipticParams& params) {
  const cplx base = theta(j, x, params);
  if (std::abs(base) < params.tol()) {
    fail(ErrorKind::DivisionByNearZero, "theta_" + std::to_string(j) + " vanishes at " + to_str(x));
  }
  return theta(j, x + params.tau(), params) / base;
}

}  // namespace qes::elliptic
