#include "qes/cli/tasks.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "qes/conserved.hpp"
#include "qes/degeneration.hpp"
#include "qes/elliptic.hpp"
#include "qes/elliptic_identities.hpp"
#include "qes/errors.hpp"
#include "qes/inozemtsev.hpp"
#include "qes/linalg.hpp"
#include "qes/ruijsenaars.hpp"

namespace qes::cli {

using nlohmann::json;

namespace {

constexpr double kIdentityTol = 1e-10;
constexpr double kQuasiperiodTol = 1e-9;
constexpr double kNegativeControlFloor = 1e-2;
constexpr double kSigmaRatioFloor = 1e-6;
constexpr double kDecadeFactor = 5.0;
constexpr double kTrigTol = 1e-4;

[[noreturn]] void config_error(const std::string& message) { fail(ErrorKind::ConfigError, message); }

Assertion below(std::string name, double value, double threshold) {
  return {std::move(name), value < threshold, value, threshold, "<"};
}

Assertion above(std::string name, double value, double threshold) {
  return {std::move(name), value > threshold, value, threshold, ">"};
}

Assertion holds(std::string name, bool ok) { return {std::move(name), ok, ok ? 1.0 : 0.0, 1.0, "=="}; }

json complex_json(cplx z) { return format_complex(z); }

elliptic::EllipticParams elliptic_params(const RunConfig& c) {
  if (c.nome) return elliptic::EllipticParams::from_nome(*c.nome, c.series_terms);
  return elliptic::EllipticParams::from_tau(c.tau, c.series_terms);
}

inozemtsev::CouplingSet couplings(const RunConfig& c) {
  inozemtsev::CouplingSet cs;
  cs.N = c.N;
  cs.l = c.l;
  cs.li = c.li;
  return cs;
}

inozemtsev::GaugeChoice select_gauge(const RunConfig& c) {
  const auto cs = couplings(c);
  if (c.policy == GaugePolicy::Explicit) {
    inozemtsev::GaugeChoice g;
    g.N = c.N;
    g.a = *c.gauge_a;
    for (std::size_t i = 0; i < 4; ++i) g.b[i] = *c.gauge_b[i];
    if (!g.admissible()) {
      config_error(fmt::format("no admissible gauge choice: degree {} is not a non-negative integer",
                               to_string(g.degree_value())));
    }
    return g;
  }
  for (const auto& g : inozemtsev::enumerate_gauge_choices(cs)) {
    switch (c.policy) {
      case GaugePolicy::First:
        return g;
      case GaugePolicy::Degree:
        if (g.degree() == *c.gauge_degree) return g;
        break;
      case GaugePolicy::L2:
        try {
          if (inozemtsev::l2_membership(g, cs).member) return g;
        } catch (const Error& e) {
          config_error(e.what());
        }
        break;
      case GaugePolicy::Explicit:
        break;
    }
  }
  config_error("no admissible gauge choice");
}

json gauge_json(const inozemtsev::GaugeChoice& g) {
  json j;
  j["a"] = format_rational(g.a);
  for (std::size_t i = 0; i < 4; ++i) j[fmt::format("b{}", i)] = format_rational(g.b[i]);
  j["degree"] = g.degree();
  return j;
}

std::size_t point_count(const RunConfig& c, std::size_t dim) {
  return c.points > 0 ? c.points : std::max<std::size_t>(16, 3 * dim + 8);
}

void matrix_table(CsvTable& table, const OperatorMatrix<cplx>& m, const std::vector<std::string>& row_labels,
                  const std::vector<std::string>& col_labels) {
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) table.add_row({row_labels[i], col_labels[j], format_complex(m.at(i, j))});
  }
}

std::vector<std::string> labels_of(const std::vector<Partition>& basis) {
  std::vector<std::string> out;
  for (const auto& p : basis) out.push_back(p.str());
  return out;
}

double max_abs(const OperatorMatrix<cplx>& m) {
  double s = 1.0;
  for (const auto& v : m.entries) s = std::max(s, std::abs(v));
  return s;
}

TaskOutput task_spectrum(const RunConfig& c) {
  const auto params = elliptic_params(c);
  const auto g = select_gauge(c);
  const auto m = inozemtsev::hamiltonian_matrix<cplx>(g, inozemtsev::e_values(params));
  const auto spec = inozemtsev::spectrum(m);
  spdlog::info("spectrum: dim {} gauge {}", m.dim(), g.str());

  TaskOutput out;
  out.table = CsvTable({"index", "eigenvalue", "cluster_multiplicity"}, {"-", "energy (complex)", "count"});
  std::vector<int> multiplicity;
  for (const auto& cl : spec.clusters) {
    for (int k = 0; k < cl.multiplicity; ++k) multiplicity.push_back(cl.multiplicity);
  }
  json values = json::array();
  for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
    const int mult = i < multiplicity.size() ? multiplicity[i] : 1;
    out.table.add_row({std::to_string(i), format_complex(spec.eigenvalues[i]), std::to_string(mult)});
    values.push_back(complex_json(spec.eigenvalues[i]));
  }
  const double closure = m.closure_residual / max_abs(m);
  out.results["gauge"] = gauge_json(g);
  out.results["dim"] = m.dim();
  out.results["basis"] = labels_of(m.basis);
  out.results["eigenvalues"] = values;
  out.results["backward_error"] = spec.backward_error;
  out.results["closure_residual"] = closure;
  out.assertions.push_back(below("closure_residual", closure, c.tol));
  out.assertions.push_back(below("backward_error", spec.backward_error, c.tol));
  return out;
}

TaskOutput task_verify_invariance(const RunConfig& c) {
  const auto g = select_gauge(c);
  const int d = g.degree();
  const auto e = inozemtsev::symbolic_e();
  const auto m = inozemtsev::hamiltonian_matrix<EPoly>(g, e);
  spdlog::info("verify-invariance: dim {} gauge {}", m.dim(), g.str());

  TaskOutput out;
  out.table = CsvTable({"partition", "raised_partition", "raised_coefficient", "expected", "match"},
                       {"basis label", "label", "exact rational", "-4(L-d-2b0+1/2)(L-d)", "bool"});
  bool law = true;
  for (const auto& lambda : m.basis) {
    const auto image = inozemtsev::apply_hamiltonian<EPoly>(g, e, SymPoly<EPoly>::monomial(c.N, lambda));
    const Partition raised = lambda.raised();
    const EPoly got = image.coefficient(raised);
    const Rational L = lambda.largest();
    const Rational expected = -4 * (L - d - 2 * g.b[0] + Rational(1, 2)) * (L - d);
    const bool ok = got == EPoly(expected);
    law = law && ok;
    out.table.add_row({lambda.str(), raised.str(), got.str(), format_rational(expected), ok ? "true" : "false"});
  }
  out.results["gauge"] = gauge_json(g);
  out.results["dim"] = m.dim();
  out.results["closure_residual"] = m.closure_residual;
  out.results["leading_law"] = law;
  out.assertions.push_back({"exact_closure", m.closure_residual == 0.0, m.closure_residual, 0.0, "=="});
  out.assertions.push_back(holds("leading_coefficient_law", law));
  return out;
}

TaskOutput task_verify_commuting(const RunConfig& c) {
  if (c.N > 3) config_error("verify-commuting supports N <= 3");
  const auto params = elliptic_params(c);
  const auto g = select_gauge(c);
  const auto oc = conserved::OshimaCouplings::from(couplings(c));
  const auto hm = inozemtsev::hamiltonian_matrix<cplx>(g, inozemtsev::e_values(params));
  const Eigen::MatrixXcd h = to_eigen(hm);
  const auto points = conserved::collocation_points(c.N, point_count(c, hm.dim()), params, c.seed);

  std::vector<Eigen::MatrixXcd> p;
  TaskOutput out;
  out.table = CsvTable({"k", "term_count", "closure_residual", "commutator_with_H"},
                       {"operator index", "count", "relative lsq residual", "relative Frobenius"});
  double closure = 0.0;
  double comm = 0.0;
  json ops = json::array();
  for (int k = 1; k <= c.N; ++k) {
    const auto op = conserved::build_conserved_operator(c.N, k, oc);
    const auto pm = conserved::conserved_matrix(op, g, params, points);
    p.push_back(to_eigen(pm));
    const double ch = commutator_relnorm(h, p.back());
    closure = std::max(closure, pm.closure_residual);
    comm = std::max(comm, ch);
    spdlog::info("verify-commuting: P{} terms {} closure {:.3e} [H,P] {:.3e}", k, op.term_count(),
                 pm.closure_residual, ch);
    out.table.add_row({std::to_string(k), std::to_string(op.term_count()), format_double(pm.closure_residual),
                       format_double(ch)});
    ops.push_back({{"k", k}, {"term_count", op.term_count()}, {"closure_residual", pm.closure_residual},
                   {"commutator_with_H", ch}});
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) comm = std::max(comm, commutator_relnorm(p[i], p[j]));
  }
  const auto fit = conserved::affine_fit(p[0], h);
  out.results["gauge"] = gauge_json(g);
  out.results["dim"] = hm.dim();
  out.results["points"] = points.size();
  out.results["operators"] = ops;
  out.results["closure_residual"] = closure;
  out.results["commutator_relnorm"] = comm;
  out.results["p1_affine"] = {{"slope", complex_json(fit.slope)},
                              {"offset", complex_json(fit.offset)},
                              {"residual", fit.residual}};
  out.assertions.push_back(below("closure_residual", closure, c.tol));
  out.assertions.push_back(below("commutator_relnorm", comm, c.tol));
  out.assertions.push_back(below("p1_affine_in_H", fit.residual, c.tol));
  return out;
}

TaskOutput task_dims(const RunConfig& c) {
  inozemtsev::DimensionReport r;
  try {
    r = inozemtsev::dimension_report(couplings(c));
  } catch (const Error& e) {
    config_error(e.what());
  }
  TaskOutput out;
  out.table = CsvTable({"a", "b0", "b1", "b2", "b3", "degree", "dim"},
                       {"exact", "exact", "exact", "exact", "exact", "integer", "binomial(N+d,N)"});
  long long sum = 0;
  json choices = json::array();
  for (const auto& g : r.choices) {
    const long long dim = static_cast<long long>(binomial(c.N + g.degree(), c.N));
    sum += dim;
    out.table.add_row({format_rational(g.a), format_rational(g.b[0]), format_rational(g.b[1]),
                       format_rational(g.b[2]), format_rational(g.b[3]), std::to_string(g.degree()),
                       std::to_string(dim)});
    json j = gauge_json(g);
    j["dim"] = dim;
    choices.push_back(j);
  }
  out.results["total_dim"] = r.total;
  out.results["choices"] = choices;
  out.results["closed_form"] = r.closed_form ? json(*r.closed_form) : json(nullptr);
  out.results["closed_form_agrees"] = r.agrees();
  out.assertions.push_back(holds("enumeration_consistent", sum == r.total));
  return out;
}

ruijsenaars::RuijsenaarsParams ruijsenaars_params(const RunConfig& c, int level) {
  ruijsenaars::RuijsenaarsParams rp;
  rp.N = c.N;
  rp.kappa = c.kappa;
  rp.mu = c.mu;
  rp.nu = c.nu;
  rp.nubar = c.nubar;
  if (c.solve_level) {
    const cplx shift = (static_cast<double>(level) - rp.level_k()) * rp.kappa / 8.0;
    for (std::size_t r = 0; r < 4; ++r) {
      rp.nu[r] += shift;
      rp.nubar[r] += shift;
    }
  }
  return rp;
}

TaskOutput task_ruijsenaars_check(const RunConfig& c) {
  if (c.N > 2) config_error("ruijsenaars-check supports N <= 2");
  const auto params = elliptic_params(c);
  const int k = c.theta_level;
  const auto basis = ruijsenaars::theta_basis(c.N, k, params);
  const auto points = conserved::collocation_points(c.N, point_count(c, basis.dim()), params, c.seed);
  const auto rp = ruijsenaars_params(c, k);
  const auto m = ruijsenaars::verify_y1_invariance(rp, params, basis, points);
  auto off = rp;
  for (std::size_t r = 0; r < 4; ++r) {
    off.nu[r] += rp.kappa / 8.0;
    off.nubar[r] += rp.kappa / 8.0;
  }
  const auto control = ruijsenaars::verify_y1_invariance(off, params, basis, points);

  double quasi = 0.0;
  const auto probes = conserved::collocation_points(c.N, 4, params, c.seed + 7);
  for (std::size_t alpha = 0; alpha < basis.dim(); ++alpha) {
    const auto f = basis.member(alpha, params);
    for (const auto& x : probes) {
      const int shifts = 1 << c.N;
      for (int mask = 0; mask < shifts; ++mask) {
        std::vector<int> n(static_cast<std::size_t>(c.N));
        for (int j = 0; j < c.N; ++j) n[static_cast<std::size_t>(j)] = (mask >> j) & 1 ? 1 : -1;
        quasi = std::max(quasi, ruijsenaars::quasiperiodicity_check(f, k, x, n, params).max());
      }
    }
  }
  spdlog::info("ruijsenaars-check: dim {} closure {:.3e} control {:.3e}", basis.dim(), m.closure_residual,
               control.closure_residual);

  TaskOutput out;
  out.table = CsvTable({"row", "column", "entry"}, {"theta label", "theta label", "Y1 matrix entry (complex)"});
  const auto labels = labels_of(basis.labels);
  matrix_table(out.table, m, labels, labels);
  const cplx level = rp.level_k();
  out.results["dim"] = basis.dim();
  out.results["k"] = k;
  out.results["level"] = complex_json(level);
  out.results["rank_certificate"] = basis.rank_certificate;
  out.results["fallback_basis"] = basis.fallback;
  out.results["closure_residual"] = m.closure_residual;
  out.results["negative_control_residual"] = control.closure_residual;
  out.results["quasiperiodicity_residual"] = quasi;
  out.assertions.push_back(below("level_condition", std::abs(level - static_cast<double>(k)), 1e-10));
  out.assertions.push_back(below("quasiperiodicity", quasi, kQuasiperiodTol));
  out.assertions.push_back(below("closure_residual", m.closure_residual, c.tol));
  out.assertions.push_back(above("negative_control", control.closure_residual, kNegativeControlFloor));
  return out;
}

TaskOutput task_phi_isomorphism(const RunConfig& c) {
  const auto params = elliptic_params(c);
  const auto g = select_gauge(c);
  const int d = g.degree();
  const auto basis = ruijsenaars::theta_basis(c.N, 2 * d, params);
  const auto points = conserved::collocation_points(c.N, point_count(c, basis.dim()), params, c.seed);
  const auto iso = ruijsenaars::phi_isomorphism(g, params, basis, points);
  spdlog::info("phi-isomorphism: dim {} residual {:.3e} sigma ratio {:.3e}", basis.dim(), iso.residual,
               iso.sigma_ratio);

  TaskOutput out;
  out.table = CsvTable({"monomial", "theta_member", "coefficient"},
                       {"partition label", "theta label", "coordinate (complex)"});
  matrix_table(out.table, iso.matrix, labels_of(iso.matrix.basis), labels_of(basis.labels));
  out.results["gauge"] = gauge_json(g);
  out.results["dim"] = basis.dim();
  out.results["residual"] = iso.residual;
  out.results["sigma_ratio"] = iso.sigma_ratio;
  out.assertions.push_back(below("fit_residual", iso.residual, c.tol));
  out.assertions.push_back(above("sigma_ratio", iso.sigma_ratio, kSigmaRatioFloor));
  return out;
}

TaskOutput task_limit_nonrel(const RunConfig& c) {
  const auto params = elliptic_params(c);
  if (static_cast<int>(c.limit_x.size()) != c.N || static_cast<int>(c.limit_xp.size()) != c.N) {
    config_error("limit.x and limit.xp need model.n coordinates");
  }
  std::vector<std::pair<std::string, ruijsenaars::Pairing>> pairings;
  if (c.pairing != "untwisted") pairings.emplace_back("printed", ruijsenaars::Pairing::Printed);
  if (c.pairing != "printed") pairings.emplace_back("untwisted", ruijsenaars::Pairing::Untwisted);

  TaskOutput out;
  out.table = CsvTable({"pairing", "exponent", "kappa", "error", "order"},
                       {"b index map", "w in exp(w sum x)", "step", "|E(kappa)|", "log2 ratio"});
  json tables = json::array();
  for (const cplx w : c.test_exponents) {
    JetFunction f = [w](std::span<const Jet> y) {
      Jet s = y[0];
      for (std::size_t j = 1; j < y.size(); ++j) s += y[j];
      return exp(s * w);
    };
    std::vector<std::string> monotone;
    for (const auto& [name, pairing] : pairings) {
      const auto t =
          ruijsenaars::nonrelativistic_limit_check(c.N, c.limit_a, c.limit_b, params, f, c.limit_x, c.limit_xp,
                                                   c.kappas, pairing);
      json rows = json::array();
      for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const std::string order = i > 0 && i - 1 < t.orders.size() ? format_double(t.orders[i - 1]) : "";
        out.table.add_row({name, format_complex(w), format_double(t.rows[i].kappa), format_double(t.rows[i].error),
                           order});
        rows.push_back({{"kappa", t.rows[i].kappa}, {"error", t.rows[i].error}});
      }
      tables.push_back({{"pairing", name},
                        {"exponent", complex_json(w)},
                        {"rows", rows},
                        {"orders", t.orders},
                        {"strictly_decreasing", t.strictly_decreasing},
                        {"final_over_initial", t.final_over_initial}});
      if (t.strictly_decreasing) monotone.push_back(name);
      spdlog::info("limit-nonrel: {} w={} final/initial {:.3e}", name, format_complex(w), t.final_over_initial);
    }
    out.assertions.push_back(holds(fmt::format("monotone_decrease[w={}]", format_complex(w)), !monotone.empty()));
  }
  out.results["tables"] = tables;
  return out;
}

degeneration::DegenerateCoupling degenerate_coupling(const RunConfig& c) {
  int L = 0;
  try {
    L = degeneration::limit_degree(c.N, c.l, c.li[0], c.li[1], c.b_tilde);
  } catch (const Error& e) {
    config_error(e.what());
  }
  auto dc = degeneration::DegenerateCoupling::from_constraints(c.N, c.l, c.li[0], c.li[1], c.a_tilde, L);
  if (c.c1) dc.c1 = *c.c1;
  if (c.c2) dc.c2 = *c.c2;
  return dc;
}

TaskOutput task_degenerate_spectrum(const RunConfig& c) {
  const auto dc = degenerate_coupling(c);
  const auto m = degeneration::degenerate_hamiltonian_matrix(dc, false);
  const auto spec = inozemtsev::spectrum(to_complex(m));
  spdlog::info("degenerate-spectrum: L {} dim {} closure {}", dc.L, m.dim(), m.closure_residual);

  TaskOutput out;
  out.table = CsvTable({"index", "eigenvalue"}, {"-", "energy / pi^2 (complex)"});
  json values = json::array();
  for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
    out.table.add_row({std::to_string(i), format_complex(spec.eigenvalues[i])});
    values.push_back(complex_json(spec.eigenvalues[i]));
  }
  out.results["L"] = dc.L;
  out.results["dim"] = m.dim();
  out.results["c1"] = format_rational(dc.c1);
  out.results["c2"] = format_rational(dc.c2);
  out.results["constraints_hold"] = dc.constraints_hold();
  out.results["closure_residual"] = m.closure_residual;
  out.results["eigenvalues"] = values;
  out.assertions.push_back({"exact_closure", m.closure_residual == 0.0, m.closure_residual, 0.0, "=="});
  return out;
}

TaskOutput task_limit_trig(const RunConfig& c) {
  if (static_cast<int>(c.trig_x.size()) != c.N || static_cast<int>(c.trig_xp.size()) != c.N) {
    config_error("degenerate.x and degenerate.xp need model.n coordinates");
  }
  if (c.nomes.empty()) config_error("degenerate.nomes must not be empty");
  const Rational& l0 = c.li[0];
  const Rational& l1 = c.li[1];
  degeneration::SpectrumLimitTable spec;
  try {
    spec = degeneration::limit_spectrum_check(c.N, c.l, l0, l1, c.a_tilde, c.b_tilde, c.nomes);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConstraintViolated) config_error(e.what());
    throw;
  }
  const auto gauge = degeneration::gauge_limit_check(c.N, c.l, l0, l1, c.a_tilde, c.b_tilde, c.nomes, c.trig_x,
                                                     c.trig_xp);
  const auto spans = degeneration::compare_limit_spaces(c.N, c.l, l0, l1, c.a_tilde, c.b_tilde, c.seed);

  TaskOutput out;
  out.table = CsvTable({"nome", "gap_discrepancy", "gauge_ratio", "gauge_deviation"},
                       {"p", "max relative gap error", "[Phi/Psi_D](x)/[Phi/Psi_D](x')", "|ratio - 1|"});
  json rows = json::array();
  for (std::size_t i = 0; i < spec.rows.size(); ++i) {
    const auto& r = spec.rows[i];
    const auto& gr = gauge.rows[i];
    out.table.add_row({format_double(r.p), format_double(r.discrepancy), format_double(gr.ratio),
                       format_double(gr.deviation)});
    rows.push_back({{"p", r.p},
                    {"discrepancy", r.discrepancy},
                    {"elliptic_gaps", r.elliptic_gaps},
                    {"degenerate_gaps", r.degenerate_gaps},
                    {"gauge_ratio", gr.ratio},
                    {"gauge_deviation", gr.deviation}});
  }
  out.results["L"] = spec.L;
  out.results["rows"] = rows;
  out.results["decade_factors"] = spec.decade_factors;
  out.results["span_comparison"] = {{"dim", spans.dim},
                                    {"rank_degenerate", spans.rank_degenerate},
                                    {"rank_limit", spans.rank_limit},
                                    {"rank_combined", spans.rank_combined},
                                    {"equal", spans.equal()}};
  if (spec.L >= 1) {
    const double worst = spec.decade_factors.empty()
                             ? 0.0
                             : *std::min_element(spec.decade_factors.begin(), spec.decade_factors.end());
    out.assertions.push_back({"decade_factor", worst >= kDecadeFactor, worst, kDecadeFactor, ">="});
    out.assertions.push_back(below("final_gap_discrepancy", spec.rows.back().discrepancy, kTrigTol));
  }
  out.assertions.push_back(holds("gauge_ratio_monotone", gauge.monotone));
  out.assertions.push_back(below("final_gauge_deviation", gauge.rows.back().deviation, kTrigTol));
  out.assertions.push_back(holds("limit_space_equals_degenerate_space", spans.equal()));
  return out;
}

TaskOutput task_specfun_selftest(const RunConfig& c) {
  const auto params = elliptic_params(c);
  const std::size_t count = c.points > 0 ? c.points : 20;
  const auto suite = elliptic::identity_suite(params, count, c.seed);

  TaskOutput out;
  out.table = CsvTable({"identity", "residual"}, {"name", "max |lhs-rhs|/max(1,|lhs|,|rhs|)"});
  json residuals = json::object();
  for (const auto& r : suite) {
    out.table.add_row({r.name, format_double(r.residual)});
    residuals[r.name] = r.residual;
    out.assertions.push_back(below(r.name, r.residual, kIdentityTol));
  }
  out.results["tau"] = complex_json(params.tau());
  out.results["points"] = count;
  out.results["residuals"] = residuals;
  return out;
}

using TaskFn = std::function<TaskOutput(const RunConfig&)>;

const std::map<std::string, TaskFn>& registry() {
  static const std::map<std::string, TaskFn> tasks = {
      {"spectrum", task_spectrum},
      {"verify-invariance", task_verify_invariance},
      {"verify-commuting", task_verify_commuting},
      {"dims", task_dims},
      {"ruijsenaars-check", task_ruijsenaars_check},
      {"phi-isomorphism", task_phi_isomorphism},
      {"limit-nonrel", task_limit_nonrel},
      {"degenerate-spectrum", task_degenerate_spectrum},
      {"limit-trig", task_limit_trig},
      {"specfun-selftest", task_specfun_selftest},
  };
  return tasks;
}

}  // namespace

bool TaskOutput::passed() const {
  return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
}

std::string TaskOutput::first_failure() const {
  for (const auto& a : assertions) {
    if (!a.passed) return a.name;
  }
  return {};
}

const std::vector<std::string>& task_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

TaskOutput run_task(const RunConfig& config) {
  const auto& tasks = registry();
  const auto it = tasks.find(config.task);
  if (it == tasks.end()) config_error("unknown task '" + config.task + "'");
  return it->second(config);
}

json summary_json(const RunConfig& config, const TaskOutput& out) {
  json j;
  j["task"] = config.task;
  j["config"] = config.resolved;
  j["passed"] = out.passed();
  json assertions = json::array();
  for (const auto& a : out.assertions) {
    assertions.push_back({{"name", a.name},
                          {"passed", a.passed},
                          {"value", a.value},
                          {"threshold", a.threshold},
                          {"relation", a.relation}});
  }
  j["assertions"] = assertions;
  j["results"] = out.results;
  return j;
}

void write_outputs(const RunConfig& config, const TaskOutput& out, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorKind::ComputationFailed, "cannot create output directory " + dir.string());
  write_file(dir / (config.task + ".csv"), out.table.str());
  write_file(dir / (config.task + ".json"), summary_json(config, out).dump(2) + "\n");
}

}  // namespace qes::cli
