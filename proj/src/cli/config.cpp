#include "qes/cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <fmt/format.h>

#include <fstream>
#include <sstream>

#include "qes/errors.hpp"

namespace qes::cli {

namespace {

struct KeySpec {
  const char* section;
  const char* key;
  const char* fallback;
};

// Defaults: N = 2 couplings with an admissible degree-1 gauge, the
// Ruijsenaars and limit prototypes, and the N = 1, L = 1 trigonometric limit.
constexpr KeySpec kKeys[] = {
    {"run", "task", ""},
    {"run", "seed", "1"},
    {"run", "tol", "1e-8"},
    {"run", "points", "0"},
    {"model", "n", "2"},
    {"model", "l", "1/3"},
    {"model", "l0", "1/5"},
    {"model", "l1", "2/7"},
    {"model", "l2", "1/2"},
    {"model", "l3", "73/210"},
    {"model", "tau", "1.3i"},
    {"model", "nome", ""},
    {"model", "series_terms", "64"},
    {"gauge", "policy", "first"},
    {"gauge", "a", ""},
    {"gauge", "b0", ""},
    {"gauge", "b1", ""},
    {"gauge", "b2", ""},
    {"gauge", "b3", ""},
    {"gauge", "degree", ""},
    {"ruijsenaars", "kappa", "0.31+0.07i"},
    {"ruijsenaars", "mu", "0.4+0.05i"},
    {"ruijsenaars", "nu0", "0.13+0.02i"},
    {"ruijsenaars", "nu1", "0.21-0.03i"},
    {"ruijsenaars", "nu2", "-0.07+0.04i"},
    {"ruijsenaars", "nu3", "0.11+0.01i"},
    {"ruijsenaars", "nubar0", "0.05+0.03i"},
    {"ruijsenaars", "nubar1", "-0.12+0.02i"},
    {"ruijsenaars", "nubar2", "0.17-0.01i"},
    {"ruijsenaars", "nubar3", "0"},
    {"ruijsenaars", "k", "2"},
    {"ruijsenaars", "solve_level", "true"},
    {"limit", "kappas", "0.1,0.05,0.025,0.0125"},
    {"limit", "pairing", "both"},
    {"limit", "a", "2/5"},
    {"limit", "b0", "3/10"},
    {"limit", "b1", "-9/20"},
    {"limit", "b2", "7/10"},
    {"limit", "b3", "1/4"},
    {"limit", "x", "0.31+0.12i"},
    {"limit", "xp", "0.17+0.21i"},
    {"limit", "exponents", "0.3,1.1i"},
    {"degenerate", "a_tilde", "1"},
    {"degenerate", "b_tilde", "2"},
    {"degenerate", "c1", ""},
    {"degenerate", "c2", ""},
    {"degenerate", "nomes", "1/100,1/1000,1/10000"},
    {"degenerate", "x", "0.21"},
    {"degenerate", "xp", "0.37"},
};

[[noreturn]] void config_error(const std::string& message) { fail(ErrorKind::ConfigError, message); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_real(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) config_error(fmt::format("{}: trailing characters in '{}'", where, text));
    return v;
  } catch (const std::invalid_argument&) {
    config_error(fmt::format("{}: not a number: '{}'", where, text));
  } catch (const std::out_of_range&) {
    config_error(fmt::format("{}: out of range: '{}'", where, text));
  }
}

long long parse_integer(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) config_error(fmt::format("{}: not an integer: '{}'", where, text));
    return v;
  } catch (const std::logic_error&) {
    config_error(fmt::format("{}: not an integer: '{}'", where, text));
  }
}

Rational rational_at(const std::string& text, const std::string& where) {
  try {
    return parse_rational(text);
  } catch (const Error& e) {
    config_error(fmt::format("{}: {}", where, e.what()));
  } catch (const std::exception&) {
    config_error(fmt::format("{}: malformed rational '{}'", where, text));
  }
}

cplx complex_at(const std::string& text, const std::string& where) {
  try {
    return parse_complex(text);
  } catch (const Error& e) {
    config_error(fmt::format("{}: {}", where, e.what()));
  }
}

bool parse_bool(const std::string& text, const std::string& where) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  config_error(fmt::format("{}: expected true or false, got '{}'", where, text));
}

}  // namespace

cplx parse_complex(const std::string& raw) {
  std::string text;
  for (char c : raw) {
    if (c != ' ' && c != '\t') text += c;
  }
  if (text.empty()) fail(ErrorKind::ConfigError, "empty complex number");
  if (text.back() != 'i') return {parse_real(text, "complex"), 0.0};
  text.pop_back();
  // Split at the last sign that is not leading and not an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t i = text.size(); i-- > 1;) {
    if ((text[i] == '+' || text[i] == '-') && text[i - 1] != 'e' && text[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  const std::string re = split == std::string::npos ? "" : text.substr(0, split);
  std::string im = split == std::string::npos ? text : text.substr(split);
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  return {re.empty() ? 0.0 : parse_real(re, "complex"), parse_real(im, "complex")};
}

RawConfig read_config_string(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    config_error(fmt::format("config syntax error at line {}: {}", e.line(), e.message()));
  }
  RawConfig raw;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) config_error(fmt::format("key '{}' outside a section", section));
    for (const auto& [key, value] : body) {
      if (!value.empty()) config_error(fmt::format("nested key under {}.{}", section, key));
      raw[section][key] = trim(value.data());
    }
  }
  return raw;
}

RawConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot read config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return read_config_string(buffer.str());
}

RunConfig resolve_config(const RawConfig& raw) {
  for (const auto& [section, keys] : raw) {
    for (const auto& [key, value] : keys) {
      bool known = false;
      for (const auto& spec : kKeys) known = known || (section == spec.section && key == spec.key);
      if (!known) config_error(fmt::format("unknown config key {}.{}", section, key));
    }
  }
  RunConfig c;
  for (const auto& spec : kKeys) {
    std::string value = spec.fallback;
    if (auto s = raw.find(spec.section); s != raw.end()) {
      if (auto k = s->second.find(spec.key); k != s->second.end()) value = k->second;
    }
    c.resolved[spec.section][spec.key] = value;
  }
  auto get = [&](const char* section, const char* key) -> const std::string& { return c.resolved[section][key]; };
  auto where = [](const char* section, const char* key) { return fmt::format("{}.{}", section, key); };
  auto rational = [&](const char* section, const char* key) {
    return rational_at(get(section, key), where(section, key));
  };
  auto optional_rational = [&](const char* section, const char* key) -> std::optional<Rational> {
    if (get(section, key).empty()) return std::nullopt;
    return rational(section, key);
  };
  auto complex = [&](const char* section, const char* key) { return complex_at(get(section, key), where(section, key)); };

  c.task = get("run", "task");
  {
    const long long seed = parse_integer(get("run", "seed"), "run.seed");
    if (seed < 0) config_error("run.seed must be non-negative");
    c.seed = static_cast<std::uint64_t>(seed);
  }
  c.tol = parse_real(get("run", "tol"), "run.tol");
  if (!(c.tol > 0.0)) config_error("run.tol must be positive");
  {
    const long long points = parse_integer(get("run", "points"), "run.points");
    if (points < 0) config_error("run.points must be non-negative");
    c.points = static_cast<std::size_t>(points);
  }

  const long long n = parse_integer(get("model", "n"), "model.n");
  if (n < 1 || n > 4) config_error("model.n must be 1..4");
  c.N = static_cast<int>(n);
  c.l = rational("model", "l");
  const char* lkeys[] = {"l0", "l1", "l2", "l3"};
  for (int i = 0; i < 4; ++i) c.li[static_cast<std::size_t>(i)] = rational("model", lkeys[i]);
  c.tau = complex("model", "tau");
  if (!get("model", "nome").empty()) {
    c.nome = parse_real(get("model", "nome"), "model.nome");
    if (!(*c.nome > 0.0 && *c.nome < 1.0)) config_error("model.nome must lie in (0,1)");
  } else if (!(c.tau.imag() > 0.0)) {
    config_error("model.tau must have positive imaginary part");
  }
  const long long terms = parse_integer(get("model", "series_terms"), "model.series_terms");
  if (terms < 8 || terms > 4096) config_error("model.series_terms must be 8..4096");
  c.series_terms = static_cast<int>(terms);

  const std::string& policy = get("gauge", "policy");
  if (policy == "first") {
    c.policy = GaugePolicy::First;
  } else if (policy == "explicit") {
    c.policy = GaugePolicy::Explicit;
  } else if (policy == "degree") {
    c.policy = GaugePolicy::Degree;
  } else if (policy == "l2") {
    c.policy = GaugePolicy::L2;
  } else {
    config_error("gauge.policy must be first, explicit, degree or l2");
  }
  c.gauge_a = optional_rational("gauge", "a");
  const char* bkeys[] = {"b0", "b1", "b2", "b3"};
  for (int i = 0; i < 4; ++i) c.gauge_b[static_cast<std::size_t>(i)] = optional_rational("gauge", bkeys[i]);
  if (!get("gauge", "degree").empty()) {
    c.gauge_degree = static_cast<int>(parse_integer(get("gauge", "degree"), "gauge.degree"));
  }
  if (c.policy == GaugePolicy::Explicit) {
    if (!c.gauge_a) config_error("gauge.policy = explicit requires gauge.a");
    for (int i = 0; i < 4; ++i) {
      if (!c.gauge_b[static_cast<std::size_t>(i)]) config_error(fmt::format("gauge.policy = explicit requires gauge.b{}", i));
    }
  }
  if (c.policy == GaugePolicy::Degree && !c.gauge_degree) config_error("gauge.policy = degree requires gauge.degree");

  c.kappa = complex("ruijsenaars", "kappa");
  if (c.kappa == cplx(0.0)) config_error("ruijsenaars.kappa must be nonzero");
  c.mu = complex("ruijsenaars", "mu");
  const char* nukeys[] = {"nu0", "nu1", "nu2", "nu3"};
  const char* nubarkeys[] = {"nubar0", "nubar1", "nubar2", "nubar3"};
  for (int r = 0; r < 4; ++r) {
    c.nu[static_cast<std::size_t>(r)] = complex("ruijsenaars", nukeys[r]);
    c.nubar[static_cast<std::size_t>(r)] = complex("ruijsenaars", nubarkeys[r]);
  }
  const long long k = parse_integer(get("ruijsenaars", "k"), "ruijsenaars.k");
  if (k < 0 || k % 2 != 0) config_error("ruijsenaars.k must be a non-negative even integer");
  c.theta_level = static_cast<int>(k);
  c.solve_level = parse_bool(get("ruijsenaars", "solve_level"), "ruijsenaars.solve_level");

  for (const auto& item : split_list(get("limit", "kappas"))) c.kappas.push_back(parse_real(item, "limit.kappas"));
  if (c.kappas.size() < 2) config_error("limit.kappas needs at least two values");
  c.pairing = get("limit", "pairing");
  if (c.pairing != "printed" && c.pairing != "untwisted" && c.pairing != "both") {
    config_error("limit.pairing must be printed, untwisted or both");
  }
  c.limit_a = rational("limit", "a");
  for (int i = 0; i < 4; ++i) c.limit_b[static_cast<std::size_t>(i)] = rational("limit", bkeys[i]);
  for (const auto& item : split_list(get("limit", "x"))) c.limit_x.push_back(complex_at(item, "limit.x"));
  for (const auto& item : split_list(get("limit", "xp"))) c.limit_xp.push_back(complex_at(item, "limit.xp"));
  for (const auto& item : split_list(get("limit", "exponents"))) {
    c.test_exponents.push_back(complex_at(item, "limit.exponents"));
  }
  if (c.test_exponents.empty()) config_error("limit.exponents must not be empty");

  c.a_tilde = rational("degenerate", "a_tilde");
  c.b_tilde = rational("degenerate", "b_tilde");
  c.c1 = optional_rational("degenerate", "c1");
  c.c2 = optional_rational("degenerate", "c2");
  for (const auto& item : split_list(get("degenerate", "nomes"))) c.nomes.push_back(rational_at(item, "degenerate.nomes"));
  for (const auto& item : split_list(get("degenerate", "x"))) c.trig_x.push_back(parse_real(item, "degenerate.x"));
  for (const auto& item : split_list(get("degenerate", "xp"))) c.trig_xp.push_back(parse_real(item, "degenerate.xp"));
  return c;
}

}  // namespace qes::cli
