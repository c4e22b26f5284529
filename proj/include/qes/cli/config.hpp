#ifndef QES_CLI_CONFIG_HPP
#define QES_CLI_CONFIG_HPP

// INI-style run configuration. Every key has a default; unknown sections or
// keys are rejected. Exact couplings are read as "p/q" strings, complex
// numbers as "a+bi".

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qes/ring.hpp"

namespace qes::cli {

using RawConfig = std::map<std::string, std::map<std::string, std::string>>;

enum class GaugePolicy { First, Explicit, Degree, L2 };

struct RunConfig {
  // [run]
  std::string task;
  std::uint64_t seed = 1;
  double tol = 1e-8;
  std::size_t points = 0;  // 0: chosen from the basis dimension

  // [model]
  int N = 2;
  Rational l;
  std::array<Rational, 4> li{};
  cplx tau{0.0, 1.3};
  std::optional<double> nome;
  int series_terms = 64;

  // [gauge]
  GaugePolicy policy = GaugePolicy::First;
  std::optional<Rational> gauge_a;
  std::array<std::optional<Rational>, 4> gauge_b{};
  std::optional<int> gauge_degree;

  // [ruijsenaars]
  cplx kappa;
  cplx mu;
  std::array<cplx, 4> nu{};
  std::array<cplx, 4> nubar{};
  int theta_level = 2;
  bool solve_level = true;

  // [limit]
  std::vector<double> kappas;
  std::string pairing;  // printed, untwisted or both
  Rational limit_a;
  std::array<Rational, 4> limit_b{};
  std::vector<cplx> limit_x;
  std::vector<cplx> limit_xp;
  std::vector<cplx> test_exponents;

  // [degenerate]
  Rational a_tilde;
  Rational b_tilde;
  std::optional<Rational> c1;
  std::optional<Rational> c2;
  std::vector<Rational> nomes;
  std::vector<double> trig_x;
  std::vector<double> trig_xp;

  /// Every key with its resolved string value, defaults included.
  RawConfig resolved;
};

/// Parses INI text. Throws ConfigError on syntax errors.
RawConfig read_config_string(const std::string& text);
RawConfig read_config_file(const std::string& path);

/// Fills defaults, rejects unknown keys and parses every value. Throws ConfigError.
RunConfig resolve_config(const RawConfig& raw);

/// "1.5", "2i", "0.1+1.1i", "-0.5-0.2i", "i".
cplx parse_complex(const std::string& text);

}  // namespace qes::cli

#endif
