#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "qes/cli/config.hpp"
#include "qes/cli/output.hpp"
#include "qes/cli/tasks.hpp"
#include "qes/errors.hpp"

using namespace qes;
using namespace qes::cli;

namespace {

ErrorKind kind_of(const std::string& text) {
  try {
    (void)resolve_config(read_config_string(text));
  } catch (const qes::Error& e) {
    return e.kind();
  }
  return ErrorKind::ComputationFailed;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(QES_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string config_path(const std::string& name) { return std::string(QES_CONFIG_DIR) + "/" + name; }

}  // namespace

TEST_CASE("complex literals") {
  CHECK(parse_complex("1.5") == cplx(1.5, 0.0));
  CHECK(parse_complex("2i") == cplx(0.0, 2.0));
  CHECK(parse_complex("i") == cplx(0.0, 1.0));
  CHECK(parse_complex("-i") == cplx(0.0, -1.0));
  CHECK(parse_complex("0.1+1.1i") == cplx(0.1, 1.1));
  CHECK(parse_complex("-0.5-0.2i") == cplx(-0.5, -0.2));
  CHECK(parse_complex(" 1e-3+2e-1i ") == cplx(1e-3, 0.2));
  CHECK_THROWS_AS(parse_complex("1+"), qes::Error);
  CHECK_THROWS_AS(parse_complex("abc"), qes::Error);
  CHECK_THROWS_AS(parse_complex(""), qes::Error);
}

TEST_CASE("config parsing") {
  const auto cfg = resolve_config(read_config_string(
      "# comment\n[run]\ntask = dims\nseed = 7\n\n[model]\nn = 3\nl = 2/3\ntau = 0.3+1.1i\n"));
  CHECK(cfg.task == "dims");
  CHECK(cfg.seed == 7);
  CHECK(cfg.N == 3);
  CHECK(cfg.l == Rational(2, 3));
  CHECK(cfg.li[0] == Rational(1, 5));
  CHECK(cfg.tau == cplx(0.3, 1.1));
  CHECK(cfg.kappas.size() == 4);
  CHECK(cfg.resolved.at("model").at("l") == "2/3");
  CHECK(cfg.resolved.at("run").at("tol") == "1e-8");

  CHECK(kind_of("[run]\ntsk = dims\n") == ErrorKind::ConfigError);
  CHECK(kind_of("[nowhere]\ntask = dims\n") == ErrorKind::ConfigError);
  CHECK(kind_of("task = dims\n") == ErrorKind::ConfigError);
  CHECK(kind_of("[run]\ntask\n") == ErrorKind::ConfigError);
  CHECK(kind_of("[model]\nl = x/3\n") == ErrorKind::ConfigError);
  CHECK(kind_of("[model]\ntau = -1i\n") == ErrorKind::ConfigError);
  CHECK(kind_of("[gauge]\npolicy = sometimes\n") == ErrorKind::ConfigError);
}

TEST_CASE("csv output") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_escape("two\nlines") == "\"two\nlines\"");

  CsvTable t({"name", "value"}, {"", "1"});
  t.add_row({"x,y", "0.5"});
  CHECK(t.rows() == 1);
  CHECK(t.str() == "name,value\r\n,1\r\n\"x,y\",0.5\r\n");
  CHECK_THROWS(t.add_row({"only one"}));

  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-20) == "1e-20");
  CHECK(format_complex(cplx(1.5, -2.0)) == "1.5-2i");
  CHECK(format_complex(cplx(0.0, 0.25)) == "0+0.25i");
  CHECK(format_rational(Rational(-3) / 6) == "-1/2");
  CHECK(format_rational(Rational(4)) == "4");
}

TEST_CASE("dims task") {
  auto cfg = resolve_config(read_config_string("[run]\ntask = dims\n[model]\nn = 2\nl = 1\nl0 = 0\nl1 = 0\nl2 = 0\nl3 = 0\n"));
  const auto out = run_task(cfg);
  CHECK(out.results.at("total_dim").get<long>() == 9);
  CHECK(out.passed());
  CHECK(out.first_failure().empty());

  const auto summary = summary_json(cfg, out);
  CHECK(summary.at("task") == "dims");
  CHECK(summary.contains("config"));
  CHECK(summary.contains("assertions"));
}

TEST_CASE("inadmissible gauge is a configuration error") {
  auto cfg = resolve_config(read_config_string(
      "[run]\ntask = verify-invariance\n[model]\nn = 2\nl = 1/3\nl0 = 1/5\nl1 = 2/7\nl2 = 1/2\nl3 = 1/11\n"));
  try {
    (void)run_task(cfg);
    FAIL("expected ConfigError");
  } catch (const qes::Error& e) {
    CHECK(e.kind() == ErrorKind::ConfigError);
    CHECK(std::string(e.what()).find("no admissible gauge choice") != std::string::npos);
  }
  cfg.task = "no-such-task";
  CHECK_THROWS_AS(run_task(cfg), qes::Error);
}

TEST_CASE("binary exit codes") {
  const auto dir = std::filesystem::temp_directory_path() / "qes_cli_exit_codes";
  std::filesystem::remove_all(dir);
  const std::string out = " --out " + dir.string();

  CHECK(run_cli("--config " + config_path("dims.ini") + out) == 0);
  CHECK(std::filesystem::exists(dir / "dims.csv"));
  CHECK(std::filesystem::exists(dir / "dims.json"));

  CHECK(run_cli("--config " + config_path("inadmissible.ini") + out) == 2);
  CHECK(run_cli("--task no-such-task" + out) == 2);
  CHECK(run_cli("--no-such-flag") == 2);
  CHECK(run_cli("" + out) == 2);

  const auto bad = dir / "bad.ini";
  std::ofstream(bad) << "[run]\ntask = dims\nverbosity = 3\n";
  CHECK(run_cli("--config " + bad.string() + out) == 2);

  // An unattainable tolerance turns a passing run into an assertion failure.
  CHECK(run_cli("--config " + config_path("spectrum.ini") + " --tol 1e-300" + out) == 1);
  std::filesystem::remove_all(dir);
}
