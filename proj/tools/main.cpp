// qes: runs one verification or spectrum task from an INI config and writes
// <task>.csv and <task>.json. Exit codes: 0 all assertions passed, 1
// computation failed or an assertion failed, 2 configuration error.

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "qes/cli/config.hpp"
#include "qes/cli/tasks.hpp"
#include "qes/errors.hpp"
#include "qes/parallel.hpp"

namespace {

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("qes");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* env = std::getenv("QES_LOG");
  const std::string level = env ? env : "info";
  if (level == "quiet") {
    spdlog::set_level(spdlog::level::off);
  } else if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else {
    spdlog::set_level(spdlog::level::info);
    if (level != "info") spdlog::warn("QES_LOG='{}' not recognised, using info", level);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-exact sectors of the BC_N Inozemtsev model"};
  std::string config_path;
  std::string task;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::optional<double> tol;
  app.add_option("--config", config_path, "INI configuration file");
  app.add_option("--task", task, "task name (overrides run.task)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "random seed (overrides run.seed)");
  app.add_option("--threads", threads, "worker pool cap, 0 for all cores");
  app.add_option("--tol", tol, "assertion tolerance (overrides run.tol)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  configure_logging();
  qes::set_max_threads(threads);

  qes::cli::RunConfig config;
  try {
    auto raw = config_path.empty() ? qes::cli::RawConfig{} : qes::cli::read_config_file(config_path);
    if (!task.empty()) raw["run"]["task"] = task;
    if (seed) raw["run"]["seed"] = std::to_string(*seed);
    if (tol) raw["run"]["tol"] = fmt::format("{}", *tol);
    config = qes::cli::resolve_config(raw);
    if (config.task.empty()) qes::fail(qes::ErrorKind::ConfigError, "no task given (--task or run.task)");

    const auto out = qes::cli::run_task(config);
    qes::cli::write_outputs(config, out, out_dir);
    for (const auto& a : out.assertions) {
      spdlog::info("{} {}: {} {} {}", a.passed ? "PASS" : "FAIL", a.name, a.value, a.relation, a.threshold);
    }
    if (!out.passed()) {
      std::cerr << "assertion failed: " << out.first_failure() << "\n";
      return 1;
    }
    return 0;
  } catch (const qes::Error& e) {
    if (e.kind() == qes::ErrorKind::ConfigError) {
      std::cerr << e.what() << "\n";
      return 2;
    }
    std::cerr << "computation failed: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "computation failed: " << e.what() << "\n";
    return 1;
  }
}
