#ifndef QES_CLI_TASKS_HPP
#define QES_CLI_TASKS_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qes/cli/config.hpp"
#include "qes/cli/output.hpp"

namespace qes::cli {

struct Assertion {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<", ">", "==", ">="
};

struct TaskOutput {
  CsvTable table;
  nlohmann::json results = nlohmann::json::object();
  std::vector<Assertion> assertions;

  bool passed() const;
  /// Name of the first failed assertion, empty when all passed.
  std::string first_failure() const;
};

const std::vector<std::string>& task_names();

/// Runs one task. Throws ConfigError for unknown tasks or unusable
/// configurations and library errors for failed computations.
TaskOutput run_task(const RunConfig& config);

/// The JSON summary: task, resolved config, assertions and results.
nlohmann::json summary_json(const RunConfig& config, const TaskOutput& out);

/// Writes <task>.csv and <task>.json into dir, creating it if needed.
void write_outputs(const RunConfig& config, const TaskOutput& out, const std::filesystem::path& dir);

}  // namespace qes::cli

#endif
