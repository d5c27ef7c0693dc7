#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dimlab/geometry.hpp"
#include "dimlab/oracles.hpp"

namespace dimlab {

struct TaskConfig {
  enum class Type { box, assouad, intermediate, capacity_profile, fourier, sweep, check };
  Type type = Type::box;
  std::string name;  // file stem, defaults to "<index>_<type>"
  nlohmann::json params = nlohmann::json::object();
};

const char* to_string(TaskConfig::Type type);

/// One multi-task experiment on one generated cloud.
struct RunConfig {
  GeneratorSpec generator;
  std::optional<Example> example;  // set when the config names a canonical example
  std::vector<TaskConfig> tasks;
  std::vector<double> theta_grid;
  std::optional<std::uint64_t> seed;
  std::string output_dir = ".";
  Slacks slacks;
  nlohmann::json source;  // the parsed file, echoed into the summary

  /// Validates; messages name the offending field.
  static RunConfig parse(const nlohmann::json& j);
  nlohmann::json effective() const;
};

/// FNV-1a of the compact dump of the effective config.
std::uint64_t config_hash(const RunConfig& cfg);

struct RunResult {
  int exit_code = 0;  // 0 ok, 2 a check failed, 1 error
  nlohmann::json summary;
  std::vector<std::string> files;
};

/// Runs the tasks in order and writes one CSV per curve plus summary.json
/// into cfg.output_dir. Progress goes to `log` when given.
RunResult run(const RunConfig& cfg, std::ostream* log = nullptr);

/// Closed forms and expected values of a canonical example.
std::string describe(const std::string& example_id);

}  // namespace dimlab
