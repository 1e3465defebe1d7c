#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace symloop::cli {

inline constexpr const char* kScenarioNames[] = {"factor",    "run-potential", "decompose", "diff-check",
                                                 "clifford",  "f111",          "veronese"};

struct ScenarioConfig {
  std::string scenario;
  nlohmann::json params = nlohmann::json::object();  // scenario-specific keys
  std::string out_dir = "symloop-out";
  std::uint64_t seed = 1;
  double tol_scale = 1.0;
  std::string base_dir = ".";  // relative input paths resolve against this
};

struct CheckRecord {
  std::string name;
  double measured = 0.0;
  double tol = 0.0;
  bool lower_bound = false;  // pass means measured > tol instead of measured < tol
  bool pass = false;
};

struct Report {
  std::string scenario;
  nlohmann::json config;
  std::vector<CheckRecord> checks;
  nlohmann::json results = nlohmann::json::object();
  std::vector<std::string> artifacts;
  double seconds = 0.0;

  bool pass() const;
  nlohmann::ordered_json to_json() const;
};

// Reads a config file: {"scenario": name, "seed": u64, "tol_scale": x, "out": dir, ...scenario keys}.
ScenarioConfig load_config(const std::string& path);

// Runs the named pipeline, writes report.json and the CSV/JSON artifacts into
// config.out_dir and returns the report. Throws Error(ConfigError) on bad
// parameters; module failures propagate with the scenario name prefixed.
Report run_scenario(const ScenarioConfig& config);

}  // namespace symloop::cli
