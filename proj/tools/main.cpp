#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "scenarios.hpp"
#include "symloop/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Run a named loop-group scenario and write a JSON report with CSV artifacts."};
  std::string scenario, config_path, out_dir;
  std::uint64_t seed = 1;
  double tol_scale = 1.0;
  std::string names;
  for (const char* s : symloop::cli::kScenarioNames) names += names.empty() ? s : std::string(" | ") + s;
  app.add_option("--scenario", scenario, names);
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (default symloop-out)");
  app.add_option("--seed", seed, "seed for randomized scenarios");
  app.add_option("--tol-scale", tol_scale, "multiplier on every upper tolerance")->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    symloop::cli::ScenarioConfig config;
    if (!config_path.empty()) config = symloop::cli::load_config(config_path);
    if (app.count("--scenario")) config.scenario = scenario;
    if (app.count("--out")) config.out_dir = out_dir;
    if (app.count("--seed")) config.seed = seed;
    if (app.count("--tol-scale")) config.tol_scale = tol_scale;
    if (config.scenario.empty()) {
      std::fprintf(stderr, "error: no scenario given (--scenario or \"scenario\" in the config)\n");
      return 2;
    }

    const auto report = symloop::cli::run_scenario(config);
    for (const auto& c : report.checks)
      std::printf("%-4s %-48s %.3e %s %.1e\n", c.pass ? "ok" : "FAIL", c.name.c_str(), c.measured,
                  c.lower_bound ? ">" : "<", c.tol);
    std::printf("%s: %s (%zu checks, report in %s/report.json)\n", report.scenario.c_str(),
                report.pass() ? "pass" : "FAIL", report.checks.size(), config.out_dir.c_str());
    return report.pass() ? 0 : 1;
  } catch (const symloop::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    const auto code = e.code();
    return code == symloop::ErrorCode::ConfigError || code == symloop::ErrorCode::IoError ? 2 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
