#include <gtest/gtest.h>

#include <filesystem>

#include "scenarios.hpp"
#include "symloop/error.hpp"
#include "symloop/serialization.hpp"

namespace {

using namespace symloop;
using cli::ScenarioConfig;
namespace fs = std::filesystem;

std::string fixture(const std::string& name) { return std::string(SYMLOOP_FIXTURE_DIR) + "/" + name; }

class ScenarioTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("symloop_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  ScenarioConfig config(const std::string& scenario, const std::string& sub = "out") const {
    ScenarioConfig c;
    c.scenario = scenario;
    c.out_dir = (dir_ / sub).string();
    return c;
  }

  fs::path dir_;
};

std::string without_timing(const std::string& report) {
  const auto pos = report.find("\"timing\"");
  return report.substr(0, pos);
}

TEST_F(ScenarioTest, F111DefaultsPass) {
  const auto r = cli::run_scenario(config("f111"));
  EXPECT_TRUE(r.pass());
  std::vector<std::string> names;
  for (const auto& c : r.checks) names.push_back(c.name);
  for (const std::string want : {"xi_j entries", "xi tilde entries", "condition (i)", "condition (ii)", "condition (iii)"})
    EXPECT_NE(std::find(names.begin(), names.end(), want), names.end()) << want;
  EXPECT_TRUE(fs::exists(dir_ / "out" / "report.json"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "xi_tilde.json"));
}

TEST_F(ScenarioTest, FactorIdentityFile) {
  auto c = config("factor");
  c.params["loop"] = fixture("identity_loop.json");
  const auto r = cli::run_scenario(c);
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(io::read_loop((dir_ / "out" / "phi.json").string()).coefficient_distance(identity_loop(2)), 0.0);
}

TEST_F(ScenarioTest, DecomposeSeededIsDeterministic) {
  auto a = config("decompose", "a");
  auto b = config("decompose", "b");
  a.seed = b.seed = 12345;
  EXPECT_TRUE(cli::run_scenario(a).pass());
  EXPECT_TRUE(cli::run_scenario(b).pass());
  for (const std::string f : {"phi.json", "decomposition.json"})
    EXPECT_EQ(io::read_text((dir_ / "a" / f).string()), io::read_text((dir_ / "b" / f).string())) << f;
  EXPECT_EQ(without_timing(io::read_text((dir_ / "a" / "report.json").string())),
            without_timing(io::read_text((dir_ / "b" / "report.json").string())));
}

TEST_F(ScenarioTest, ToleranceScaleCanFail) {
  auto c = config("clifford");
  c.tol_scale = 1e-40;
  EXPECT_FALSE(cli::run_scenario(c).pass());
}

TEST_F(ScenarioTest, ConfigErrors) {
  auto expect_config_error = [](const ScenarioConfig& c) {
    try {
      cli::run_scenario(c);
      ADD_FAILURE() << c.scenario << " " << c.params.dump();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ConfigError) << e.what();
    }
  };
  expect_config_error(config("no-such-scenario"));
  auto c = config("decompose");
  c.params["n"] = 3;
  c.params["k"] = 5;
  expect_config_error(c);
  c = config("clifford");
  c.params["unexpected"] = true;
  expect_config_error(c);
  c = config("veronese");
  c.params["grid"] = {{"nx", 0}};
  expect_config_error(c);
  c = config("factor");
  c.params["n"] = "two";
  expect_config_error(c);
}

TEST_F(ScenarioTest, UnreadableInputIsIoError) {
  auto c = config("factor");
  c.params["loop"] = (dir_ / "missing.json").string();
  try {
    cli::run_scenario(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
}

TEST_F(ScenarioTest, LoadConfigResolvesRelativePaths) {
  fs::create_directories(dir_);
  fs::copy_file(fixture("identity_loop.json"), dir_ / "g.json");
  io::write_text((dir_ / "run.json").string(), R"({"scenario": "factor", "seed": 9, "loop": "g.json"})");
  ScenarioConfig c = cli::load_config((dir_ / "run.json").string());
  EXPECT_EQ(c.scenario, "factor");
  EXPECT_EQ(c.seed, 9u);
  EXPECT_FALSE(c.params.contains("scenario"));
  c.out_dir = (dir_ / "out").string();
  EXPECT_TRUE(cli::run_scenario(c).pass());
}

}  // namespace
