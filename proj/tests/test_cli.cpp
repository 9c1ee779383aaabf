#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "cli.hpp"
#include "config.hpp"

namespace fs = std::filesystem;
using hybridop::cli::ConfigError;
using hybridop::cli::ExperimentConfig;
using hybridop::cli::FlagOverrides;
using Json = nlohmann::ordered_json;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hybridop_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::vector<fs::path> config_files() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(HYBRIDOP_CONFIG_DIR)) {
    if (e.path().extension() == ".json") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

int run_config(const fs::path& config, const fs::path& dir, std::string* err_text = nullptr) {
  const std::string command = Json::parse(slurp(config))["command"].get<std::string>();
  std::ostringstream out, err;
  const int code = hybridop::cli::run({command, "--config", config.string(), "--out", dir.string()}, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) files[e.path().filename().string()] = slurp(e.path());
  return files;
}

}  // namespace

TEST(Cli, EveryShippedConfigRunsAndIsDeterministic) {
  const auto configs = config_files();
  ASSERT_GE(configs.size(), 11u);
  for (const auto& config : configs) {
    const std::string stem = config.stem().string();
    const fs::path a = fresh_dir(stem + "_a");
    const fs::path b = fresh_dir(stem + "_b");
    std::string err;
    ASSERT_EQ(run_config(config, a, &err), hybridop::cli::kExitOk) << stem << ": " << err;
    ASSERT_EQ(run_config(config, b), hybridop::cli::kExitOk) << stem;
    const auto first = snapshot(a);
    EXPECT_EQ(first, snapshot(b)) << stem;
    const Json manifest = Json::parse(first.at("manifest.json"));
    for (const auto& art : manifest["artifacts"]) {
      const std::string file = art["file"];
      ASSERT_TRUE(first.count(file)) << stem << " " << file;
      EXPECT_EQ(art["bytes"].get<std::size_t>(), first.at(file).size());
      EXPECT_EQ(art["sha256"], hybridop::cli::sha256_hex(first.at(file)));
    }
    EXPECT_EQ(first.size(), manifest["artifacts"].size() + 1) << stem;
    fs::remove_all(a);
    fs::remove_all(b);
  }
}

TEST(Cli, Sha256KnownAnswer) {
  EXPECT_EQ(hybridop::cli::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Cli, BadConfigReportsFileAndLineAndWritesNothing) {
  const fs::path dir = fresh_dir("bad");
  fs::create_directories(dir);
  const fs::path config = dir / "bad.json";
  std::ofstream(config) << "{\n  \"command\": \"rank\",\n  \"n_grid\": [10, 50],\n  \"bogus\": 1\n}\n";
  const fs::path out = dir / "out";
  std::string err;
  EXPECT_EQ(run_config(config, out, &err), hybridop::cli::kExitConfig);
  EXPECT_NE(err.find("bad.json:4"), std::string::npos) << err;
  EXPECT_FALSE(fs::exists(out / "manifest.json"));
  EXPECT_FALSE(fs::exists(out / "rank.csv"));
  fs::remove_all(dir);
}

TEST(Cli, BadValueAndMalformedJson) {
  const FlagOverrides none;
  try {
    ExperimentConfig::resolve_text("study", "{\n\"deltas\": [0.1,\n -1]\n}", "s.json", none);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.where(), "s.json:2");
  }
  try {
    ExperimentConfig::resolve_text("study", "{\n\"deltas\": [0.1,\n]\n}", "m.json", none);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.where().rfind("m.json:", 0), 0u) << e.what();
  }
  FlagOverrides bad_mode;
  bad_mode.mode = "diagonal";
  try {
    ExperimentConfig::resolve_text("rank", "{}", "x.json", bad_mode);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.where(), "--mode");
  }
  EXPECT_THROW(ExperimentConfig::resolve_text("tikhonov", "{\"L\": 2, \"atoms\": 3}", "a.json", none), ConfigError);
  EXPECT_THROW(ExperimentConfig::resolve_text("certify", "{\"support\": [1, 9], \"n\": 5}", "c.json", none),
               ConfigError);
}

TEST(Cli, UnknownCommandAndMissingFileExitTwo) {
  std::ostringstream out, err;
  EXPECT_EQ(hybridop::cli::run({"frobnicate"}, out, err), hybridop::cli::kExitConfig);
  EXPECT_EQ(hybridop::cli::run({"rank", "--config", "/nonexistent/x.json"}, out, err), hybridop::cli::kExitConfig);
  EXPECT_EQ(hybridop::cli::run({"rank", "--n", "abc"}, out, err), hybridop::cli::kExitConfig);
}

TEST(Cli, EchoRoundTrips) {
  for (const auto& command : ExperimentConfig::commands()) {
    const ExperimentConfig a = ExperimentConfig::resolve_text(command, "{}", "d.json", FlagOverrides{});
    const ExperimentConfig b = ExperimentConfig::resolve_text(command, a.echo().dump(), "e.json", FlagOverrides{});
    EXPECT_EQ(a.echo(), b.echo()) << command;
    EXPECT_EQ(a.echo().begin().key(), "command");
  }
}

TEST(Cli, FlagsOverrideTheFile) {
  FlagOverrides f;
  f.L = 7;
  f.seed = 99;
  const ExperimentConfig c = ExperimentConfig::resolve_text("tikhonov", "{\"L\": 4, \"seed\": 3}", "f.json", f);
  EXPECT_EQ(c.size("L"), 7u);
  EXPECT_EQ(c.seed(), 99u);
}

TEST(Cli, OutputEnvironmentVariable) {
  const fs::path dir = fresh_dir("env");
  ::setenv(hybridop::cli::kOutEnv, dir.string().c_str(), 1);
  std::ostringstream out, err;
  const int code = hybridop::cli::run({"classify"}, out, err);
  ::unsetenv(hybridop::cli::kOutEnv);
  ASSERT_EQ(code, hybridop::cli::kExitOk) << err.str();
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
  EXPECT_TRUE(fs::exists(dir / "classification.json"));
  fs::remove_all(dir);
}

TEST(Cli, RankArtifactIsConstantlyTwo) {
  const fs::path dir = fresh_dir("rank");
  ASSERT_EQ(run_config(fs::path(HYBRIDOP_CONFIG_DIR) / "rank.json", dir), 0);
  std::istringstream is(slurp(dir / "rank.csv"));
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "n,m,rank");
  int rows = 0;
  while (std::getline(is, line)) {
    EXPECT_EQ(line.substr(line.rfind(',') + 1), "2") << line;
    ++rows;
  }
  EXPECT_EQ(rows, 3);
  fs::remove_all(dir);
}

TEST(Cli, NumericalFailureExitsThree) {
  const fs::path dir = fresh_dir("budget");
  std::ostringstream out, err;
  const fs::path config = fs::temp_directory_path() / "hybridop_budget.json";
  std::ofstream(config) << "{\"command\": \"select\", \"mode\": \"no-singleton\", \"L\": 4, \"budget\": 10}";
  EXPECT_EQ(hybridop::cli::run({"select", "--config", config.string(), "--out", dir.string()}, out, err),
            hybridop::cli::kExitNumerical)
      << err.str();
  EXPECT_FALSE(fs::exists(dir / "manifest.json"));
  fs::remove(config);
  fs::remove_all(dir);
}
