// Copyright 2026 The cvqubit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "cvqubit/config.hpp"
#include "cvqubit/output.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd =
      env + " '" + CVQUBIT_CLI_PATH + "' " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 512> buf{};
  while (fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    root_ = fs::temp_directory_path() / fmt_name(info->name());
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  static std::string fmt_name(const std::string& test) {
    return "cvqubit_cli_" + test + "_" + std::to_string(::getpid());
  }

  fs::path write_config(const std::string& name, const std::string& text) {
    const auto p = root_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path root_;
};

constexpr const char* kSmallTomography =
    "--params tomography.samples_per_phase=50 tomography.bootstrap_resamples=8 "
    "tomography.max_iters=300";

TEST_F(Cli, StatePrintsOnlyManifestPath) {
  const auto out = root_ / "state";
  const auto r = run("state --out '" + out.string() +
                     "' --params analysis.map_theta_points=19 analysis.map_phi_points=37 "
                     "analysis.grid_points=61");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, (out / "manifest.json").string() + "\n");
  const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  EXPECT_EQ(manifest["command"], "state");
  EXPECT_EQ(manifest["seed"], 1);
  EXPECT_EQ(manifest["config_hash"].get<std::string>().size(), 64u);
  for (const auto& entry : manifest["outputs"]) {
    const auto file = out / entry["path"].get<std::string>();
    ASSERT_TRUE(fs::exists(file)) << file;
    EXPECT_EQ(entry["sha256"], cvq::sha256_hex(slurp(file)));
  }
  const auto map = cvq::read_bloch_binary((out / "bloch_map.bin").string());
  EXPECT_EQ(map.theta.size(), 19u);
  EXPECT_EQ(map.phi.size(), 37u);
  EXPECT_EQ(map.values.size(), 19u * 37u);
  const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
  EXPECT_LT(summary["w_origin"].get<double>(), 0.0);
}

TEST_F(Cli, ConfigErrorsExitTwo) {
  const auto bad = write_config("bad.yaml", "schema_version: 1\nexperiment:\n  T_t: 1.2\n");
  EXPECT_EQ(run("state --config '" + bad.string() + "' --out '" + root_.string() + "'").code, 2);
  EXPECT_EQ(run("state --params experiment.nope=1 --out '" + root_.string() + "'").code, 2);
  EXPECT_EQ(run("sweep --params experiment.epsilon_over_gamma=1.2 --out '" +
                root_.string() + "'").code, 2);
  EXPECT_EQ(run("state --config '" + (root_ / "missing.yaml").string() + "'").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("").code, 2);
  const auto help = run("--help");
  EXPECT_EQ(help.code, 0);
}

TEST_F(Cli, DefaultOutputDirFromEnvironment) {
  const auto out = root_ / "from_env";
  const auto r = run("sweep --params sweep.ratios=[1] sweep.theta_points=10 sweep.phi_points=9",
                     std::string("CVQUBIT_OUT_DIR='") + out.string() + "'");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, (out / "manifest.json").string() + "\n");
  EXPECT_TRUE(fs::exists(out / "sweep.csv"));
}

TEST_F(Cli, SweepTable) {
  const auto cfg = write_config("sweep.yaml", R"(schema_version: 1
sweep:
  ratios: [0, 1, inf]
  theta_points: 46
  phi_points: 37
)");
  const auto out = root_ / "sweep";
  ASSERT_EQ(run("sweep --config '" + cfg.string() + "' --out '" + out.string() + "'").code, 0);
  std::istringstream csv(slurp(out / "sweep.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "ratio,theta_ideal_deg,theta_model_deg,fidelity_at_target,fidelity_max");
  std::vector<std::array<double, 5>> rows;
  while (std::getline(csv, line)) {
    std::array<double, 5> row{};
    std::istringstream fields(line);
    std::string field;
    for (auto& v : row) {
      std::getline(fields, field, ',');
      v = field == "inf" ? std::numeric_limits<double>::infinity() : std::stod(field);
    }
    rows.push_back(row);
  }
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_DOUBLE_EQ(rows[0][1], 180.0);
  EXPECT_NEAR(rows[1][1], 90.0, 1e-12);
  EXPECT_DOUBLE_EQ(rows[2][1], 0.0);
  EXPECT_LT(rows[1][2], rows[1][1] - 0.5);
  EXPECT_GT(rows[1][2], 45.0);
  for (const auto& row : rows) EXPECT_GE(row[4] + 1e-12, row[3]);
}

TEST_F(Cli, TomographyIsReproducibleAndFlagsSmallSamples) {
  const auto a = root_ / "a";
  const auto b = root_ / "b";
  const auto c = root_ / "c";
  const std::string common = std::string(" ") + kSmallTomography;
  ASSERT_EQ(run("tomography --seed 7 --out '" + a.string() + "'" + common).code, 0);
  ASSERT_EQ(run("tomography --seed 7 --out '" + b.string() + "'" + common).code, 0);
  ASSERT_EQ(run("tomography --seed 8 --out '" + c.string() + "'" + common).code, 0);
  EXPECT_EQ(slurp(a / "dataset.csv"), slurp(b / "dataset.csv"));
  EXPECT_EQ(slurp(a / "rho.csv"), slurp(b / "rho.csv"));
  EXPECT_NE(slurp(a / "dataset.csv"), slurp(c / "dataset.csv"));

  const auto data = cvq::read_dataset_csv((a / "dataset.csv").string());
  EXPECT_EQ(data.records.size(), 600u);
  const auto report = nlohmann::json::parse(slurp(a / "report.json"));
  EXPECT_TRUE(report["high_statistical_uncertainty"].get<bool>());
  EXPECT_GT(report["fidelity"].get<double>(), 0.5);
  const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
  EXPECT_EQ(manifest["seed"], 7);
}

TEST(ShippedConfigs, LoadAndMatchDefaults) {
  const fs::path dir = fs::path(CVQUBIT_SOURCE_DIR) / "configs";
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".yaml") continue;
    EXPECT_NO_THROW(cvq::load_config(entry.path().string())) << entry.path();
    ++seen;
  }
  EXPECT_GT(seen, 0);
  EXPECT_EQ(cvq::load_config((dir / "defaults.yaml").string()).hash(),
            cvq::default_config().hash());
}

}  // namespace
