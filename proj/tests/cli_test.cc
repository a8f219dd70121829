//
// Copyright 2026 The prunepriv Authors
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
//


#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"
#include "prunepriv/cli/commands.h"
#include "test_util.h"

namespace prunepriv {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out, err;
};

CliRun Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "prunepriv");
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::map<std::string, std::string> Snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream f(e.path(), std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    files[e.path().filename().string()] = ss.str();
  }
  return files;
}

std::string ReadFile(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const std::vector<std::string> kSmallGrid = {
    "--set", "grid.k_list=[0.2,0.8]", "--set", "grid.m_list=[10,40]",
    "--set", "grid.trials=5",         "--set", "grid.d=20"};

const std::vector<std::string> kSmallVerify = {
    "--set", "verify.trunc_samples=100000", "--set", "verify.anti_samples=5000",
    "--set", "verify.folded_trials=20",     "--set", "verify.inner_trials=200",
    "--set", "verify.sens_trials=20",       "--set", "verify.noise_draws=500"};

std::vector<std::string> With(std::vector<std::string> base,
                              const std::vector<std::string>& more) {
  base.insert(base.end(), more.begin(), more.end());
  return base;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(Cli({}).code, kExitUsage);
  EXPECT_EQ(Cli({"no-such-command"}).code, kExitUsage);
  EXPECT_EQ(Cli({"--format", "xml", "verify"}).code, kExitUsage);
  EXPECT_EQ(Cli({"--jobs", "0", "verify"}).code, kExitUsage);
  EXPECT_EQ(Cli({"--help"}).code, kExitOk);
}

TEST(Cli, SchemaViolationFailsBeforeWriting) {
  const fs::path dir = testing::ScratchDir("cli_schema") / "out";
  const CliRun r = Cli({"--out", dir.string(), "--set", "grid.nonsense=1",
                     "closeness-grid"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("grid.nonsense"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir));
  EXPECT_EQ(Cli({"--config", (dir / "missing.json").string(), "verify"}).code,
            kExitUsage);
}

TEST(Cli, RuntimeFailureExitsOne) {
  const fs::path dir = testing::ScratchDir("cli_runtime");
  const CliRun r = Cli({"--out", dir.string(), "--set",
                     "prune.model=" + (dir / "absent.json").string(), "prune"});
  EXPECT_EQ(r.code, kExitRuntime);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, ClosenessGridCsvAndJson) {
  const fs::path dir = testing::ScratchDir("cli_grid");
  ASSERT_EQ(Cli(With({"--out", dir.string(), "--seed", "3"}, With(kSmallGrid, {"closeness-grid"}))).code,
            kExitOk);
  const std::string csv = ReadFile(dir / "grid.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "k,m,mean_err,q_err,satisfied,trials,seed");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  ASSERT_EQ(Cli(With({"--out", dir.string(), "--seed", "3", "--format", "json"},
                     With(kSmallGrid, {"closeness-grid"}))).code,
            kExitOk);
  const auto j = nlohmann::json::parse(ReadFile(dir / "grid.json"));
  ASSERT_EQ(j.size(), 4u);
  EXPECT_EQ(j[0]["k"], 0.2);
  EXPECT_EQ(j[0]["m"], 10);
  EXPECT_EQ(j[0]["seed"], 3);
}

TEST(Cli, VerifyIsDeterministicAcrossJobs) {
  const fs::path a = testing::ScratchDir("cli_verify_a");
  const fs::path b = testing::ScratchDir("cli_verify_b");
  ASSERT_EQ(Cli(With({"--out", a.string(), "--seed", "5", "--jobs", "1"}, With(kSmallVerify, {"verify"}))).code,
            kExitOk);
  ASSERT_EQ(Cli(With({"--out", b.string(), "--seed", "5", "--jobs", "3"}, With(kSmallVerify, {"verify"}))).code,
            kExitOk);
  EXPECT_EQ(Snapshot(a), Snapshot(b));
  const std::string csv = ReadFile(a / "verify.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
}

TEST(Cli, TrainPruneInvertPipeline) {
  const fs::path dir = testing::ScratchDir("cli_pipeline");
  const std::vector<std::string> base{"--out", dir.string(), "--seed", "1"};
  ASSERT_EQ(Cli(With(base, {"--set", "train.t_train=1500", "--set", "train.t_prune=500",
                            "--set", "train.t0=1500", "--set", "train.dt=25",
                            "--set", "train.hidden=[32]", "train"})).code,
            kExitOk);
  const auto summary = nlohmann::json::parse(ReadFile(dir / "train_summary.json"));
  EXPECT_NEAR(summary["layer_sparsity"][0].get<double>(), 0.5, 0.01);
  ASSERT_EQ(Cli(With(base, {"--set", "prune.model=" + (dir / "model.json").string(),
                            "--set", "prune.sparsity=0.8", "prune"})).code,
            kExitOk);
  EXPECT_NE(ReadFile(dir / "prune.csv").find("0.8"), std::string::npos);
  ASSERT_EQ(Cli(With(base, {"--set", "invert.model=" + (dir / "pruned_model.json").string(),
                            "--set", "invert.digit=4", "--set",
                            "invert.inversion.max_steps=50", "invert"})).code,
            kExitOk);
  const auto inv = nlohmann::json::parse(ReadFile(dir / "invert.json"));
  EXPECT_LE(inv["steps"].get<int>(), 50);
  EXPECT_TRUE(fs::exists(dir / "inverted.pgm"));
}

TEST(Cli, LeakageCompareMatchesAccuracyWithinTolerance) {
  const fs::path dir = testing::ScratchDir("cli_leakage");
  ASSERT_EQ(Cli({"--out", dir.string(), "--seed", "2", "--set", "leakage.images=3",
                 "--set", "leakage.t_train=2000", "--set", "leakage.t_prune=1000",
                 "--set", "leakage.hidden=[48]", "--set",
                 "leakage.inversion.max_steps=60", "leakage-compare"})
                .code,
            kExitOk);
  const auto s = nlohmann::json::parse(ReadFile(dir / "leakage_summary.json"));
  const auto& match = s["noise_match"];
  ASSERT_TRUE(match["converged"].get<bool>());
  // Independent re-check of the search's stopping rule.
  EXPECT_LE(std::abs(match["accuracy"].get<double>() - s["pruned_accuracy"].get<double>()),
            match["tolerance"].get<double>());
  const std::string csv = ReadFile(dir / "leakage_pruned.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(Cli, DpCertAndDatasetAreDeterministic) {
  const fs::path a = testing::ScratchDir("cli_misc_a");
  const fs::path b = testing::ScratchDir("cli_misc_b");
  for (const fs::path& d : {a, b}) {
    ASSERT_EQ(Cli({"--out", d.string(), "--set", "dp_cert.trials=5", "dp-cert"}).code, kExitOk);
    ASSERT_EQ(Cli({"--out", d.string(), "--set", "data.synthetic.train_per_class=4",
                   "dataset"}).code,
              kExitOk);
  }
  EXPECT_EQ(Snapshot(a), Snapshot(b));
  EXPECT_TRUE(fs::exists(a / "train-images.idx"));
}

}  // namespace
}  // namespace prunepriv
