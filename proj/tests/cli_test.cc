/*
 * Copyright 2026 The eqodds Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "eqodds/cli.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "eqodds/policy.h"
#include "eqodds/roc.h"
#include "test_support.h"

namespace eqodds {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("eqodds_cli_" +
            std::string(::testing::UnitTest::GetInstance()
                            ->current_test_info()
                            ->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const {
    return (dir_ / name).string();
  }

  std::string WriteData(const std::string& name,
                        const LabeledPredictions& data) {
    std::ofstream out(Path(name));
    WritePredictions(data, out, FormatFromPath(name));
    return Path(name);
  }

  int RunArgs(std::vector<std::string> args) {
    args.insert(args.begin(), "eqodds");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return Main(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  static std::string Read(const std::string& path) {
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

LabeledPredictions PerfectVersusAnti() {
  return testing::FromTriples({{0.9, 1, "A"}, {0.8, 1, "A"}, {0.7, 1, "A"},
                               {0.1, 0, "A"}, {0.9, 0, "B"}, {0.2, 1, "B"},
                               {0.3, 1, "B"}, {0.1, 1, "B"}});
}

TEST_F(CliTest, CalibratedThreshold) {
  EXPECT_EQ(RunArgs({"calibrated-threshold", "--fp-cost", "1", "--fn-cost",
                     "1"}),
            kExitOk);
  EXPECT_EQ(out_.str(), "0.5\n");
  EXPECT_EQ(RunArgs({"calibrated-threshold", "--fp-cost", "3"}), kExitOk);
  EXPECT_EQ(out_.str(), "0.75\n");
  EXPECT_EQ(RunArgs({"calibrated-threshold", "--fp-cost", "-1"}), kExitUsage);
}

TEST_F(CliTest, FitSolutionIsCertifiedFromFile) {
  const auto data = PerfectVersusAnti();
  const auto csv = WriteData("data.csv", data);
  ASSERT_EQ(RunArgs({"fit", "--data", csv, "--alpha", "0.05", "--output",
                     Path("sol.json")}),
            kExitOk)
      << err_.str();
  const auto doc = Json::parse(Read(Path("sol.json")));
  EXPECT_EQ(doc["schema_version"], kSchemaVersion);
  EXPECT_EQ(doc["config"]["command"], "fit");
  EXPECT_EQ(doc["config"]["alpha"], 0.05);
  EXPECT_LE(doc["certified_alpha"].get<double>(), 0.05);

  // Re-evaluate the written policy directly.
  const auto recorded = SolutionFromJson(doc, 0);
  const auto report = EvaluatePolicy(recorded.policy, data, {});
  EXPECT_LE(report.violation, 0.05 + 1e-9);
  EXPECT_NEAR(report.expected_loss, recorded.expected_loss, 1e-9);
}

TEST_F(CliTest, EvalReproducesFit) {
  testing::Rng rng(51);
  const auto csv = WriteData(
      "data.json", testing::GaussianDataset(rng, 300, {0.3, 0.6}, {1, 2}));
  ASSERT_EQ(RunArgs({"fit", "--data", csv, "--alpha", "0.02", "-o",
                     Path("sol.json")}),
            kExitOk)
      << err_.str();
  ASSERT_EQ(RunArgs({"eval", "--data", csv, "--solution", Path("sol.json")}),
            kExitOk)
      << err_.str();
  const auto fit = Json::parse(Read(Path("sol.json")));
  const auto eval = Json::parse(out_.str());
  EXPECT_EQ(eval["mode"], "analytic");
  EXPECT_NEAR(eval["expected_loss"].get<double>(),
              fit["expected_loss"].get<double>(), 1e-9);
  EXPECT_NEAR(eval["violation"].get<double>(),
              fit["certified_alpha"].get<double>(), 1e-9);

  ASSERT_EQ(RunArgs({"eval", "--data", csv, "--solution", Path("sol.json"),
                     "--sampled", "--bootstrap-n", "50"}),
            kExitOk);
  const auto sampled = Json::parse(out_.str());
  EXPECT_EQ(sampled["mode"], "sampled");
  EXPECT_TRUE(sampled.contains("ci"));
}

TEST_F(CliTest, SweepGridRows) {
  testing::Rng rng(52);
  const auto csv = WriteData(
      "data.csv", testing::GaussianDataset(rng, 200, {0.3, 0.6}, {1, 2}));
  ASSERT_EQ(RunArgs({"sweep", "--data", csv, "--grid-step", "0.5",
                     "--alpha-max", "1"}),
            kExitOk)
      << err_.str();
  std::istringstream lines(out_.str());
  std::string line;
  std::vector<std::string> alphas;
  std::getline(lines, line);
  while (std::getline(lines, line)) alphas.push_back(line.substr(0, line.find(',')));
  EXPECT_EQ(alphas, (std::vector<std::string>{"0", "0.5", "1"}));
}

TEST_F(CliTest, PredictWritesOneRowPerInput) {
  const auto csv = WriteData("data.csv", PerfectVersusAnti());
  ASSERT_EQ(RunArgs({"unprocess", "--data", csv, "-o", Path("sol.json"),
                     "--roc-export", Path("roc.csv")}),
            kExitOk)
      << err_.str();
  EXPECT_NE(Read(Path("roc.csv")).find("group,fpr,tpr,threshold,is_vertex"),
            std::string::npos);
  EXPECT_TRUE(Json::parse(Read(Path("sol.json")))["alpha_requested"].is_null());
  ASSERT_EQ(RunArgs({"predict", "--data", csv, "--solution", Path("sol.json")}),
            kExitOk);
  const std::string text = out_.str();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "row_index,group,score,prediction,threshold_drawn");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 9);
  EXPECT_NE(text.find("0,A,0.9,1,"), std::string::npos);
}

TEST_F(CliTest, SelectPicksSharperModel) {
  const auto sharp = WriteData("sharp.csv", PerfectVersusAnti());
  auto rows = PerfectVersusAnti().Rows();
  for (auto& row : rows) row.score = 0.5;
  const auto flat = WriteData("flat.csv", LabeledPredictions::FromRows(rows));
  ASSERT_EQ(RunArgs({"select", "--model", "flat=" + flat, "--model",
                     "sharp=" + sharp}),
            kExitOk)
      << err_.str();
  EXPECT_EQ(Json::parse(out_.str())["winner"], "sharp");
}

TEST_F(CliTest, ExitCodes) {
  const auto csv = WriteData("data.csv", PerfectVersusAnti());
  EXPECT_EQ(RunArgs({"fit", "--data", csv, "--alpha", "1.5"}), kExitUsage);
  EXPECT_FALSE(err_.str().empty());
  EXPECT_EQ(RunArgs({"fit", "--data", csv}), kExitUsage);
  EXPECT_EQ(RunArgs({"sweep", "--data", csv, "--grid-step", "0"}), kExitUsage);
  EXPECT_EQ(RunArgs({"frobnicate"}), kExitUsage);
  EXPECT_EQ(RunArgs({"select", "--model", "broken"}), kExitUsage);
  EXPECT_EQ(RunArgs({"fit", "--data", csv, "--alpha", "0.1", "--format",
                     "xml"}),
            kExitUsage);

  std::ofstream(Path("bad.csv")) << "score,label,group\n1.5,1,A\n";
  EXPECT_EQ(RunArgs({"fit", "--data", Path("bad.csv"), "--alpha", "0.1"}),
            kExitData);
  EXPECT_EQ(RunArgs({"fit", "--data", Path("missing.csv"), "--alpha", "0.1"}),
            kExitData);
  std::ofstream(Path("degenerate.csv"))
      << "score,label,group\n0.5,1,A\n0.4,0,A\n0.3,0,B\n";
  EXPECT_EQ(RunArgs({"fit", "--data", Path("degenerate.csv"), "--alpha", "0.1"}),
            kExitData);
  EXPECT_EQ(RunArgs({"fit", "--data", Path("degenerate.csv"), "--alpha", "0.1",
                     "--allow-degenerate-groups"}),
            kExitOk)
      << err_.str();
  std::ofstream(Path("sol.json")) << R"({"schema_version": 1})";
  EXPECT_EQ(RunArgs({"eval", "--data", csv, "--solution", Path("sol.json")}),
            kExitData);
  EXPECT_EQ(RunArgs({"--help"}), kExitOk);
}

TEST_F(CliTest, OutputsAreByteIdentical) {
  testing::Rng rng(53);
  const auto csv = WriteData(
      "data.csv", testing::GaussianDataset(rng, 200, {0.3, 0.6}, {1, 2}));
  std::string first;
  for (int run = 0; run < 2; ++run) {
    ASSERT_EQ(RunArgs({"sweep", "--data", csv, "--grid-step", "0.05",
                       "--bootstrap-n", "30", "--seed", "9"}),
              kExitOk);
    if (run == 0) first = out_.str();
  }
  EXPECT_EQ(first, out_.str());
}

}  // namespace
}  // namespace eqodds
