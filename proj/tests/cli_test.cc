// Copyright 2026 The propeval Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "propeval/cli.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "propeval/io.h"
#include "propeval/report.h"

namespace propeval {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult RunTool(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = RunCli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// Every file below dir, keyed by relative path.
std::map<std::string, std::string> Snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) {
      files[fs::relative(e.path(), dir).string()] = ReadFile(e.path().string());
    }
  }
  return files;
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = fs::temp_directory_path() / "propeval_cli_test";
    fs::remove_all(root_);
    fs::create_directories(root_);
    std::ofstream(root_ / "synth.json")
        << R"({"seed": 3, "num_images": 40, "num_categories": 6,
               "annotated_fraction_of_categories": 0.5})";
    std::ofstream(root_ / "eval.json") << R"({"proposal_budgets": [1, 10, 100]})";
    ASSERT_EQ(RunTool({"synth", "--config", P("synth.json"), "--out", P("world")}).code,
              kExitOk);
    ASSERT_EQ(RunTool({"propose", "--dataset", P("world/full.json"), "--method", "random",
                   "--per-image", "100", "--seed", "2", "--out", P("props")})
                  .code,
              kExitOk);
    const auto dmp = RunTool({"propose", "--dataset", P("world/full.json"), "--method",
                          "oracle_dmp", "--name", "dmp", "--seen", "cat_00,cat_01,cat_02",
                          "--out", P("props")});
    ASSERT_EQ(dmp.code, kExitOk) << dmp.err;
  }
  static void TearDownTestSuite() { fs::remove_all(root_); }

  static std::string P(const std::string& rel) { return (root_ / rel).string(); }

  // Runs args with --out <fresh dir> and --threads n; returns the files written.
  static std::map<std::string, std::string> RunInto(std::vector<std::string> args,
                                                    const std::string& dir, int threads) {
    fs::remove_all(root_ / dir);
    args.insert(args.end(), {"--out", P(dir), "--threads", std::to_string(threads)});
    const CliResult r = RunTool(args);
    EXPECT_EQ(r.code, kExitOk) << r.err;
    return Snapshot(root_ / dir);
  }

  static fs::path root_;
};

fs::path CliTest::root_;

TEST_F(CliTest, EvalWritesValidReports) {
  const auto files =
      RunInto({"eval", "--dataset", P("world/full.json"), "--config", P("eval.json"),
               "--proposals", P("props/random.csv"), P("props/dmp.csv")},
              "eval", 1);
  for (const char* name : {"metrics.json", "metrics.csv", "curves.csv",
                           "plots/auc_vs_budget.svg", "plots/dmp/recall_vs_iou.svg"}) {
    EXPECT_TRUE(files.count(name)) << name;
  }
  const auto j = nlohmann::json::parse(files.at("metrics.json"));
  EXPECT_TRUE(ValidateReport(j).empty());
  EXPECT_EQ(j["result"]["methods"].size(), 2u);
  EXPECT_EQ(j["manifest"]["inputs"].size(), 4u);
}

TEST_F(CliTest, FormatSelectsOutputs) {
  const auto files = RunInto({"eval", "--dataset", P("world/full.json"), "--proposals",
                              P("props/random.csv"), "--format", "csv"},
                             "eval_csv", 1);
  EXPECT_TRUE(files.count("metrics.csv"));
  EXPECT_FALSE(files.count("metrics.json"));
  EXPECT_FALSE(files.count("plots/auc_vs_budget.svg"));
}

TEST_F(CliTest, EveryCommandIsDeterministicAcrossThreads) {
  const std::vector<std::vector<std::string>> commands = {
      {"eval", "--dataset", P("world/full.json"), "--proposals", P("props/random.csv"),
       P("props/dmp.csv")},
      {"gameability", "--dataset", P("world/full.json"), "--subset",
       "cat_00,cat_01,cat_02", "--config", P("eval.json"), "--proposals",
       P("props/random.csv"), P("props/dmp.csv")},
      {"bias-capacity", "--simulate", P("synth.json"), "--seen-counts", "1,3,6",
       "--config", P("eval.json")},
      {"synth", "--config", P("synth.json")},
      {"stats", "--dataset", P("world/partial.json")},
      {"finegrained", "--dataset", P("world/full.json"), "--proposals",
       P("props/random.csv"), "--key", "size", "--budget", "100"},
      {"propose", "--dataset", P("world/full.json"), "--method", "oracle_dmp",
       "--seen", "cat_00"},
  };
  for (const auto& cmd : commands) {
    const auto base = RunInto(cmd, "det_a", 1);
    ASSERT_FALSE(base.empty()) << cmd[0];
    EXPECT_EQ(base, RunInto(cmd, "det_b", 1)) << cmd[0];
    for (int t : {4, 8}) EXPECT_EQ(base, RunInto(cmd, "det_b", t)) << cmd[0] << " " << t;
    for (const auto& [name, text] : base) {
      if (name.size() > 5 && name.substr(name.size() - 5) == ".json" &&
          text.find("\"schema\"") != std::string::npos) {
        EXPECT_TRUE(ValidateReport(nlohmann::json::parse(text)).empty())
            << cmd[0] << " " << name;
      }
    }
  }
}

TEST_F(CliTest, GameabilityPrintsInversions) {
  fs::remove_all(root_ / "game");
  const CliResult r =
      RunTool({"gameability", "--dataset", P("world/full.json"), "--subset",
           "cat_00,cat_01,cat_02", "--config", P("eval.json"), "--proposals",
           P("props/random.csv"), P("props/dmp.csv"), "--out", P("game")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string inv = ReadFile(P("game/inversions.csv"));
  EXPECT_EQ(inv.rfind("budget,", 0), 0u) << inv;
}

TEST_F(CliTest, MissingProposalsFileNamesThePath) {
  const CliResult r = RunTool({"eval", "--dataset", P("world/full.json"), "--proposals",
                           P("props/nope.csv"), "--out", P("bad")});
  EXPECT_EQ(r.code, kExitInput);
  EXPECT_NE(r.err.find("nope.csv"), std::string::npos) << r.err;
}

TEST_F(CliTest, UnknownSubsetCategoryIsNamed) {
  const CliResult r =
      RunTool({"gameability", "--dataset", P("world/full.json"), "--subset", "cat_00,zebra",
           "--proposals", P("props/random.csv"), "--out", P("bad")});
  EXPECT_EQ(r.code, kExitInput);
  EXPECT_NE(r.err.find("zebra"), std::string::npos) << r.err;
}

TEST_F(CliTest, DuplicateMethodNamesAreRejected) {
  const CliResult r = RunTool({"eval", "--dataset", P("world/full.json"), "--proposals",
                           P("props/random.csv"), P("props/random.csv"), "--out",
                           P("bad")});
  EXPECT_EQ(r.code, kExitInput);
  EXPECT_NE(r.err.find("random"), std::string::npos) << r.err;
}

TEST_F(CliTest, BadConfigIsAnInputError) {
  std::ofstream(root_ / "broken.json") << "{\"proposal_budgets\": [1,\n";
  const CliResult r = RunTool({"eval", "--dataset", P("world/full.json"), "--config",
                           P("broken.json"), "--proposals", P("props/random.csv"),
                           "--out", P("bad")});
  EXPECT_EQ(r.code, kExitInput);
  EXPECT_NE(r.err.find("broken.json"), std::string::npos) << r.err;
}

TEST_F(CliTest, BiasCapacityRunsFile) {
  std::ofstream(root_ / "runs.json")
      << R"({"runs": [{"seen_count": 1, "proposals": "props/random.csv"},
                      {"seen_count": 3, "proposals": "props/dmp.csv"}]})";
  const auto files = RunInto({"bias-capacity", "--dataset", P("world/full.json"),
                              "--runs", P("runs.json"), "--config", P("eval.json")},
                             "bias", 1);
  ASSERT_TRUE(files.count("bias_capacity.json"));
  const auto j = nlohmann::json::parse(files.at("bias_capacity.json"));
  EXPECT_EQ(j["result"]["seen_counts"], nlohmann::json::array({1, 3}));

  std::ofstream(root_ / "dup.json")
      << R"({"runs": [{"seen_count": 2, "proposals": "props/random.csv"},
                      {"seen_count": 2, "proposals": "props/dmp.csv"}]})";
  EXPECT_EQ(RunTool({"bias-capacity", "--dataset", P("world/full.json"), "--runs",
                 P("dup.json"), "--out", P("bad")})
                .code,
            kExitInput);
  std::ofstream(root_ / "empty.json") << R"({"runs": []})";
  EXPECT_EQ(RunTool({"bias-capacity", "--dataset", P("world/full.json"), "--runs",
                 P("empty.json"), "--out", P("bad")})
                .code,
            kExitInput);
}

TEST_F(CliTest, ConvertRoundTripsProposals) {
  ASSERT_EQ(RunTool({"convert", "--kind", "proposals", "--in", P("props/dmp.csv"), "--out",
                 P("conv/dmp.json")})
                .code,
            kExitOk);
  ASSERT_EQ(RunTool({"convert", "--kind", "proposals", "--in", P("conv/dmp.json"), "--out",
                 P("conv/dmp.csv")})
                .code,
            kExitOk);
  EXPECT_EQ(ReadFile(P("conv/dmp.csv")), ReadFile(P("props/dmp.csv")));
  const auto j = nlohmann::json::parse(ReadFile(P("conv/dmp.csv.report.json")));
  EXPECT_TRUE(ValidateReport(j).empty());
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(RunTool({"eval"}).code, kExitInput);
  EXPECT_EQ(RunTool({"frobnicate"}).code, kExitInput);
  EXPECT_EQ(RunTool({"eval", "--dataset", P("world/full.json"), "--proposals",
                 P("props/random.csv"), "--threads", "0", "--out", P("bad")})
                .code,
            kExitInput);
  EXPECT_EQ(RunTool({"--help"}).code, kExitOk);
}

}  // namespace
}  // namespace propeval
