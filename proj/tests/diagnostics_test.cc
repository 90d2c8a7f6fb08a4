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

#include "propeval/diagnostics.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "propeval/errors.h"
#include "propeval/synth_data.h"

namespace propeval {
namespace {

SynthWorld World(uint64_t seed, int64_t categories = 6, int64_t images = 60) {
  SynthConfig s;
  s.seed = seed;
  s.num_images = images;
  s.num_categories = categories;
  return GenerateDataset(s);
}

EvaluationConfig SmallConfig() {
  EvaluationConfig c;
  c.proposal_budgets = {1, 10, 100};
  return c;
}

ProposalSet Perfect(const Dataset& d, const std::string& name) {
  ProposalSet p(name);
  for (const auto& g : d.instances()) p.Add(g.image_id, g.box, 1.0);
  p.Normalize();
  return p;
}

TEST(ThreeRegimeTest, IdenticalSetsHaveNoInversions) {
  const SynthWorld w = World(1);
  ProposalSet a = RandomProposer(w.full, 100, 1, "a");
  ProposalSet b = a;
  b.set_method_name("b");
  const auto r = ThreeRegimeEval(w.full, {0, 1, 2}, {b, a}, SmallConfig());
  EXPECT_TRUE(r.inversions.empty());
  ASSERT_EQ(r.methods.size(), 2u);
  EXPECT_EQ(r.methods[0].method, "a");
  EXPECT_EQ(r.methods[0].auc_subset, r.methods[1].auc_subset);
  EXPECT_EQ(r.methods[0].drop, r.methods[1].drop);
  // Ties rank by name.
  EXPECT_EQ(r.rankings[1].subset_order, (std::vector<std::string>{"a", "b"}));
}

TEST(ThreeRegimeTest, PerfectProposalsHaveNoDrop) {
  const SynthWorld w = World(2);
  EvaluationConfig cfg;
  cfg.proposal_budgets = {100};
  const auto r = ThreeRegimeEval(w.full, {0, 1}, {Perfect(w.full, "gt")}, cfg);
  for (double d : r.methods[0].drop) EXPECT_EQ(d, 0.0);
}

TEST(ThreeRegimeTest, AllRegimeLiesBetweenParts) {
  const SynthWorld w = World(3);
  DmpConfig dmp;
  dmp.seen_categories = {0, 1, 2};
  const auto r = ThreeRegimeEval(
      w.full, {0, 1, 2},
      {RandomProposer(w.full, 100, 3), OracleDmp(w.full, dmp)}, SmallConfig());
  for (const auto& m : r.methods) {
    for (size_t b = 0; b < m.budgets.size(); ++b) {
      const double lo = std::min(m.auc_subset[b], m.auc_complement[b]);
      const double hi = std::max(m.auc_subset[b], m.auc_complement[b]);
      EXPECT_GE(m.auc_all[b], lo - 1e-12);
      EXPECT_LE(m.auc_all[b], hi + 1e-12);
      // abo/recall are instance-weighted blends too.
      const auto& s = m.subset_report.per_budget[b];
      const auto& c = m.complement_report.per_budget[b];
      const auto& a = m.all_report.per_budget[b];
      EXPECT_GE(a.abo, std::min(s.abo, c.abo) - 1e-12);
      EXPECT_LE(a.abo, std::max(s.abo, c.abo) + 1e-12);
    }
  }
}

TEST(ThreeRegimeTest, MatchesDirectEvaluation) {
  const SynthWorld w = World(4);
  const EvaluationConfig cfg = SmallConfig();
  const ProposalSet p = RandomProposer(w.full, 100, 4);
  const auto r = ThreeRegimeEval(w.full, {1, 3}, {p}, cfg);
  const MetricReport direct = Evaluate(RestrictCategories(w.full, {1, 3}), p, cfg);
  const MetricReport comp =
      Evaluate(RestrictCategories(w.full, {0, 2, 4, 5}), p, cfg);
  for (size_t b = 0; b < cfg.proposal_budgets.size(); ++b) {
    EXPECT_EQ(r.methods[0].auc_subset[b], direct.per_budget[b].auc);
    EXPECT_EQ(r.methods[0].auc_complement[b], comp.per_budget[b].auc);
  }
}

TEST(ThreeRegimeTest, DmpInvertsAgainstRandom) {
  SynthConfig s;
  s.seed = 7;
  s.num_images = 100;
  s.num_categories = 8;
  s.category_size_params.assign(8, {0.7, 0.2});
  s.instances_min = 1;
  s.instances_max = 2;
  const SynthWorld w = GenerateDataset(s);
  DmpConfig dmp;
  dmp.seen_categories = {0, 1, 2, 3};
  dmp.false_positive_rate = 1;
  const auto r = ThreeRegimeEval(
      w.full, {0, 1, 2, 3}, {RandomProposer(w.full, 100, 1), OracleDmp(w.full, dmp)},
      SmallConfig());
  EXPECT_EQ(r.rankings.back().subset_order.front(), "oracle_dmp");
  EXPECT_EQ(r.rankings.back().complement_order.front(), "random");
  bool found = false;
  for (const auto& inv : r.inversions) {
    found |= inv.budget == 100 && inv.ahead == "oracle_dmp" && inv.behind == "random";
  }
  EXPECT_TRUE(found);
}

TEST(ThreeRegimeTest, Errors) {
  const SynthWorld w = World(5, 3);
  const ProposalSet p = RandomProposer(w.full, 10, 1);
  EXPECT_THROW(ThreeRegimeEval(w.full, {}, {p}, SmallConfig()), InputError);
  EXPECT_THROW(ThreeRegimeEval(w.full, {0, 1, 2}, {p}, SmallConfig()), InputError);
  EXPECT_THROW(ThreeRegimeEval(w.full, {0}, {p, p}, SmallConfig()), InputError);
  EXPECT_THROW(ThreeRegimeEval(w.full, {9}, {p}, SmallConfig()), InputError);
}

TEST(BiasCapacityTest, IdenticalRunsAreFlat) {
  const SynthWorld w = World(6);
  const ProposalSet p = RandomProposer(w.full, 50, 1);
  const auto r = BiasCapacity(w.full, {{1, p}, {3, p}, {5, p}}, SmallConfig(), 100);
  EXPECT_EQ(r.slope, 0.0);
  for (const auto& [x, y] : r.improvement_vs_budget.points) EXPECT_EQ(y, 0.0);
}

TEST(BiasCapacityTest, OrderInvariant) {
  const SynthWorld w = World(7);
  std::vector<BiasCapacityRun> runs;
  for (int64_t k : {1, 2, 4, 6}) {
    DmpConfig d;
    for (int64_t c = 0; c < k; ++c) d.seen_categories.insert(c);
    runs.push_back({k, OracleDmp(w.full, d)});
  }
  const auto a = BiasCapacity(w.full, runs, SmallConfig(), 100);
  std::reverse(runs.begin(), runs.end());
  std::swap(runs[0], runs[2]);
  const auto b = BiasCapacity(w.full, runs, SmallConfig(), 100);
  EXPECT_EQ(a.seen_counts, b.seen_counts);
  EXPECT_EQ(a.auc_vs_seen.points, b.auc_vs_seen.points);
  EXPECT_EQ(a.slope, b.slope);
}

TEST(BiasCapacityTest, SimulationRisesWithSeenCount) {
  SynthConfig s;
  s.seed = 8;
  s.num_images = 100;
  s.num_categories = 10;
  const SynthWorld w = GenerateDataset(s);
  DmpConfig base;
  base.false_positive_rate = 1;
  const auto r = SimulateBiasCapacity(w.full, {2, 4, 6, 8}, base, SmallConfig(), 100);
  for (size_t i = 1; i < r.auc_vs_seen.points.size(); ++i) {
    EXPECT_GT(r.auc_vs_seen.points[i].second, r.auc_vs_seen.points[i - 1].second);
  }
  EXPECT_GT(r.slope, 0.3);
}

TEST(BiasCapacityTest, RandomControlSlopeNearZero) {
  const SynthWorld w = World(9, 10, 200);
  std::vector<BiasCapacityRun> runs;
  for (int64_t k : {2, 4, 6, 8, 10}) {
    runs.push_back({k, RandomProposer(w.full, 100, 500 + static_cast<uint64_t>(k))});
  }
  const auto r = BiasCapacity(w.full, runs, SmallConfig(), 100);
  EXPECT_LT(std::abs(r.slope), 0.02);
}

TEST(BiasCapacityTest, Errors) {
  const SynthWorld w = World(10);
  const ProposalSet p = RandomProposer(w.full, 10, 1);
  EXPECT_THROW(BiasCapacity(w.full, {{2, p}, {2, p}}, SmallConfig(), 100), InputError);
  EXPECT_THROW(BiasCapacity(w.full, {{2, p}}, SmallConfig(), 100), InputError);
  EXPECT_THROW(BiasCapacity(w.full, {}, SmallConfig(), 100), InputError);
  EXPECT_THROW(BiasCapacity(w.full, {{1, p}, {2, p}}, SmallConfig(), 50), InputError);
}

TEST(SpearmanTest, Values) {
  EXPECT_DOUBLE_EQ(SpearmanRho({1, 2, 3, 4}, {10, 20, 30, 40}), 1.0);
  EXPECT_DOUBLE_EQ(SpearmanRho({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0);
  // Ties get average ranks: x ranks {1, 2.5, 2.5, 4}.
  const double rho = SpearmanRho({1, 2, 2, 3}, {1, 2, 3, 4});
  EXPECT_NEAR(rho, 0.9486832980505138, 1e-12);
  EXPECT_THROW(SpearmanRho({1}, {1}), InputError);
}

TEST(FineGrainedTest, SingleCategoryEqualsGlobalRecall) {
  SynthConfig s;
  s.num_categories = 1;
  s.num_images = 30;
  const SynthWorld w = GenerateDataset(s);
  const ProposalSet p = RandomProposer(w.full, 200, 2);
  FineGrainedOptions o;
  o.budget = 200;
  const auto r = FineGrainedRecall(w.full, p, o);
  ASSERT_EQ(r.rows.size(), 1u);
  EvaluationConfig cfg;
  cfg.proposal_budgets = {200};
  cfg.iou_thresholds = {0.7};
  EXPECT_EQ(r.rows[0].recall, Evaluate(w.full, p, cfg).per_budget[0].recall[0]);
}

TEST(FineGrainedTest, PerfectAndMissingCategories) {
  const Dataset d = Dataset::Create(
      {{"im", 100, 100}}, {{0, "small", std::nullopt}, {1, "big", std::nullopt}},
      {{0, "im", 0, BoundingBox(0, 0, 10, 10)}, {1, "im", 1, BoundingBox(20, 20, 90, 90)}},
      {0, 1});
  ProposalSet p("m");
  p.Add("im", BoundingBox(20, 20, 90, 90), 1.0);
  p.Normalize();
  const auto r = FineGrainedRecall(d, p, {});
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0].label, "small");
  EXPECT_EQ(r.rows[0].recall, 0.0);
  EXPECT_EQ(r.rows[1].label, "big");
  EXPECT_EQ(r.rows[1].recall, 1.0);
  EXPECT_DOUBLE_EQ(r.rows[1].key_value, 0.7);
}

TEST(FineGrainedTest, SizeOrderingMatchesPerCategoryOracle) {
  SynthConfig s;
  s.seed = 12;
  s.num_images = 150;
  s.num_categories = 4;
  // Larger categories jitter less.
  s.category_size_params = {{0.1, 0.4}, {0.2, 0.3}, {0.4, 0.2}, {0.6, 0.1}};
  const SynthWorld w = GenerateDataset(s);
  const ProposalSet p = RandomProposer(w.full, 1000, 5);
  FineGrainedOptions o;
  o.iou_threshold = 0.5;
  const auto r = FineGrainedRecall(w.full, p, o);
  ASSERT_EQ(r.rows.size(), 4u);
  EvaluationConfig cfg;
  cfg.proposal_budgets = {1000};
  cfg.iou_thresholds = {0.5};
  for (size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(r.rows[i].label, "cat_0" + std::to_string(i));
    const double direct =
        Evaluate(RestrictCategories(w.full, {static_cast<int64_t>(i)}), p, cfg)
            .per_budget[0]
            .recall[0];
    EXPECT_EQ(r.rows[i].recall, direct);
    if (i > 0) {
      EXPECT_LT(r.rows[i - 1].key_value, r.rows[i].key_value);
    }
  }
  EXPECT_LT(r.rows[0].recall, r.rows[3].recall);
}

TEST(FineGrainedTest, FrequencyAndSupercategory) {
  SynthConfig s;
  s.num_images = 100;
  s.num_categories = 8;
  s.category_frequency_weights = {8, 7, 6, 5, 4, 3, 2, 1};
  const SynthWorld w = GenerateDataset(s);
  const ProposalSet p = RandomProposer(w.full, 100, 1);
  FineGrainedOptions o;
  o.budget = 100;
  o.key = FineGrainedKey::kFrequency;
  const auto f = FineGrainedRecall(w.full, p, o);
  for (size_t i = 1; i < f.rows.size(); ++i) {
    EXPECT_LE(f.rows[i - 1].key_value, f.rows[i].key_value);
  }
  o.key = FineGrainedKey::kSupercategory;
  const auto g = FineGrainedRecall(w.full, p, o);
  int64_t total = 0;
  for (const auto& row : g.rows) total += row.instance_count;
  EXPECT_EQ(total, static_cast<int64_t>(w.full.instances().size()));
  // Instance-weighted: overall recall is the weighted mean of the groups.
  double weighted = 0;
  for (const auto& row : g.rows) weighted += row.recall * static_cast<double>(row.instance_count);
  EvaluationConfig cfg;
  cfg.proposal_budgets = {100};
  cfg.iou_thresholds = {0.7};
  EXPECT_NEAR(weighted / static_cast<double>(total),
              Evaluate(w.full, p, cfg).per_budget[0].recall[0], 1e-12);
  // An external map overrides the dataset field.
  o.supercategory_map = ParseSupercategoryCsv(
      "category,supercategory\ncat_00,odd\ncat_01,even\ncat_02,odd\ncat_03,even\n"
      "cat_04,odd\ncat_05,even\ncat_06,odd\ncat_07,even\n",
      "map.csv");
  const auto h = FineGrainedRecall(w.full, p, o);
  ASSERT_EQ(h.rows.size(), 2u);
  EXPECT_EQ(h.rows[0].label, "even");
  EXPECT_EQ(h.rows[0].members, (std::vector<std::string>{"cat_01", "cat_03", "cat_05", "cat_07"}));
}

TEST(FineGrainedTest, SupercategoryNeedsField) {
  const Dataset d = Dataset::Create({{"im", 10, 10}}, {{0, "a", std::nullopt}},
                                    {{0, "im", 0, BoundingBox(0, 0, 5, 5)}}, {0});
  FineGrainedOptions o;
  o.key = FineGrainedKey::kSupercategory;
  EXPECT_THROW(FineGrainedRecall(d, ProposalSet("m"), o), InputError);
  EXPECT_THROW(ParseSupercategoryCsv("a,b,c\n", "x.csv"), InputError);
  EXPECT_THROW(ParseFineGrainedKey("colour"), InputError);
}

}  // namespace
}  // namespace propeval
