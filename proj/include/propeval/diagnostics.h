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

#ifndef PROPEVAL_DIAGNOSTICS_H_
#define PROPEVAL_DIAGNOSTICS_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "propeval/data_model.h"
#include "propeval/metrics.h"
#include "propeval/proposers.h"

namespace propeval {

// ---- Partial vs. full annotation ------------------------------------------

enum class Regime { kSubset, kComplement, kAll };
const char* ToString(Regime r);

struct MethodGameability {
  std::string method;
  std::vector<int64_t> budgets;
  std::vector<double> auc_subset;
  std::vector<double> auc_complement;
  std::vector<double> auc_all;
  std::vector<double> drop;  // auc_subset - auc_complement
  MetricReport subset_report;
  MetricReport complement_report;
  MetricReport all_report;
};

struct BudgetRanking {
  int64_t budget = 0;
  // Method names by descending AUC (ties by name) under each regime.
  std::vector<std::string> subset_order;
  std::vector<std::string> complement_order;
  std::vector<std::string> all_order;
};

// `ahead` beats `behind` on AUC under the subset regime but trails it under
// the complement regime at this budget.
struct RankInversion {
  int64_t budget = 0;
  std::string ahead;
  std::string behind;
};

struct GameabilityReport {
  std::vector<int64_t> subset_categories;
  std::vector<int64_t> complement_categories;
  std::vector<MethodGameability> methods;  // sorted by method name
  std::vector<BudgetRanking> rankings;
  std::vector<RankInversion> inversions;
};

// Evaluates every proposal set on the annotated subset, on its complement
// within full's annotated categories, and on everything. Throws InputError if
// subset is empty, equals all annotated categories ("no complement regime"),
// or method names repeat.
GameabilityReport ThreeRegimeEval(const Dataset& full,
                                  const std::set<int64_t>& subset,
                                  const std::vector<ProposalSet>& proposals,
                                  const EvaluationConfig& cfg, int threads = 1);

// ---- Bias capacity --------------------------------------------------------

struct BiasCapacityRun {
  int64_t seen_count = 0;
  ProposalSet proposals;
};

struct BiasCapacityResult {
  std::string method;
  std::vector<int64_t> seen_counts;     // ascending
  std::vector<CurveResult> auc_curves;  // AUC vs budget, one per seen count
  int64_t summary_budget = 0;
  CurveResult auc_vs_seen;              // AUC@summary_budget vs seen count
  CurveResult improvement_vs_budget;    // AUC(k_max) - AUC(k_min) vs budget
  // Least-squares slope of AUC@summary_budget against the seen fraction
  // k / #categories; near zero for category-blind methods.
  double slope = 0.0;
};

// Evaluates each run on all of `full`. Needs >= 2 runs; duplicate seen counts
// are an error. summary_budget must be one of cfg's budgets.
BiasCapacityResult BiasCapacity(const Dataset& full,
                                std::vector<BiasCapacityRun> runs,
                                const EvaluationConfig& cfg,
                                int64_t summary_budget, int threads = 1);

// Builds one oracle DMP run per k with seen = the first k categories, then
// calls BiasCapacity.
BiasCapacityResult SimulateBiasCapacity(const Dataset& full,
                                        const std::vector<int64_t>& seen_counts,
                                        const DmpConfig& base,
                                        const EvaluationConfig& cfg,
                                        int64_t summary_budget,
                                        int threads = 1);

// Spearman rank correlation with average ranks for ties.
double SpearmanRho(const std::vector<double>& xs, const std::vector<double>& ys);

// ---- Fine-grained recall --------------------------------------------------

enum class FineGrainedKey { kSize, kFrequency, kSupercategory };
enum class SizeMeasure { kSqrtRelativeArea, kRelativeArea };
const char* ToString(FineGrainedKey k);
FineGrainedKey ParseFineGrainedKey(const std::string& s);

struct FineGrainedRow {
  std::string label;       // category name or supercategory
  double key_value = 0.0;  // size measure, instance count, or 0
  int64_t instance_count = 0;
  double recall = 0.0;
  std::vector<std::string> members;  // categories in a supercategory row
};

struct FineGrainedResult {
  FineGrainedKey key = FineGrainedKey::kSize;
  double iou_threshold = 0.7;
  int64_t budget = 0;
  std::vector<FineGrainedRow> rows;
  CurveResult curve;  // x = 1-based row position, y = recall
};

struct FineGrainedOptions {
  double iou_threshold = 0.7;
  int64_t budget = 1000;
  FineGrainedKey key = FineGrainedKey::kSize;
  SizeMeasure size_measure = SizeMeasure::kSqrtRelativeArea;
  ThresholdComparison comparison = ThresholdComparison::kStrictGreater;
  // category name -> supercategory; overrides the dataset's field.
  std::map<std::string, std::string> supercategory_map;
};

// Per-category recall@t at budget M, ascending by size (mean relative scale)
// or by instance count; or per supercategory with instance-weighted recall,
// groups sorted by name. Categories without instances are skipped.
FineGrainedResult FineGrainedRecall(const Dataset& full, const ProposalSet& p,
                                    const FineGrainedOptions& options,
                                    int threads = 1);

// Two-column CSV `category,supercategory` (header optional).
std::map<std::string, std::string> ParseSupercategoryCsv(
    const std::string& text, const std::string& source);

}  // namespace propeval

#endif  // PROPEVAL_DIAGNOSTICS_H_
