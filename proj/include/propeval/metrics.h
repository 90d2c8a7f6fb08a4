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

#ifndef PROPEVAL_METRICS_H_
#define PROPEVAL_METRICS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "propeval/data_model.h"

namespace propeval {

// How a best overlap v is compared against an IOU threshold t. The default
// counts an instance as recalled only when v > t.
enum class ThresholdComparison { kStrictGreater, kGreaterEqual };
enum class BudgetAxis { kLinear, kLog };
// kIndependent: every instance takes its own maximum over the top-M list, so
// one proposal may cover several instances. kGreedyOneToOne: instances are
// served in descending order of that maximum and each proposal is consumed
// at most once.
enum class MatchingMode { kIndependent, kGreedyOneToOne };

const char* ToString(ThresholdComparison c);
const char* ToString(BudgetAxis a);
const char* ToString(MatchingMode m);
ThresholdComparison ParseThresholdComparison(const std::string& s);
BudgetAxis ParseBudgetAxis(const std::string& s);
MatchingMode ParseMatchingMode(const std::string& s);

inline bool Passes(double best_iou, double t, ThresholdComparison c) {
  return c == ThresholdComparison::kStrictGreater ? best_iou > t
                                                  : best_iou >= t;
}

// Lattice lo, lo + step, ..., hi. The number of intervals is
// round((hi - lo) / step); point i is lo + i * (hi - lo) / n rounded to 12
// decimals, and the last point is exactly hi.
std::vector<double> UniformGrid(double lo, double hi, double step);

std::vector<double> DefaultIouThresholds();
std::vector<int64_t> DefaultBudgets();

struct EvaluationConfig {
  // Thresholds sampled by recall-vs-threshold curves; their first and last
  // values bound the IOU axis of VUS.
  std::vector<double> iou_thresholds = DefaultIouThresholds();
  std::vector<int64_t> proposal_budgets = DefaultBudgets();
  ThresholdComparison threshold_comparison =
      ThresholdComparison::kStrictGreater;
  double auc_t_lo = 0.5;
  double auc_t_hi = 1.0;
  double auc_grid_step = 0.05;
  // Step of the sampled AR route (AverageRecallOnGrid).
  double ar_grid_step = 0.01;
  BudgetAxis budget_axis = BudgetAxis::kLog;
  MatchingMode matching = MatchingMode::kIndependent;

  // Throws InputError("config", ...) when an invariant does not hold.
  void Validate() const;
};

// Keeps budgets below max_available and appends max_available itself, so the
// largest budget evaluates every available proposal. Returns {1} for 0.
std::vector<int64_t> CapBudgets(const std::vector<int64_t>& budgets,
                                int64_t max_available);

struct InstanceRef {
  int64_t instance_id = 0;
  int64_t category_id = 0;
  size_t image_index = 0;
};

// Best IOU of every ground-truth instance against the top-M proposals of its
// image, for every configured budget M. Rows follow the dataset's image order
// and, within an image, ascending instance id.
class BestOverlapTable {
 public:
  BestOverlapTable() = default;
  BestOverlapTable(std::vector<int64_t> budgets,
                   std::vector<InstanceRef> instances,
                   std::vector<double> column_major_values);

  const std::vector<int64_t>& budgets() const { return budgets_; }
  const std::vector<InstanceRef>& instances() const { return instances_; }
  size_t num_instances() const { return instances_.size(); }

  // Throws InputError if M was not materialized.
  size_t BudgetIndex(int64_t M) const;
  std::span<const double> Column(size_t budget_index) const {
    return {values_.data() + budget_index * instances_.size(),
            instances_.size()};
  }
  double at(size_t instance, size_t budget_index) const {
    return values_[budget_index * instances_.size() + instance];
  }

 private:
  std::vector<int64_t> budgets_;
  std::vector<InstanceRef> instances_;
  std::vector<double> values_;
};

// Images are processed in parallel on `threads` workers; per-image rows are
// merged in image order, so the table is identical for every thread count.
// Proposal images unknown to the dataset are ignored; budgets above an
// image's list length use the whole list.
BestOverlapTable BestOverlaps(const Dataset& d, const ProposalSet& p,
                              std::span<const int64_t> budgets,
                              MatchingMode mode = MatchingMode::kIndependent,
                              int threads = 1);

// A sampled metric curve. x is strictly increasing.
struct CurveResult {
  std::string name;
  std::string x_label;
  std::string y_label;
  std::vector<std::pair<double, double>> points;
  std::string method_name;
  std::map<std::string, std::string> metadata;
};

// Fraction of instances with best_iou(M) passing t. Zero (with a warning)
// when the table has no instances.
double RecallAt(const BestOverlapTable& table, double t, int64_t M,
                ThresholdComparison comparison);

CurveResult RecallVsBudget(const BestOverlapTable& table, double t,
                           ThresholdComparison comparison);
CurveResult RecallVsThreshold(const BestOverlapTable& table, int64_t M,
                              std::span<const double> thresholds,
                              ThresholdComparison comparison);

// Trapezoidal integral of y over x divided by (x.back() - x.front()).
double TrapezoidMean(std::span<const double> xs, std::span<const double> ys);
// Double trapezoid over a grid; values are row-major with xs.size() rows.
double TrapezoidMean2D(std::span<const double> xs, std::span<const double> ys,
                       std::span<const double> values);

// Normalized trapezoidal area under recall-vs-threshold at budget M over
// [auc_t_lo, auc_t_hi] sampled every auc_grid_step.
double Auc(const BestOverlapTable& table, int64_t M,
           const EvaluationConfig& cfg);
CurveResult AucVsBudget(const BestOverlapTable& table,
                        const EvaluationConfig& cfg);

// Mean best overlap at budget M, over one category's instances or all of
// them. Zero when there are no matching instances.
double Abo(const BestOverlapTable& table, int64_t M,
           std::optional<int64_t> category = std::nullopt);
// Unweighted mean of per-category ABO over categories with instances.
double Mabo(const BestOverlapTable& table, int64_t M);
CurveResult AboVsBudget(const BestOverlapTable& table);

// Mean recall over t in [0.5, 1], integrated exactly: recall(t) is a step
// function of the best overlaps, so the integral is
// mean_i clamp(v_i - 0.5, 0, 0.5) / 0.5. Identical under both comparisons.
double AverageRecall(const BestOverlapTable& table, int64_t M);
// Trapezoidal approximation of the same integral on a grid of `step`.
double AverageRecallOnGrid(const BestOverlapTable& table, int64_t M,
                           double step, ThresholdComparison comparison);
CurveResult ArVsBudget(const BestOverlapTable& table);

// Mean recall over the threshold x budget surface. The IOU axis spans
// [iou_thresholds.front(), iou_thresholds.back()] and is integrated exactly
// (as in AverageRecall); the budget axis is a trapezoid over the table's
// budgets on a linear or log scale. Throws InputError with fewer than two
// budgets or thresholds.
double Vus(const BestOverlapTable& table, const EvaluationConfig& cfg);

struct BudgetMetrics {
  int64_t budget = 0;
  double auc = 0.0;
  double average_recall = 0.0;
  double abo = 0.0;
  double mabo = 0.0;
  std::vector<double> recall;  // one per cfg.iou_thresholds entry
};

struct MetricReport {
  std::string method;
  EvaluationConfig config;
  int64_t num_instances = 0;
  std::vector<BudgetMetrics> per_budget;
  std::optional<double> vus;  // needs >= 2 budgets and thresholds
  std::vector<CurveResult> curves;
};

MetricReport EvaluateMetrics(const BestOverlapTable& table,
                             const EvaluationConfig& cfg,
                             const std::string& method);

// Convenience: BestOverlaps + EvaluateMetrics with cfg's budgets/matching.
MetricReport Evaluate(const Dataset& d, const ProposalSet& p,
                      const EvaluationConfig& cfg, int threads = 1);

}  // namespace propeval

#endif  // PROPEVAL_METRICS_H_
