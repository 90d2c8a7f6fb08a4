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

#include "propeval/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "propeval/errors.h"
#include "propeval/format.h"
#include "propeval/parallel.h"

namespace propeval {

const char* ToString(ThresholdComparison c) {
  return c == ThresholdComparison::kStrictGreater ? "strict_greater"
                                                  : "greater_equal";
}

const char* ToString(BudgetAxis a) {
  return a == BudgetAxis::kLog ? "log" : "linear";
}

const char* ToString(MatchingMode m) {
  return m == MatchingMode::kIndependent ? "independent" : "greedy_one_to_one";
}

ThresholdComparison ParseThresholdComparison(const std::string& s) {
  if (s == "strict_greater") return ThresholdComparison::kStrictGreater;
  if (s == "greater_equal") return ThresholdComparison::kGreaterEqual;
  throw InputError("config", "unknown threshold_comparison '" + s + "'");
}

BudgetAxis ParseBudgetAxis(const std::string& s) {
  if (s == "log") return BudgetAxis::kLog;
  if (s == "linear") return BudgetAxis::kLinear;
  throw InputError("config", "unknown budget_axis '" + s + "'");
}

MatchingMode ParseMatchingMode(const std::string& s) {
  if (s == "independent") return MatchingMode::kIndependent;
  if (s == "greedy_one_to_one") return MatchingMode::kGreedyOneToOne;
  throw InputError("config", "unknown matching '" + s + "'");
}

std::vector<double> UniformGrid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi > lo)) {
    throw InputError("config", "grid needs hi > lo and step > 0");
  }
  const auto n = static_cast<int64_t>(std::llround((hi - lo) / step));
  const int64_t intervals = std::max<int64_t>(n, 1);
  std::vector<double> grid(static_cast<size_t>(intervals) + 1);
  for (int64_t i = 0; i <= intervals; ++i) {
    // Snapped to 12 decimals so that 0.05 * 8 reads back as 0.4.
    const double v =
        lo + static_cast<double>(i) * (hi - lo) / static_cast<double>(intervals);
    grid[static_cast<size_t>(i)] = std::round(v * 1e12) / 1e12;
  }
  grid.back() = hi;
  return grid;
}

std::vector<double> DefaultIouThresholds() { return UniformGrid(0.05, 1.0, 0.05); }

std::vector<int64_t> DefaultBudgets() {
  return {1, 3, 10, 32, 100, 316, 1000, 3162, 10000};
}

void EvaluationConfig::Validate() const {
  auto fail = [](const std::string& msg) { throw InputError("config", msg); };
  if (iou_thresholds.empty()) fail("iou_thresholds must not be empty");
  for (size_t i = 0; i < iou_thresholds.size(); ++i) {
    const double t = iou_thresholds[i];
    if (!(t > 0.0 && t <= 1.0)) fail("iou_thresholds must lie in (0, 1]");
    if (i > 0 && !(t > iou_thresholds[i - 1])) {
      fail("iou_thresholds must be strictly increasing");
    }
  }
  if (proposal_budgets.empty()) fail("proposal_budgets must not be empty");
  for (size_t i = 0; i < proposal_budgets.size(); ++i) {
    if (proposal_budgets[i] <= 0) fail("proposal_budgets must be positive");
    if (i > 0 && proposal_budgets[i] <= proposal_budgets[i - 1]) {
      fail("proposal_budgets must be strictly increasing");
    }
  }
  if (!(auc_t_lo > 0.0 && auc_t_hi <= 1.0 && auc_t_lo < auc_t_hi)) {
    fail("auc_threshold_range must satisfy 0 < t_lo < t_hi <= 1");
  }
  if (!(auc_grid_step > 0.0)) fail("auc_grid_step must be positive");
  if (!(ar_grid_step > 0.0)) fail("ar_grid_step must be positive");
}

std::vector<int64_t> CapBudgets(const std::vector<int64_t>& budgets,
                                int64_t max_available) {
  if (max_available <= 0) return {1};
  std::vector<int64_t> out;
  for (int64_t b : budgets) {
    if (b < max_available) out.push_back(b);
  }
  out.push_back(max_available);
  return out;
}

BestOverlapTable::BestOverlapTable(std::vector<int64_t> budgets,
                                   std::vector<InstanceRef> instances,
                                   std::vector<double> column_major_values)
    : budgets_(std::move(budgets)),
      instances_(std::move(instances)),
      values_(std::move(column_major_values)) {
  if (values_.size() != budgets_.size() * instances_.size()) {
    throw std::invalid_argument("BestOverlapTable: value count mismatch");
  }
}

size_t BestOverlapTable::BudgetIndex(int64_t M) const {
  auto it = std::lower_bound(budgets_.begin(), budgets_.end(), M);
  if (it == budgets_.end() || *it != M) {
    throw InputError("metrics",
                     "budget " + std::to_string(M) + " was not materialized");
  }
  return static_cast<size_t>(it - budgets_.begin());
}

namespace {

// Row-major [instance][budget] best overlaps for one image.
void IndependentRows(const std::vector<const BoundingBox*>& gts,
                     const std::vector<ScoredBox>& props,
                     std::span<const int64_t> budgets, double* rows) {
  const size_t nb = budgets.size();
  for (size_t k = 0; k < gts.size(); ++k) {
    const BoundingBox& g = *gts[k];
    double best = 0.0;
    size_t j = 0;
    for (size_t b = 0; b < nb; ++b) {
      const size_t limit =
          std::min(props.size(), static_cast<size_t>(budgets[b]));
      for (; j < limit; ++j) {
        const double v = Iou(g, props[j].box);
        if (v > best) best = v;
      }
      rows[k * nb + b] = best;
    }
  }
}

void GreedyRows(const std::vector<const BoundingBox*>& gts,
                const std::vector<ScoredBox>& props,
                std::span<const int64_t> budgets, double* rows) {
  const size_t nb = budgets.size();
  const size_t ng = gts.size();
  std::vector<double> ious;
  for (size_t b = 0; b < nb; ++b) {
    const size_t m = std::min(props.size(), static_cast<size_t>(budgets[b]));
    ious.assign(ng * m, 0.0);
    std::vector<double> own_best(ng, 0.0);
    for (size_t k = 0; k < ng; ++k) {
      for (size_t j = 0; j < m; ++j) {
        ious[k * m + j] = Iou(*gts[k], props[j].box);
        own_best[k] = std::max(own_best[k], ious[k * m + j]);
      }
    }
    std::vector<size_t> order(ng);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t c) {
      return own_best[a] > own_best[c];
    });
    std::vector<bool> used(m, false);
    for (size_t k : order) {
      double best = 0.0;
      size_t pick = m;
      for (size_t j = 0; j < m; ++j) {
        if (!used[j] && ious[k * m + j] > best) {
          best = ious[k * m + j];
          pick = j;
        }
      }
      if (pick < m) used[pick] = true;
      rows[k * nb + b] = best;
    }
  }
}

double SafeMean(double sum, size_t n) {
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

}  // namespace

BestOverlapTable BestOverlaps(const Dataset& d, const ProposalSet& p,
                              std::span<const int64_t> budgets,
                              MatchingMode mode, int threads) {
  for (size_t i = 0; i < budgets.size(); ++i) {
    if (budgets[i] <= 0 || (i > 0 && budgets[i] <= budgets[i - 1])) {
      throw InputError("metrics",
                       "budgets must be positive and strictly increasing");
    }
  }
  const auto& by_image = d.InstancesByImage();
  const size_t num_images = d.images().size();
  const size_t nb = budgets.size();
  std::vector<std::vector<double>> partial(num_images);

  ParallelFor(num_images, threads, [&](size_t i) {
    const auto& idx = by_image[i];
    if (idx.empty()) return;
    std::vector<const BoundingBox*> gts;
    gts.reserve(idx.size());
    for (size_t k : idx) gts.push_back(&d.instances()[k].box);
    const auto& props = p.ForImage(d.image(i).image_id);
    partial[i].assign(idx.size() * nb, 0.0);
    if (mode == MatchingMode::kIndependent) {
      IndependentRows(gts, props, budgets, partial[i].data());
    } else {
      GreedyRows(gts, props, budgets, partial[i].data());
    }
  });

  std::vector<InstanceRef> refs;
  refs.reserve(d.instances().size());
  for (size_t i = 0; i < num_images; ++i) {
    for (size_t k : by_image[i]) {
      const auto& g = d.instances()[k];
      refs.push_back({g.instance_id, g.category_id, i});
    }
  }
  const size_t n = refs.size();
  std::vector<double> values(n * nb);
  size_t row = 0;
  for (size_t i = 0; i < num_images; ++i) {
    const size_t count = by_image[i].size();
    for (size_t k = 0; k < count; ++k, ++row) {
      for (size_t b = 0; b < nb; ++b) {
        values[b * n + row] = partial[i][k * nb + b];
      }
    }
  }
  return BestOverlapTable({budgets.begin(), budgets.end()}, std::move(refs),
                          std::move(values));
}

double RecallAt(const BestOverlapTable& table, double t, int64_t M,
                ThresholdComparison comparison) {
  const auto col = table.Column(table.BudgetIndex(M));
  if (col.empty()) {
    Warn("recall requested over an empty ground-truth set; reporting 0");
    return 0.0;
  }
  size_t hits = 0;
  for (double v : col) hits += Passes(v, t, comparison) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(col.size());
}

CurveResult RecallVsBudget(const BestOverlapTable& table, double t,
                           ThresholdComparison comparison) {
  CurveResult c;
  c.name = "recall_vs_budget@" + FormatDouble(t);
  c.x_label = "#proposals";
  c.y_label = "recall";
  c.metadata["iou_threshold"] = FormatDouble(t);
  c.metadata["threshold_comparison"] = ToString(comparison);
  for (int64_t M : table.budgets()) {
    c.points.emplace_back(static_cast<double>(M),
                          RecallAt(table, t, M, comparison));
  }
  return c;
}

CurveResult RecallVsThreshold(const BestOverlapTable& table, int64_t M,
                              std::span<const double> thresholds,
                              ThresholdComparison comparison) {
  CurveResult c;
  c.name = "recall_vs_iou@" + std::to_string(M);
  c.x_label = "IOU threshold";
  c.y_label = "recall";
  c.metadata["budget"] = std::to_string(M);
  c.metadata["threshold_comparison"] = ToString(comparison);
  for (double t : thresholds) {
    c.points.emplace_back(t, RecallAt(table, t, M, comparison));
  }
  return c;
}

double TrapezoidMean(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw InputError("metrics", "trapezoid needs >= 2 matching samples");
  }
  double area = 0.0;
  for (size_t i = 0; i + 1 < xs.size(); ++i) {
    area += 0.5 * (ys[i] + ys[i + 1]) * (xs[i + 1] - xs[i]);
  }
  return area / (xs.back() - xs.front());
}

double TrapezoidMean2D(std::span<const double> xs, std::span<const double> ys,
                       std::span<const double> values) {
  if (values.size() != xs.size() * ys.size()) {
    throw InputError("metrics", "grid value count mismatch");
  }
  std::vector<double> row_means(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    row_means[i] = TrapezoidMean(ys, values.subspan(i * ys.size(), ys.size()));
  }
  return TrapezoidMean(xs, row_means);
}

double Auc(const BestOverlapTable& table, int64_t M,
           const EvaluationConfig& cfg) {
  const auto col = table.Column(table.BudgetIndex(M));
  if (col.empty()) {
    Warn("AUC requested over an empty ground-truth set; reporting 0");
    return 0.0;
  }
  const std::vector<double> grid =
      UniformGrid(cfg.auc_t_lo, cfg.auc_t_hi, cfg.auc_grid_step);
  // Recall at each grid point from the sorted best overlaps.
  std::vector<double> sorted(col.begin(), col.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> recall(grid.size());
  const double n = static_cast<double>(sorted.size());
  for (size_t g = 0; g < grid.size(); ++g) {
    const auto it =
        cfg.threshold_comparison == ThresholdComparison::kStrictGreater
            ? std::upper_bound(sorted.begin(), sorted.end(), grid[g])
            : std::lower_bound(sorted.begin(), sorted.end(), grid[g]);
    recall[g] = static_cast<double>(sorted.end() - it) / n;
  }
  return TrapezoidMean(grid, recall);
}

CurveResult AucVsBudget(const BestOverlapTable& table,
                        const EvaluationConfig& cfg) {
  CurveResult c;
  c.name = "auc_vs_budget";
  c.x_label = "#proposals";
  c.y_label = "AUC";
  for (int64_t M : table.budgets()) {
    c.points.emplace_back(static_cast<double>(M), Auc(table, M, cfg));
  }
  return c;
}

double Abo(const BestOverlapTable& table, int64_t M,
           std::optional<int64_t> category) {
  const auto col = table.Column(table.BudgetIndex(M));
  double sum = 0.0;
  size_t n = 0;
  for (size_t i = 0; i < col.size(); ++i) {
    if (category && table.instances()[i].category_id != *category) continue;
    sum += col[i];
    ++n;
  }
  return SafeMean(sum, n);
}

double Mabo(const BestOverlapTable& table, int64_t M) {
  const auto col = table.Column(table.BudgetIndex(M));
  std::map<int64_t, std::pair<double, size_t>> per_class;
  for (size_t i = 0; i < col.size(); ++i) {
    auto& acc = per_class[table.instances()[i].category_id];
    acc.first += col[i];
    ++acc.second;
  }
  double sum = 0.0;
  for (const auto& [cat, acc] : per_class) sum += acc.first / acc.second;
  return SafeMean(sum, per_class.size());
}

CurveResult AboVsBudget(const BestOverlapTable& table) {
  CurveResult c;
  c.name = "abo_vs_budget";
  c.x_label = "#proposals";
  c.y_label = "ABO";
  for (int64_t M : table.budgets()) {
    c.points.emplace_back(static_cast<double>(M), Abo(table, M));
  }
  return c;
}

namespace {

// Exact mean over t in [lo, hi] of the indicator recall curve.
double ExactThresholdMean(std::span<const double> col, double lo, double hi) {
  if (col.empty()) return 0.0;
  const double width = hi - lo;
  double sum = 0.0;
  for (double v : col) sum += std::clamp(v - lo, 0.0, width);
  return sum / (width * static_cast<double>(col.size()));
}

}  // namespace

double AverageRecall(const BestOverlapTable& table, int64_t M) {
  const auto col = table.Column(table.BudgetIndex(M));
  if (col.empty()) {
    Warn("average recall requested over an empty ground-truth set; reporting 0");
  }
  return ExactThresholdMean(col, 0.5, 1.0);
}

double AverageRecallOnGrid(const BestOverlapTable& table, int64_t M,
                           double step, ThresholdComparison comparison) {
  const std::vector<double> grid = UniformGrid(0.5, 1.0, step);
  std::vector<double> recall(grid.size());
  for (size_t g = 0; g < grid.size(); ++g) {
    recall[g] = RecallAt(table, grid[g], M, comparison);
  }
  return TrapezoidMean(grid, recall);
}

CurveResult ArVsBudget(const BestOverlapTable& table) {
  CurveResult c;
  c.name = "ar_vs_budget";
  c.x_label = "#proposals";
  c.y_label = "average recall";
  for (int64_t M : table.budgets()) {
    c.points.emplace_back(static_cast<double>(M), AverageRecall(table, M));
  }
  return c;
}

double Vus(const BestOverlapTable& table, const EvaluationConfig& cfg) {
  if (table.budgets().size() < 2 || cfg.iou_thresholds.size() < 2) {
    throw InputError("metrics",
                     "VUS needs at least two budgets and two thresholds");
  }
  const double lo = cfg.iou_thresholds.front();
  const double hi = cfg.iou_thresholds.back();
  std::vector<double> xs;
  std::vector<double> means;
  for (size_t b = 0; b < table.budgets().size(); ++b) {
    const double M = static_cast<double>(table.budgets()[b]);
    xs.push_back(cfg.budget_axis == BudgetAxis::kLog ? std::log(M) : M);
    means.push_back(ExactThresholdMean(table.Column(b), lo, hi));
  }
  return TrapezoidMean(xs, means);
}

MetricReport EvaluateMetrics(const BestOverlapTable& table,
                             const EvaluationConfig& cfg,
                             const std::string& method) {
  cfg.Validate();
  MetricReport r;
  r.method = method;
  r.config = cfg;
  r.config.proposal_budgets = table.budgets();
  r.num_instances = static_cast<int64_t>(table.num_instances());
  if (table.num_instances() == 0) {
    Warn("method '" + method + "': no ground-truth instances; metrics are 0");
  }
  const ThresholdComparison cmp = cfg.threshold_comparison;
  for (int64_t M : table.budgets()) {
    BudgetMetrics m;
    m.budget = M;
    const auto col = table.Column(table.BudgetIndex(M));
    if (!col.empty()) {
      m.auc = Auc(table, M, cfg);
      m.average_recall = AverageRecall(table, M);
      m.abo = Abo(table, M);
      m.mabo = Mabo(table, M);
      for (double t : cfg.iou_thresholds) {
        m.recall.push_back(RecallAt(table, t, M, cmp));
      }
    } else {
      m.recall.assign(cfg.iou_thresholds.size(), 0.0);
    }
    r.per_budget.push_back(std::move(m));
  }
  if (table.budgets().size() >= 2 && cfg.iou_thresholds.size() >= 2) {
    r.vus = Vus(table, cfg);
  }

  auto tag = [&](CurveResult c) {
    c.method_name = method;
    r.curves.push_back(std::move(c));
  };
  if (table.num_instances() > 0) {
    for (double t : cfg.iou_thresholds) tag(RecallVsBudget(table, t, cmp));
    for (int64_t M : table.budgets()) {
      tag(RecallVsThreshold(table, M, cfg.iou_thresholds, cmp));
    }
    tag(AucVsBudget(table, cfg));
    tag(ArVsBudget(table));
    tag(AboVsBudget(table));
  }
  return r;
}

MetricReport Evaluate(const Dataset& d, const ProposalSet& p,
                      const EvaluationConfig& cfg, int threads) {
  cfg.Validate();
  const BestOverlapTable table =
      BestOverlaps(d, p, cfg.proposal_budgets, cfg.matching, threads);
  return EvaluateMetrics(table, cfg, p.method_name());
}

}  // namespace propeval
