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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "propeval/errors.h"

namespace propeval {

const char* ToString(Regime r) {
  switch (r) {
    case Regime::kSubset:
      return "subset";
    case Regime::kComplement:
      return "complement";
    case Regime::kAll:
      return "all";
  }
  return "?";
}

namespace {

std::vector<double> AucPerBudget(const MetricReport& r) {
  std::vector<double> out;
  for (const auto& m : r.per_budget) out.push_back(m.auc);
  return out;
}

std::vector<std::string> RankBy(const std::vector<MethodGameability>& methods,
                                size_t budget_index,
                                const std::vector<double> MethodGameability::*field) {
  std::vector<const MethodGameability*> order;
  for (const auto& m : methods) order.push_back(&m);
  std::stable_sort(order.begin(), order.end(),
                   [&](const MethodGameability* a, const MethodGameability* b) {
                     const double va = (a->*field)[budget_index];
                     const double vb = (b->*field)[budget_index];
                     if (va != vb) return va > vb;
                     return a->method < b->method;
                   });
  std::vector<std::string> names;
  for (const auto* m : order) names.push_back(m->method);
  return names;
}

}  // namespace

GameabilityReport ThreeRegimeEval(const Dataset& full,
                                  const std::set<int64_t>& subset,
                                  const std::vector<ProposalSet>& proposals,
                                  const EvaluationConfig& cfg, int threads) {
  cfg.Validate();
  if (subset.empty()) {
    throw InputError("gameability", "annotated subset must not be empty");
  }
  for (int64_t id : subset) {
    if (!full.annotated_categories().count(id)) {
      throw InputError("gameability", "subset category " + std::to_string(id) +
                                          " is not annotated in the dataset");
    }
  }
  const std::set<int64_t> complement = ComplementCategories(full, subset);
  if (complement.empty()) {
    throw InputError("gameability",
                     "subset covers every annotated category: no complement regime");
  }
  std::set<std::string> names;
  for (const auto& p : proposals) {
    if (!names.insert(p.method_name()).second) {
      throw InputError("gameability", "duplicate method name '" + p.method_name() + "'");
    }
  }

  const Dataset subset_ds = RestrictCategories(full, subset);
  const Dataset complement_ds = RestrictCategories(full, complement);

  GameabilityReport report;
  report.subset_categories.assign(subset.begin(), subset.end());
  report.complement_categories.assign(complement.begin(), complement.end());
  for (const auto& p : proposals) {
    MethodGameability m;
    m.method = p.method_name();
    m.budgets = cfg.proposal_budgets;
    m.subset_report = Evaluate(subset_ds, p, cfg, threads);
    m.complement_report = Evaluate(complement_ds, p, cfg, threads);
    m.all_report = Evaluate(full, p, cfg, threads);
    m.auc_subset = AucPerBudget(m.subset_report);
    m.auc_complement = AucPerBudget(m.complement_report);
    m.auc_all = AucPerBudget(m.all_report);
    for (size_t b = 0; b < m.budgets.size(); ++b) {
      m.drop.push_back(m.auc_subset[b] - m.auc_complement[b]);
    }
    report.methods.push_back(std::move(m));
  }
  std::sort(report.methods.begin(), report.methods.end(),
            [](const MethodGameability& a, const MethodGameability& b) {
              return a.method < b.method;
            });

  for (size_t b = 0; b < cfg.proposal_budgets.size(); ++b) {
    BudgetRanking r;
    r.budget = cfg.proposal_budgets[b];
    r.subset_order = RankBy(report.methods, b, &MethodGameability::auc_subset);
    r.complement_order =
        RankBy(report.methods, b, &MethodGameability::auc_complement);
    r.all_order = RankBy(report.methods, b, &MethodGameability::auc_all);
    report.rankings.push_back(std::move(r));

    for (const auto& a : report.methods) {
      for (const auto& c : report.methods) {
        if (a.auc_subset[b] > c.auc_subset[b] &&
            a.auc_complement[b] < c.auc_complement[b]) {
          report.inversions.push_back({cfg.proposal_budgets[b], a.method, c.method});
        }
      }
    }
  }
  return report;
}

BiasCapacityResult BiasCapacity(const Dataset& full,
                                std::vector<BiasCapacityRun> runs,
                                const EvaluationConfig& cfg,
                                int64_t summary_budget, int threads) {
  cfg.Validate();
  if (runs.empty()) throw InputError("bias_capacity", "no runs supplied");
  std::stable_sort(runs.begin(), runs.end(),
                   [](const BiasCapacityRun& a, const BiasCapacityRun& b) {
                     return a.seen_count < b.seen_count;
                   });
  for (size_t i = 1; i < runs.size(); ++i) {
    if (runs[i].seen_count == runs[i - 1].seen_count) {
      throw InputError("bias_capacity", "duplicate seen count " +
                                            std::to_string(runs[i].seen_count));
    }
  }
  if (runs.size() < 2) {
    throw InputError("bias_capacity", "needs at least two distinct seen counts");
  }
  if (!std::binary_search(cfg.proposal_budgets.begin(),
                          cfg.proposal_budgets.end(), summary_budget)) {
    throw InputError("bias_capacity", "summary budget " +
                                          std::to_string(summary_budget) +
                                          " is not a configured budget");
  }

  BiasCapacityResult r;
  r.method = runs.front().proposals.method_name();
  r.summary_budget = summary_budget;
  std::vector<std::vector<double>> aucs;
  for (const auto& run : runs) {
    if (run.seen_count < 0) {
      throw InputError("bias_capacity", "seen counts must be non-negative");
    }
    const BestOverlapTable table = BestOverlaps(full, run.proposals,
                                                cfg.proposal_budgets,
                                                cfg.matching, threads);
    CurveResult c = AucVsBudget(table, cfg);
    c.name = "auc_vs_budget@seen=" + std::to_string(run.seen_count);
    c.method_name = run.proposals.method_name();
    c.metadata["seen_count"] = std::to_string(run.seen_count);
    std::vector<double> ys;
    for (const auto& [x, y] : c.points) ys.push_back(y);
    aucs.push_back(std::move(ys));
    r.seen_counts.push_back(run.seen_count);
    r.auc_curves.push_back(std::move(c));
  }

  const size_t sb = static_cast<size_t>(
      std::lower_bound(cfg.proposal_budgets.begin(), cfg.proposal_budgets.end(),
                       summary_budget) -
      cfg.proposal_budgets.begin());
  r.auc_vs_seen.name = "auc_vs_seen_categories";
  r.auc_vs_seen.x_label = "#seen categories";
  r.auc_vs_seen.y_label = "AUC@" + std::to_string(summary_budget);
  r.auc_vs_seen.method_name = r.method;
  std::vector<double> fx, fy;
  const double num_categories =
      std::max<double>(1.0, static_cast<double>(full.categories().size()));
  for (size_t i = 0; i < runs.size(); ++i) {
    r.auc_vs_seen.points.emplace_back(static_cast<double>(r.seen_counts[i]),
                                      aucs[i][sb]);
    fx.push_back(static_cast<double>(r.seen_counts[i]) / num_categories);
    fy.push_back(aucs[i][sb]);
  }
  const double mx = std::accumulate(fx.begin(), fx.end(), 0.0) / fx.size();
  const double my = std::accumulate(fy.begin(), fy.end(), 0.0) / fy.size();
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < fx.size(); ++i) {
    sxy += (fx[i] - mx) * (fy[i] - my);
    sxx += (fx[i] - mx) * (fx[i] - mx);
  }
  r.slope = sxx > 0.0 ? sxy / sxx : 0.0;

  r.improvement_vs_budget.name = "auc_improvement_vs_budget";
  r.improvement_vs_budget.x_label = "#proposals";
  r.improvement_vs_budget.y_label = "AUC(seen=" + std::to_string(r.seen_counts.back()) +
                                    ") - AUC(seen=" +
                                    std::to_string(r.seen_counts.front()) + ")";
  r.improvement_vs_budget.method_name = r.method;
  for (size_t b = 0; b < cfg.proposal_budgets.size(); ++b) {
    r.improvement_vs_budget.points.emplace_back(
        static_cast<double>(cfg.proposal_budgets[b]),
        aucs.back()[b] - aucs.front()[b]);
  }
  return r;
}

BiasCapacityResult SimulateBiasCapacity(const Dataset& full,
                                        const std::vector<int64_t>& seen_counts,
                                        const DmpConfig& base,
                                        const EvaluationConfig& cfg,
                                        int64_t summary_budget, int threads) {
  std::vector<BiasCapacityRun> runs;
  const auto num_categories = static_cast<int64_t>(full.categories().size());
  for (int64_t k : seen_counts) {
    if (k < 0 || k > num_categories) {
      throw InputError("bias_capacity", "seen count " + std::to_string(k) +
                                            " outside [0, #categories]");
    }
    DmpConfig dmp = base;
    dmp.seen_categories.clear();
    for (int64_t c = 0; c < k; ++c) dmp.seen_categories.insert(c);
    runs.push_back({k, OracleDmp(full, dmp, "oracle_dmp", threads)});
  }
  return BiasCapacity(full, std::move(runs), cfg, summary_budget, threads);
}

namespace {

std::vector<double> AverageRanks(const std::vector<double>& v) {
  std::vector<size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (size_t i = 0; i < idx.size();) {
    size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[idx[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double SpearmanRho(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw InputError("spearman", "needs two equally long samples of size >= 2");
  }
  const auto rx = AverageRanks(xs);
  const auto ry = AverageRanks(ys);
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

const char* ToString(FineGrainedKey k) {
  switch (k) {
    case FineGrainedKey::kSize:
      return "size";
    case FineGrainedKey::kFrequency:
      return "frequency";
    case FineGrainedKey::kSupercategory:
      return "supercategory";
  }
  return "?";
}

FineGrainedKey ParseFineGrainedKey(const std::string& s) {
  if (s == "size") return FineGrainedKey::kSize;
  if (s == "frequency") return FineGrainedKey::kFrequency;
  if (s == "supercategory") return FineGrainedKey::kSupercategory;
  throw InputError("finegrained", "unknown key '" + s +
                                      "' (expected size, frequency or supercategory)");
}

FineGrainedResult FineGrainedRecall(const Dataset& full, const ProposalSet& p,
                                    const FineGrainedOptions& options,
                                    int threads) {
  if (options.budget <= 0) throw InputError("finegrained", "budget must be positive");
  const std::vector<int64_t> budgets = {options.budget};
  const BestOverlapTable table =
      BestOverlaps(full, p, budgets, MatchingMode::kIndependent, threads);
  const auto col = table.Column(0);

  const size_t n_cat = full.categories().size();
  std::vector<int64_t> count(n_cat, 0), hits(n_cat, 0);
  for (size_t i = 0; i < col.size(); ++i) {
    const auto c = static_cast<size_t>(table.instances()[i].category_id);
    ++count[c];
    if (Passes(col[i], options.iou_threshold, options.comparison)) ++hits[c];
  }
  const StatsReport stats = AnnotationStats(full, {});

  FineGrainedResult r;
  r.key = options.key;
  r.iou_threshold = options.iou_threshold;
  r.budget = options.budget;

  if (options.key == FineGrainedKey::kSupercategory) {
    std::map<std::string, FineGrainedRow> groups;
    std::map<std::string, int64_t> group_hits;
    for (const auto& c : full.categories()) {
      const auto ci = static_cast<size_t>(c.id);
      if (count[ci] == 0) continue;
      std::string group;
      if (auto it = options.supercategory_map.find(c.name);
          it != options.supercategory_map.end()) {
        group = it->second;
      } else if (c.supercategory) {
        group = *c.supercategory;
      } else {
        throw InputError("finegrained", "category '" + c.name +
                                            "' has no supercategory");
      }
      auto& row = groups[group];
      row.label = group;
      row.instance_count += count[ci];
      row.members.push_back(c.name);
      group_hits[group] += hits[ci];
    }
    for (auto& [name, row] : groups) {
      row.recall = static_cast<double>(group_hits[name]) /
                   static_cast<double>(row.instance_count);
      r.rows.push_back(std::move(row));
    }
  } else {
    for (const auto& c : full.categories()) {
      const auto ci = static_cast<size_t>(c.id);
      if (count[ci] == 0) continue;
      FineGrainedRow row;
      row.label = c.name;
      row.instance_count = count[ci];
      row.recall = static_cast<double>(hits[ci]) / static_cast<double>(count[ci]);
      if (options.key == FineGrainedKey::kFrequency) {
        row.key_value = static_cast<double>(count[ci]);
      } else {
        const auto& s = stats.per_category[ci];
        row.key_value = options.size_measure == SizeMeasure::kSqrtRelativeArea
                            ? s.mean_sqrt_relative_area
                            : s.mean_relative_area;
      }
      r.rows.push_back(std::move(row));
    }
    std::stable_sort(r.rows.begin(), r.rows.end(),
                     [](const FineGrainedRow& a, const FineGrainedRow& b) {
                       return a.key_value < b.key_value;
                     });
  }

  r.curve.name = std::string("recall_by_") + ToString(options.key);
  r.curve.x_label = std::string("category rank by ") + ToString(options.key);
  r.curve.y_label = "recall";
  r.curve.method_name = p.method_name();
  for (size_t i = 0; i < r.rows.size(); ++i) {
    r.curve.points.emplace_back(static_cast<double>(i + 1), r.rows[i].recall);
  }
  return r;
}

std::map<std::string, std::string> ParseSupercategoryCsv(
    const std::string& text, const std::string& source) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw InputError(source, "expected `category,supercategory`", line_no);
    }
    const std::string name = line.substr(0, comma);
    const std::string group = line.substr(comma + 1);
    if (line_no == 1 && name == "category" && group == "supercategory") continue;
    if (name.empty() || group.empty()) {
      throw InputError(source, "empty category or supercategory", line_no);
    }
    out[name] = group;
  }
  return out;
}

}  // namespace propeval
