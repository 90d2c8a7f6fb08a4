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

#ifndef PROPEVAL_REPORT_H_
#define PROPEVAL_REPORT_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "propeval/data_model.h"
#include "propeval/diagnostics.h"
#include "propeval/metrics.h"

namespace propeval {

inline constexpr char kToolName[] = "propeval";
inline constexpr char kToolVersion[] = "0.1.0";

using OrderedJson = nlohmann::ordered_json;

// Lower-case hex SHA-256 of `bytes`.
std::string Sha256Hex(const std::string& bytes);

struct InputDigest {
  std::string role;
  std::string path;
  std::string sha256;
};

// Everything needed to reproduce a report. Output locations and the thread
// count are left out on purpose: they do not change any result.
struct RunManifest {
  std::string command;
  OrderedJson config = OrderedJson::object();
  std::vector<InputDigest> inputs;
  std::string tool_version = kToolVersion;
  OrderedJson seeds = OrderedJson::object();

  // Hashes a file, or every *.xml file of a directory (name and content, in
  // sorted name order).
  void AddInput(const std::string& role, const std::string& path);
};

OrderedJson ManifestToJson(const RunManifest& m);

// Keys follow EvaluationConfig; auc_threshold_range is [lo, hi]. Unknown keys
// are an error. `budgets_set` reports whether proposal_budgets was given.
EvaluationConfig EvaluationConfigFromJson(const nlohmann::json& j,
                                          const std::string& source,
                                          bool* budgets_set = nullptr);
OrderedJson EvaluationConfigToJson(const EvaluationConfig& cfg);

OrderedJson CurveToJson(const CurveResult& c);
OrderedJson MetricReportToJson(const MetricReport& r);
OrderedJson GameabilityToJson(const Dataset& full, const GameabilityReport& r);
OrderedJson BiasCapacityToJson(const BiasCapacityResult& r);
OrderedJson FineGrainedToJson(const FineGrainedResult& r);
OrderedJson StatsToJson(const StatsReport& r);

// {"schema": "propeval.<kind>", "manifest": {...}, "result": {...}}
OrderedJson WrapReport(const std::string& kind, const RunManifest& manifest,
                       OrderedJson result);
// Two-space indented JSON plus a trailing newline.
std::string DumpJson(const OrderedJson& j);

// Schema check for wrapped reports. Returns the problems found; empty means
// valid.
std::vector<std::string> ValidateReport(const nlohmann::json& report);

// ---- CSV ------------------------------------------------------------------

// method,budget,auc,average_recall,abo,mabo,recall@<t>...
std::string MetricsCsv(const std::vector<MetricReport>& reports);
// curve,method,x,y
std::string CurvesCsv(const std::vector<CurveResult>& curves);
// method,budget,auc_subset,auc_complement,auc_all,drop,
// rank_subset,rank_complement,rank_all
std::string GameabilityCsv(const GameabilityReport& r);
// budget,ahead,behind
std::string InversionsCsv(const GameabilityReport& r);
// method,seen_count,budget,auc
std::string BiasCapacityCsv(const BiasCapacityResult& r);
// label,key_value,instance_count,recall,members
std::string FineGrainedCsv(const FineGrainedResult& r);
// category_id,name,in_split,instance_count,mean_relative_area,
// mean_sqrt_relative_area
std::string StatsCsv(const StatsReport& r);

// Quotes a CSV field when it contains a comma, quote or newline.
std::string CsvField(const std::string& s);

// ---- SVG ------------------------------------------------------------------

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  // Fixed y range; recall-like quantities use [0, 1].
  double y_min = 0.0;
  double y_max = 1.0;
  std::vector<PlotSeries> series;
};

// Static line chart. The plotted values are embedded as a CSV table in the
// SVG <desc> element.
std::string RenderSvg(const PlotSpec& spec);

}  // namespace propeval

#endif  // PROPEVAL_REPORT_H_
