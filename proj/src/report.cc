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

#include "propeval/report.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <set>
#include <sstream>

#include "propeval/errors.h"
#include "propeval/format.h"
#include "propeval/io.h"

namespace propeval {

namespace fs = std::filesystem;

std::string Sha256Hex(const std::string& bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 15]);
  }
  return out;
}

void RunManifest::AddInput(const std::string& role, const std::string& path) {
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(path)) {
      if (e.is_regular_file() && e.path().extension() == ".xml") {
        files.push_back(e.path());
      }
    }
    std::sort(files.begin(), files.end());
    std::string blob;
    for (const auto& f : files) {
      blob += f.filename().string();
      blob.push_back('\0');
      blob += ReadFile(f.string());
      blob.push_back('\0');
    }
    inputs.push_back({role, path, Sha256Hex(blob)});
    return;
  }
  inputs.push_back({role, path, Sha256Hex(ReadFile(path))});
}

OrderedJson ManifestToJson(const RunManifest& m) {
  OrderedJson j;
  j["tool"] = kToolName;
  j["tool_version"] = m.tool_version;
  j["command"] = m.command;
  j["config"] = m.config;
  j["inputs"] = OrderedJson::array();
  for (const auto& in : m.inputs) {
    OrderedJson e;
    e["role"] = in.role;
    e["path"] = in.path;
    e["sha256"] = in.sha256;
    j["inputs"].push_back(std::move(e));
  }
  j["seeds"] = m.seeds;
  return j;
}

EvaluationConfig EvaluationConfigFromJson(const nlohmann::json& j,
                                          const std::string& source,
                                          bool* budgets_set) {
  if (!j.is_object()) throw InputError(source, "config must be a JSON object");
  static const std::set<std::string> kKnown = {
      "iou_thresholds",       "proposal_budgets", "threshold_comparison",
      "auc_threshold_range",  "auc_grid_step",    "ar_grid_step",
      "budget_axis",          "matching"};
  for (const auto& [key, value] : j.items()) {
    if (!kKnown.count(key)) {
      throw InputError(source, "unknown config field '" + key + "'");
    }
  }
  EvaluationConfig cfg;
  if (budgets_set) *budgets_set = j.contains("proposal_budgets");
  try {
    if (j.contains("iou_thresholds")) {
      cfg.iou_thresholds = j.at("iou_thresholds").get<std::vector<double>>();
    }
    if (j.contains("proposal_budgets")) {
      cfg.proposal_budgets = j.at("proposal_budgets").get<std::vector<int64_t>>();
    }
    if (j.contains("threshold_comparison")) {
      cfg.threshold_comparison =
          ParseThresholdComparison(j.at("threshold_comparison").get<std::string>());
    }
    if (j.contains("auc_threshold_range")) {
      const auto r = j.at("auc_threshold_range").get<std::vector<double>>();
      if (r.size() != 2) {
        throw InputError(source, "auc_threshold_range must be [lo, hi]");
      }
      cfg.auc_t_lo = r[0];
      cfg.auc_t_hi = r[1];
    }
    if (j.contains("auc_grid_step")) cfg.auc_grid_step = j.at("auc_grid_step").get<double>();
    if (j.contains("ar_grid_step")) cfg.ar_grid_step = j.at("ar_grid_step").get<double>();
    if (j.contains("budget_axis")) {
      cfg.budget_axis = ParseBudgetAxis(j.at("budget_axis").get<std::string>());
    }
    if (j.contains("matching")) {
      cfg.matching = ParseMatchingMode(j.at("matching").get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(source, std::string("bad config value: ") + e.what());
  } catch (const InputError& e) {
    if (e.source() == source) throw;
    throw InputError(source, e.detail());
  }
  try {
    cfg.Validate();
  } catch (const InputError& e) {
    throw InputError(source, e.detail());
  }
  return cfg;
}

OrderedJson EvaluationConfigToJson(const EvaluationConfig& cfg) {
  OrderedJson j;
  j["iou_thresholds"] = cfg.iou_thresholds;
  j["proposal_budgets"] = cfg.proposal_budgets;
  j["threshold_comparison"] = ToString(cfg.threshold_comparison);
  j["auc_threshold_range"] = {cfg.auc_t_lo, cfg.auc_t_hi};
  j["auc_grid_step"] = cfg.auc_grid_step;
  j["ar_grid_step"] = cfg.ar_grid_step;
  j["budget_axis"] = ToString(cfg.budget_axis);
  j["matching"] = ToString(cfg.matching);
  return j;
}

OrderedJson CurveToJson(const CurveResult& c) {
  OrderedJson j;
  j["name"] = c.name;
  j["method"] = c.method_name;
  j["x_label"] = c.x_label;
  j["y_label"] = c.y_label;
  j["metadata"] = OrderedJson::object();
  for (const auto& [k, v] : c.metadata) j["metadata"][k] = v;
  j["points"] = OrderedJson::array();
  for (const auto& [x, y] : c.points) j["points"].push_back({x, y});
  return j;
}

OrderedJson MetricReportToJson(const MetricReport& r) {
  OrderedJson j;
  j["method"] = r.method;
  j["num_instances"] = r.num_instances;
  j["per_budget"] = OrderedJson::array();
  for (const auto& b : r.per_budget) {
    OrderedJson e;
    e["budget"] = b.budget;
    e["auc"] = b.auc;
    e["average_recall"] = b.average_recall;
    e["abo"] = b.abo;
    e["mabo"] = b.mabo;
    e["recall"] = OrderedJson::array();
    for (size_t i = 0; i < b.recall.size(); ++i) {
      e["recall"].push_back({{"iou", r.config.iou_thresholds[i]},
                             {"recall", b.recall[i]}});
    }
    j["per_budget"].push_back(std::move(e));
  }
  j["vus"] = r.vus ? OrderedJson(*r.vus) : OrderedJson(nullptr);
  j["curves"] = OrderedJson::array();
  for (const auto& c : r.curves) j["curves"].push_back(CurveToJson(c));
  return j;
}

namespace {

OrderedJson CategoryNames(const Dataset& d, const std::vector<int64_t>& ids) {
  OrderedJson out = OrderedJson::array();
  for (int64_t id : ids) {
    out.push_back(d.categories()[static_cast<size_t>(id)].name);
  }
  return out;
}

}  // namespace

OrderedJson GameabilityToJson(const Dataset& full, const GameabilityReport& r) {
  OrderedJson j;
  j["subset_categories"] = CategoryNames(full, r.subset_categories);
  j["complement_categories"] = CategoryNames(full, r.complement_categories);
  j["methods"] = OrderedJson::array();
  for (const auto& m : r.methods) {
    OrderedJson e;
    e["method"] = m.method;
    e["budgets"] = m.budgets;
    e["auc_subset"] = m.auc_subset;
    e["auc_complement"] = m.auc_complement;
    e["auc_all"] = m.auc_all;
    e["drop"] = m.drop;
    e["regimes"] = {{"subset", MetricReportToJson(m.subset_report)},
                    {"complement", MetricReportToJson(m.complement_report)},
                    {"all", MetricReportToJson(m.all_report)}};
    j["methods"].push_back(std::move(e));
  }
  j["rankings"] = OrderedJson::array();
  for (const auto& rk : r.rankings) {
    j["rankings"].push_back({{"budget", rk.budget},
                             {"subset", rk.subset_order},
                             {"complement", rk.complement_order},
                             {"all", rk.all_order}});
  }
  j["inversions"] = OrderedJson::array();
  for (const auto& inv : r.inversions) {
    j["inversions"].push_back(
        {{"budget", inv.budget}, {"ahead", inv.ahead}, {"behind", inv.behind}});
  }
  return j;
}

OrderedJson BiasCapacityToJson(const BiasCapacityResult& r) {
  OrderedJson j;
  j["method"] = r.method;
  j["seen_counts"] = r.seen_counts;
  j["summary_budget"] = r.summary_budget;
  j["slope"] = r.slope;
  j["auc_vs_seen"] = CurveToJson(r.auc_vs_seen);
  j["improvement_vs_budget"] = CurveToJson(r.improvement_vs_budget);
  j["auc_curves"] = OrderedJson::array();
  for (const auto& c : r.auc_curves) j["auc_curves"].push_back(CurveToJson(c));
  return j;
}

OrderedJson FineGrainedToJson(const FineGrainedResult& r) {
  OrderedJson j;
  j["key"] = ToString(r.key);
  j["iou_threshold"] = r.iou_threshold;
  j["budget"] = r.budget;
  j["rows"] = OrderedJson::array();
  for (const auto& row : r.rows) {
    OrderedJson e;
    e["label"] = row.label;
    e["key_value"] = row.key_value;
    e["instance_count"] = row.instance_count;
    e["recall"] = row.recall;
    e["members"] = row.members;
    j["rows"].push_back(std::move(e));
  }
  j["curve"] = CurveToJson(r.curve);
  return j;
}

OrderedJson StatsToJson(const StatsReport& r) {
  OrderedJson j;
  j["total_instances"] = r.total_instances;
  j["inside_split"] = r.inside_split;
  j["outside_split"] = r.outside_split;
  j["covered_fraction"] = {{"inside", r.covered_fraction_inside},
                           {"outside", r.covered_fraction_outside},
                           {"all", r.covered_fraction_all}};
  j["per_category"] = OrderedJson::array();
  for (const auto& c : r.per_category) {
    OrderedJson e;
    e["category_id"] = c.category_id;
    e["name"] = c.name;
    e["in_split"] = c.in_split;
    e["instance_count"] = c.instance_count;
    e["mean_relative_area"] = c.mean_relative_area;
    e["mean_sqrt_relative_area"] = c.mean_sqrt_relative_area;
    j["per_category"].push_back(std::move(e));
  }
  return j;
}

OrderedJson WrapReport(const std::string& kind, const RunManifest& manifest,
                       OrderedJson result) {
  OrderedJson j;
  j["schema"] = std::string(kToolName) + "." + kind;
  j["manifest"] = ManifestToJson(manifest);
  j["result"] = std::move(result);
  return j;
}

std::string DumpJson(const OrderedJson& j) { return j.dump(2) + "\n"; }

std::vector<std::string> ValidateReport(const nlohmann::json& report) {
  std::vector<std::string> problems;
  if (!report.is_object()) return {"report is not a JSON object"};
  static const std::map<std::string, std::vector<std::string>> kResultKeys = {
      {"propeval.eval", {"dataset", "methods"}},
      {"propeval.gameability",
       {"subset_categories", "complement_categories", "methods", "rankings",
        "inversions"}},
      {"propeval.bias_capacity",
       {"method", "seen_counts", "summary_budget", "slope", "auc_vs_seen",
        "improvement_vs_budget", "auc_curves"}},
      {"propeval.finegrained", {"key", "iou_threshold", "budget", "rows", "curve"}},
      {"propeval.stats",
       {"total_instances", "inside_split", "outside_split", "covered_fraction",
        "per_category"}},
      {"propeval.synth", {"num_images", "full", "partial"}},
      {"propeval.convert", {"output", "sha256"}},
      {"propeval.propose", {"method", "num_images", "total_boxes", "output"}},
  };
  const auto schema = report.find("schema");
  std::vector<std::string> result_keys;
  if (schema == report.end() || !schema->is_string()) {
    problems.push_back("missing string field 'schema'");
  } else if (auto it = kResultKeys.find(schema->get<std::string>());
             it == kResultKeys.end()) {
    problems.push_back("unknown schema '" + schema->get<std::string>() + "'");
  } else {
    result_keys = it->second;
  }

  const auto manifest = report.find("manifest");
  if (manifest == report.end() || !manifest->is_object()) {
    problems.push_back("missing object field 'manifest'");
  } else {
    for (const char* key : {"tool", "tool_version", "command"}) {
      if (!manifest->contains(key) || !(*manifest)[key].is_string()) {
        problems.push_back(std::string("manifest.") + key + " must be a string");
      }
    }
    if (!manifest->contains("config") || !(*manifest)["config"].is_object()) {
      problems.push_back("manifest.config must be an object");
    }
    if (!manifest->contains("seeds") || !(*manifest)["seeds"].is_object()) {
      problems.push_back("manifest.seeds must be an object");
    }
    if (!manifest->contains("inputs") || !(*manifest)["inputs"].is_array()) {
      problems.push_back("manifest.inputs must be an array");
    } else {
      for (const auto& in : (*manifest)["inputs"]) {
        const bool ok = in.is_object() && in.contains("role") &&
                        in.contains("path") && in.contains("sha256") &&
                        in["sha256"].is_string() &&
                        in["sha256"].get<std::string>().size() == 64;
        if (!ok) {
          problems.push_back("manifest.inputs entries need role, path and a "
                             "64-digit sha256");
          break;
        }
      }
    }
  }

  const auto result = report.find("result");
  if (result == report.end() || !result->is_object()) {
    problems.push_back("missing object field 'result'");
  } else {
    for (const auto& key : result_keys) {
      if (!result->contains(key)) problems.push_back("result." + key + " missing");
    }
  }
  return problems;
}

// ---- CSV ------------------------------------------------------------------

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string MetricsCsv(const std::vector<MetricReport>& reports) {
  std::ostringstream out;
  out << "method,budget,auc,average_recall,abo,mabo";
  if (!reports.empty()) {
    for (double t : reports.front().config.iou_thresholds) {
      out << ",recall@" << FormatDouble(t);
    }
  }
  out << "\n";
  for (const auto& r : reports) {
    for (const auto& b : r.per_budget) {
      out << CsvField(r.method) << ',' << b.budget << ',' << FormatDouble(b.auc)
          << ',' << FormatDouble(b.average_recall) << ','
          << FormatDouble(b.abo) << ',' << FormatDouble(b.mabo);
      for (double v : b.recall) out << ',' << FormatDouble(v);
      out << "\n";
    }
  }
  return out.str();
}

std::string CurvesCsv(const std::vector<CurveResult>& curves) {
  std::ostringstream out;
  out << "curve,method,x,y\n";
  for (const auto& c : curves) {
    for (const auto& [x, y] : c.points) {
      out << CsvField(c.name) << ',' << CsvField(c.method_name) << ','
          << FormatDouble(x) << ',' << FormatDouble(y) << "\n";
    }
  }
  return out.str();
}

namespace {

size_t RankOf(const std::vector<std::string>& order, const std::string& name) {
  return static_cast<size_t>(std::find(order.begin(), order.end(), name) -
                             order.begin()) +
         1;
}

}  // namespace

std::string GameabilityCsv(const GameabilityReport& r) {
  std::ostringstream out;
  out << "method,budget,auc_subset,auc_complement,auc_all,drop,"
         "rank_subset,rank_complement,rank_all\n";
  for (const auto& m : r.methods) {
    for (size_t b = 0; b < m.budgets.size(); ++b) {
      const auto& rk = r.rankings[b];
      out << CsvField(m.method) << ',' << m.budgets[b] << ','
          << FormatDouble(m.auc_subset[b]) << ','
          << FormatDouble(m.auc_complement[b]) << ','
          << FormatDouble(m.auc_all[b]) << ',' << FormatDouble(m.drop[b]) << ','
          << RankOf(rk.subset_order, m.method) << ','
          << RankOf(rk.complement_order, m.method) << ','
          << RankOf(rk.all_order, m.method) << "\n";
    }
  }
  return out.str();
}

std::string InversionsCsv(const GameabilityReport& r) {
  std::ostringstream out;
  out << "budget,ahead,behind\n";
  for (const auto& inv : r.inversions) {
    out << inv.budget << ',' << CsvField(inv.ahead) << ','
        << CsvField(inv.behind) << "\n";
  }
  return out.str();
}

std::string BiasCapacityCsv(const BiasCapacityResult& r) {
  std::ostringstream out;
  out << "method,seen_count,budget,auc\n";
  for (size_t i = 0; i < r.auc_curves.size(); ++i) {
    for (const auto& [x, y] : r.auc_curves[i].points) {
      out << CsvField(r.method) << ',' << r.seen_counts[i] << ','
          << static_cast<int64_t>(x) << ',' << FormatDouble(y) << "\n";
    }
  }
  return out.str();
}

std::string FineGrainedCsv(const FineGrainedResult& r) {
  std::ostringstream out;
  out << "label,key_value,instance_count,recall,members\n";
  for (const auto& row : r.rows) {
    std::string members;
    for (size_t i = 0; i < row.members.size(); ++i) {
      if (i) members += ';';
      members += row.members[i];
    }
    out << CsvField(row.label) << ',' << FormatDouble(row.key_value) << ','
        << row.instance_count << ',' << FormatDouble(row.recall) << ','
        << CsvField(members) << "\n";
  }
  return out.str();
}

std::string StatsCsv(const StatsReport& r) {
  std::ostringstream out;
  out << "category_id,name,in_split,instance_count,mean_relative_area,"
         "mean_sqrt_relative_area\n";
  for (const auto& c : r.per_category) {
    out << c.category_id << ',' << CsvField(c.name) << ','
        << (c.in_split ? "true" : "false") << ',' << c.instance_count << ','
        << FormatDouble(c.mean_relative_area) << ','
        << FormatDouble(c.mean_sqrt_relative_area) << "\n";
  }
  return out.str();
}

// ---- SVG ------------------------------------------------------------------

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 64, kRight = 160, kTop = 36, kBottom = 52;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                    "#bcbd22", "#17becf"};

std::string Fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string XmlEscape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

std::vector<double> LinearTicks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (raw <= step) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step - 1e-9) * step; t <= hi + 1e-9 * span;
       t += step) {
    ticks.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
  }
  return ticks;
}

}  // namespace

std::string RenderSvg(const PlotSpec& spec) {
  double x_lo = 0, x_hi = 1;
  bool any = false;
  for (const auto& s : spec.series) {
    for (const auto& [x, y] : s.points) {
      if (spec.log_x && !(x > 0)) continue;
      if (!any) x_lo = x_hi = x;
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
      any = true;
    }
  }
  auto tx = [&](double x) { return spec.log_x ? std::log10(x) : x; };
  double a = tx(x_lo), b = tx(x_hi);
  if (!(b > a)) {
    a -= 0.5;
    b += 0.5;
  }
  const double y_lo = spec.y_min;
  const double y_hi = spec.y_max > spec.y_min ? spec.y_max : spec.y_min + 1;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (tx(x) - a) / (b - a) * pw; };
  auto py = [&](double y) {
    const double c = std::clamp(y, y_lo, y_hi);
    return kTop + (1.0 - (c - y_lo) / (y_hi - y_lo)) * ph;
  };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
    << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
    << kHeight << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<title>" << XmlEscape(spec.title) << "</title>\n";
  o << "<desc>\nseries,x,y\n";
  for (const auto& s : spec.series) {
    for (const auto& [x, y] : s.points) {
      o << XmlEscape(CsvField(s.label)) << ',' << FormatDouble(x) << ','
        << FormatDouble(y) << "\n";
    }
  }
  o << "</desc>\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << Fixed(kLeft + pw / 2) << "\" y=\"20\" "
    << "text-anchor=\"middle\" font-size=\"13\">" << XmlEscape(spec.title)
    << "</text>\n";

  // Grid and ticks.
  for (double t : LinearTicks(y_lo, y_hi)) {
    const std::string y = Fixed(py(t));
    o << "<line x1=\"" << Fixed(kLeft) << "\" y1=\"" << y << "\" x2=\""
      << Fixed(kLeft + pw) << "\" y2=\"" << y << "\" stroke=\"#ddd\"/>\n";
    o << "<text x=\"" << Fixed(kLeft - 6) << "\" y=\"" << y
      << "\" text-anchor=\"end\" dominant-baseline=\"middle\">"
      << FormatDouble(std::round(t * 1e6) / 1e6) << "</text>\n";
  }
  std::vector<double> xticks;
  if (spec.log_x) {
    for (double e = std::ceil(a - 1e-9); e <= b + 1e-9; e += 1.0) {
      xticks.push_back(std::pow(10.0, e));
    }
  } else {
    xticks = LinearTicks(a, b);
  }
  for (double t : xticks) {
    const std::string x = Fixed(px(t));
    o << "<line x1=\"" << x << "\" y1=\"" << Fixed(kTop) << "\" x2=\"" << x
      << "\" y2=\"" << Fixed(kTop + ph) << "\" stroke=\"#eee\"/>\n";
    o << "<text x=\"" << x << "\" y=\"" << Fixed(kTop + ph + 16)
      << "\" text-anchor=\"middle\">" << FormatDouble(std::round(t * 1e6) / 1e6)
      << "</text>\n";
  }
  o << "<rect x=\"" << Fixed(kLeft) << "\" y=\"" << Fixed(kTop) << "\" width=\""
    << Fixed(pw) << "\" height=\"" << Fixed(ph)
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<text x=\"" << Fixed(kLeft + pw / 2) << "\" y=\""
    << Fixed(kHeight - 12) << "\" text-anchor=\"middle\">"
    << XmlEscape(spec.x_label) << (spec.log_x ? " (log scale)" : "")
    << "</text>\n";
  o << "<text transform=\"translate(16 " << Fixed(kTop + ph / 2)
    << ") rotate(-90)\" text-anchor=\"middle\">" << XmlEscape(spec.y_label)
    << "</text>\n";

  // Series and legend.
  for (size_t i = 0; i < spec.series.size(); ++i) {
    const auto& s = spec.series[i];
    const char* color = kPalette[i % std::size(kPalette)];
    o << "<polyline fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& [x, y] : s.points) {
      if (spec.log_x && !(x > 0)) continue;
      if (!first) o << ' ';
      o << Fixed(px(x)) << ',' << Fixed(py(y));
      first = false;
    }
    o << "\"/>\n";
    const double ly = kTop + 8 + 16.0 * static_cast<double>(i);
    o << "<line x1=\"" << Fixed(kLeft + pw + 10) << "\" y1=\"" << Fixed(ly)
      << "\" x2=\"" << Fixed(kLeft + pw + 28) << "\" y2=\"" << Fixed(ly)
      << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << Fixed(kLeft + pw + 32) << "\" y=\"" << Fixed(ly)
      << "\" dominant-baseline=\"middle\">" << XmlEscape(s.label)
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace propeval
