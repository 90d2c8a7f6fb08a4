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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "propeval/data_model.h"
#include "propeval/diagnostics.h"
#include "propeval/errors.h"
#include "propeval/format.h"
#include "propeval/io.h"
#include "propeval/metrics.h"
#include "propeval/proposers.h"
#include "propeval/report.h"
#include "propeval/synth_data.h"

namespace propeval {

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
  std::string config;
  std::string out;
  int threads = 1;
  std::optional<uint64_t> seed;
  std::vector<std::string> formats = {"json", "csv", "svg"};

  bool Emits(const std::string& f) const {
    return std::find(formats.begin(), formats.end(), f) != formats.end();
  }
};

void AddCommon(CLI::App* cmd, CommonOptions* o, bool out_required = true) {
  cmd->add_option("--config", o->config, "Configuration file (JSON)");
  auto* out = cmd->add_option("--out", o->out, "Output directory");
  if (out_required) out->required();
  cmd->add_option("--threads", o->threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o->seed, "Master seed");
  cmd->add_option("--format", o->formats, "Report formats to write")
      ->delimiter(',')
      ->check(CLI::IsMember({"json", "csv", "svg"}));
}

// Output file names derived from method names keep [A-Za-z0-9._-].
std::string FileSafe(const std::string& name) {
  std::string out;
  for (char c : name) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '.' ||
                    c == '_' || c == '-';
    out.push_back(ok ? c : '_');
  }
  return out.empty() ? "_" : out;
}

class OutputWriter {
 public:
  OutputWriter(const CommonOptions& common, std::ostream& log)
      : common_(common), log_(log) {}

  void Write(const std::string& kind, const std::string& relative,
             const std::string& content) {
    if (!kind.empty() && !common_.Emits(kind)) return;
    const std::string path = (fs::path(common_.out) / relative).string();
    WriteFile(path, content);
    ++count_;
  }
  void Done() const {
    log_ << "wrote " << count_ << " file(s) to " << common_.out << "\n";
  }

 private:
  const CommonOptions& common_;
  std::ostream& log_;
  int count_ = 0;
};

struct LoadedConfig {
  EvaluationConfig cfg;
  bool budgets_set = false;
};

LoadedConfig LoadEvaluationConfig(const std::string& path, RunManifest* m) {
  LoadedConfig c;
  if (path.empty()) return c;
  c.cfg = EvaluationConfigFromJson(ParseJsonDocument(ReadFile(path), path),
                                   path, &c.budgets_set);
  m->AddInput("config", path);
  return c;
}

struct DatasetArgs {
  std::string path;
  std::string format = "auto";
  bool voc_exclusive = false;
};

void AddDatasetArgs(CLI::App* cmd, DatasetArgs* a) {
  cmd->add_option("--dataset", a->path, "Annotation file or VOC directory")
      ->required();
  cmd->add_option("--dataset-format", a->format,
                  "auto, canonical, coco or voc")
      ->check(CLI::IsMember({"auto", "canonical", "coco", "voc"}));
  cmd->add_flag("--voc-exclusive-coordinates", a->voc_exclusive,
                "VOC maxima are already exclusive");
}

Dataset LoadDatasetArgs(const DatasetArgs& a, RunManifest* m) {
  const DatasetFormat format = a.format == "auto" ? DetectDatasetFormat(a.path)
                                                  : ParseDatasetFormat(a.format);
  static const char* kNames[] = {"canonical", "coco", "voc"};
  m->config["dataset_format"] = kNames[static_cast<int>(format)];
  if (format == DatasetFormat::kVoc) {
    m->config["voc_exclusive_coordinates"] = a.voc_exclusive;
  }
  VocOptions voc;
  voc.exclusive_coordinates = a.voc_exclusive;
  Dataset d = LoadDataset(a.path, format, voc);
  m->AddInput("dataset", a.path);
  return d;
}

std::vector<ProposalSet> LoadProposalFiles(const std::vector<std::string>& paths,
                                           const Dataset& d, RunManifest* m) {
  std::vector<ProposalSet> sets;
  std::set<std::string> names;
  for (const auto& path : paths) {
    ProposalSet p = LoadProposals(path, ProposalFormatFromPath(path));
    if (!names.insert(p.method_name()).second) {
      throw InputError(path, "method name '" + p.method_name() +
                                 "' is used by an earlier proposals file");
    }
    const auto problems = ValidateProposals(d, p);
    constexpr size_t kShown = 5;
    for (size_t i = 0; i < std::min(problems.size(), kShown); ++i) {
      Warn(path + ": " + problems[i]);
    }
    if (problems.size() > kShown) {
      Warn(path + ": " + std::to_string(problems.size() - kShown) +
           " more proposal/dataset mismatches");
    }
    m->AddInput("proposals", path);
    sets.push_back(std::move(p));
  }
  return sets;
}

// Defaults are capped to the largest list any method supplies; budgets set
// in the config file are used as given.
void ResolveBudgets(LoadedConfig* c, const std::vector<ProposalSet>& sets) {
  if (c->budgets_set) return;
  size_t most = 0;
  for (const auto& p : sets) most = std::max(most, p.MaxBoxesPerImage());
  c->cfg.proposal_budgets =
      CapBudgets(c->cfg.proposal_budgets, static_cast<int64_t>(most));
}

OrderedJson DatasetSummary(const Dataset& d) {
  OrderedJson j;
  j["num_images"] = d.images().size();
  j["num_instances"] = d.instances().size();
  j["categories"] = OrderedJson::array();
  for (const auto& c : d.categories()) j["categories"].push_back(c.name);
  j["annotated_categories"] = OrderedJson::array();
  for (int64_t id : d.annotated_categories()) {
    j["annotated_categories"].push_back(d.categories()[static_cast<size_t>(id)].name);
  }
  return j;
}

PlotSeries SeriesOf(const std::string& label, const CurveResult& c) {
  return {label, c.points};
}

const CurveResult* FindCurve(const MetricReport& r, const std::string& name) {
  for (const auto& c : r.curves) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

// Up to three thresholds for recall-vs-budget plots: 0.5, 0.7 and 0.9 when
// configured, else the first, middle and last.
std::vector<double> PlotThresholds(const std::vector<double>& ts) {
  std::vector<double> picked;
  for (double t : ts) {
    for (double want : {0.5, 0.7, 0.9}) {
      if (std::abs(t - want) < 1e-9) picked.push_back(t);
    }
  }
  if (picked.empty()) {
    std::set<size_t> idx = {0, ts.size() / 2, ts.size() - 1};
    for (size_t i : idx) picked.push_back(ts[i]);
  }
  return picked;
}

void WriteMetricPlots(const std::vector<MetricReport>& reports,
                      const EvaluationConfig& cfg, OutputWriter* w) {
  const bool log_x = cfg.budget_axis == BudgetAxis::kLog;
  for (const char* metric : {"auc", "ar", "abo"}) {
    PlotSpec spec;
    spec.title = std::string(metric) + " vs #proposals";
    spec.x_label = "#proposals";
    spec.y_label = metric;
    spec.log_x = log_x;
    for (const auto& r : reports) {
      if (const auto* c = FindCurve(r, std::string(metric) + "_vs_budget")) {
        spec.series.push_back(SeriesOf(r.method, *c));
      }
    }
    w->Write("svg", std::string("plots/") + metric + "_vs_budget.svg",
             RenderSvg(spec));
  }
  for (const auto& r : reports) {
    const std::string dir = "plots/" + FileSafe(r.method) + "/";
    PlotSpec by_iou;
    by_iou.title = r.method + ": recall vs IOU threshold";
    by_iou.x_label = "IOU threshold";
    by_iou.y_label = "recall";
    PlotSpec by_budget;
    by_budget.title = r.method + ": recall vs #proposals";
    by_budget.x_label = "#proposals";
    by_budget.y_label = "recall";
    by_budget.log_x = log_x;
    for (const auto& c : r.curves) {
      if (c.name.rfind("recall_vs_iou@", 0) == 0) {
        by_iou.series.push_back(SeriesOf(c.name.substr(11), c));
      }
    }
    for (double t : PlotThresholds(cfg.iou_thresholds)) {
      if (const auto* c = FindCurve(r, "recall_vs_budget@" + FormatDouble(t))) {
        by_budget.series.push_back(SeriesOf("IOU " + FormatDouble(t), *c));
      }
    }
    w->Write("svg", dir + "recall_vs_iou.svg", RenderSvg(by_iou));
    w->Write("svg", dir + "recall_vs_budget.svg", RenderSvg(by_budget));
  }
}

void SetSeed(const CommonOptions& common, RunManifest* m) {
  if (common.seed) m->seeds["seed"] = *common.seed;
}

// ---- eval -----------------------------------------------------------------

struct EvalArgs {
  CommonOptions common;
  DatasetArgs dataset;
  std::vector<std::string> proposals;
};

void CmdEval(const EvalArgs& a, std::ostream& out) {
  RunManifest m;
  m.command = "eval";
  SetSeed(a.common, &m);
  LoadedConfig c = LoadEvaluationConfig(a.common.config, &m);
  const Dataset d = LoadDatasetArgs(a.dataset, &m);
  const auto sets = LoadProposalFiles(a.proposals, d, &m);
  ResolveBudgets(&c, sets);
  m.config["evaluation"] = EvaluationConfigToJson(c.cfg);

  std::vector<MetricReport> reports;
  std::vector<CurveResult> curves;
  OrderedJson result;
  result["dataset"] = DatasetSummary(d);
  result["methods"] = OrderedJson::array();
  for (const auto& p : sets) {
    reports.push_back(Evaluate(d, p, c.cfg, a.common.threads));
    result["methods"].push_back(MetricReportToJson(reports.back()));
    curves.insert(curves.end(), reports.back().curves.begin(),
                  reports.back().curves.end());
  }

  OutputWriter w(a.common, out);
  w.Write("json", "metrics.json", DumpJson(WrapReport("eval", m, result)));
  w.Write("csv", "metrics.csv", MetricsCsv(reports));
  w.Write("csv", "curves.csv", CurvesCsv(curves));
  WriteMetricPlots(reports, c.cfg, &w);
  for (const auto& r : reports) {
    out << r.method << ": " << r.num_instances << " instances";
    if (r.vus) out << ", VUS " << FormatDouble(*r.vus);
    out << "\n";
  }
  w.Done();
}

// ---- gameability ----------------------------------------------------------

struct GameabilityArgs {
  CommonOptions common;
  DatasetArgs dataset;
  std::string subset;
  std::vector<std::string> proposals;
};

void CmdGameability(const GameabilityArgs& a, std::ostream& out) {
  RunManifest m;
  m.command = "gameability";
  SetSeed(a.common, &m);
  LoadedConfig c = LoadEvaluationConfig(a.common.config, &m);
  const Dataset d = LoadDatasetArgs(a.dataset, &m);
  const std::vector<std::string> names = ReadNameList(a.subset);
  if (fs::is_regular_file(a.subset)) m.AddInput("subset", a.subset);
  const std::set<int64_t> subset = CategoryIdsByName(d, names, a.subset);
  const auto sets = LoadProposalFiles(a.proposals, d, &m);
  ResolveBudgets(&c, sets);
  m.config["subset"] = names;
  m.config["evaluation"] = EvaluationConfigToJson(c.cfg);

  const GameabilityReport r =
      ThreeRegimeEval(d, subset, sets, c.cfg, a.common.threads);

  OutputWriter w(a.common, out);
  w.Write("json", "gameability.json",
          DumpJson(WrapReport("gameability", m, GameabilityToJson(d, r))));
  w.Write("csv", "gameability.csv", GameabilityCsv(r));
  w.Write("csv", "inversions.csv", InversionsCsv(r));
  for (const auto& meth : r.methods) {
    PlotSpec spec;
    spec.title = meth.method + ": AUC by regime";
    spec.x_label = "#proposals";
    spec.y_label = "AUC / drop";
    spec.log_x = c.cfg.budget_axis == BudgetAxis::kLog;
    spec.y_min = std::min(0.0, std::floor(10.0 * *std::min_element(
                                              meth.drop.begin(), meth.drop.end())) /
                                   10.0);
    auto series = [&](const std::string& label, const std::vector<double>& ys) {
      PlotSeries s{label, {}};
      for (size_t b = 0; b < meth.budgets.size(); ++b) {
        s.points.emplace_back(static_cast<double>(meth.budgets[b]), ys[b]);
      }
      spec.series.push_back(std::move(s));
    };
    series("annotated subset", meth.auc_subset);
    series("complement", meth.auc_complement);
    series("all", meth.auc_all);
    series("drop", meth.drop);
    w.Write("svg", "plots/drop_vs_budget_" + FileSafe(meth.method) + ".svg",
            RenderSvg(spec));
  }
  if (r.inversions.empty()) out << "no ranking inversions\n";
  for (const auto& inv : r.inversions) {
    out << "M=" << inv.budget << ": " << inv.ahead << " ranks above "
        << inv.behind << " on the annotated subset but below it on the "
        << "complement\n";
  }
  w.Done();
}

// ---- bias-capacity --------------------------------------------------------

struct BiasArgs {
  CommonOptions common;
  std::string dataset;
  std::string dataset_format = "auto";
  std::string runs;
  std::string simulate;
  std::string dmp_config;
  std::vector<int64_t> seen_counts;
  int64_t summary_budget = 100;
};

void CmdBiasCapacity(const BiasArgs& a, std::ostream& out) {
  RunManifest m;
  m.command = "bias-capacity";
  LoadedConfig c = LoadEvaluationConfig(a.common.config, &m);
  if (a.simulate.empty() == a.runs.empty()) {
    throw InputError("bias-capacity",
                     "give exactly one of --runs (with --dataset) or --simulate");
  }
  BiasCapacityResult r;
  if (!a.simulate.empty()) {
    SynthConfig synth = SynthConfigFromJson(
        ParseJsonDocument(ReadFile(a.simulate), a.simulate), a.simulate);
    m.AddInput("synth_config", a.simulate);
    DmpConfig dmp;
    if (!a.dmp_config.empty()) {
      dmp = DmpConfigFromJson(
          ParseJsonDocument(ReadFile(a.dmp_config), a.dmp_config), nullptr,
          a.dmp_config);
      m.AddInput("dmp_config", a.dmp_config);
    }
    if (a.common.seed) {
      synth.seed = *a.common.seed;
      dmp.seed = *a.common.seed;
    }
    std::vector<int64_t> ks = a.seen_counts;
    if (ks.empty()) {
      for (int64_t k = 1; k <= synth.num_categories; ++k) ks.push_back(k);
    }
    dmp.seen_categories.clear();
    if (!c.budgets_set) {
      c.cfg.proposal_budgets = CapBudgets(c.cfg.proposal_budgets, dmp.budget);
    }
    m.seeds["synth"] = synth.seed;
    m.seeds["dmp"] = dmp.seed;
    m.config["mode"] = "simulate";
    m.config["synth"] = SynthConfigToJson(synth);
    m.config["dmp"] = DmpConfigToJson(dmp);
    m.config["seen_counts"] = ks;
    m.config["summary_budget"] = a.summary_budget;
    m.config["evaluation"] = EvaluationConfigToJson(c.cfg);
    const SynthWorld world = GenerateDataset(synth, a.common.threads);
    r = SimulateBiasCapacity(world.full, ks, dmp, c.cfg, a.summary_budget,
                             a.common.threads);
  } else {
    if (a.dataset.empty()) {
      throw InputError("bias-capacity", "--runs needs --dataset");
    }
    SetSeed(a.common, &m);
    DatasetArgs da;
    da.path = a.dataset;
    da.format = a.dataset_format;
    const Dataset d = LoadDatasetArgs(da, &m);
    const auto spec = ParseJsonDocument(ReadFile(a.runs), a.runs);
    m.AddInput("runs", a.runs);
    if (!spec.is_object() || !spec.contains("runs") || !spec["runs"].is_array()) {
      throw InputError(a.runs, "expected {\"runs\": [{\"seen_count\": k, "
                               "\"proposals\": path}, ...]}");
    }
    if (spec["runs"].empty()) throw InputError(a.runs, "runs list is empty");
    std::vector<BiasCapacityRun> runs;
    std::set<int64_t> seen;
    std::vector<ProposalSet> sets;
    OrderedJson echo = OrderedJson::array();
    for (const auto& e : spec["runs"]) {
      if (!e.is_object() || !e.contains("seen_count") ||
          !e["seen_count"].is_number_integer() || !e.contains("proposals") ||
          !e["proposals"].is_string()) {
        throw InputError(a.runs, "each run needs integer seen_count and "
                                 "string proposals");
      }
      const auto k = e["seen_count"].get<int64_t>();
      if (!seen.insert(k).second) {
        throw InputError(a.runs, "duplicate seen_count " + std::to_string(k));
      }
      fs::path path = e["proposals"].get<std::string>();
      if (path.is_relative()) path = fs::path(a.runs).parent_path() / path;
      ProposalSet p = LoadProposals(path.string(), ProposalFormatFromPath(path.string()));
      m.AddInput("proposals", path.string());
      echo.push_back({{"seen_count", k}, {"proposals", e["proposals"]}});
      sets.push_back(p);
      runs.push_back({k, std::move(p)});
    }
    ResolveBudgets(&c, sets);
    m.config["mode"] = "runs";
    m.config["runs"] = echo;
    m.config["summary_budget"] = a.summary_budget;
    m.config["evaluation"] = EvaluationConfigToJson(c.cfg);
    r = BiasCapacity(d, std::move(runs), c.cfg, a.summary_budget,
                     a.common.threads);
  }

  OutputWriter w(a.common, out);
  w.Write("json", "bias_capacity.json",
          DumpJson(WrapReport("bias_capacity", m, BiasCapacityToJson(r))));
  w.Write("csv", "bias_capacity.csv", BiasCapacityCsv(r));
  const bool log_x = c.cfg.budget_axis == BudgetAxis::kLog;
  PlotSpec seen;
  seen.title = r.method + ": AUC@" + std::to_string(r.summary_budget) +
               " vs #seen categories";
  seen.x_label = "#seen categories";
  seen.y_label = "AUC";
  seen.series.push_back(SeriesOf(r.method, r.auc_vs_seen));
  w.Write("svg", "plots/auc_vs_seen.svg", RenderSvg(seen));
  PlotSpec gain;
  gain.title = r.method + ": AUC improvement vs #proposals";
  gain.x_label = "#proposals";
  gain.y_label = r.improvement_vs_budget.y_label;
  gain.y_min = -1.0;
  gain.log_x = log_x;
  gain.series.push_back(SeriesOf(r.method, r.improvement_vs_budget));
  w.Write("svg", "plots/improvement_vs_budget.svg", RenderSvg(gain));
  PlotSpec curves;
  curves.title = r.method + ": AUC vs #proposals per #seen categories";
  curves.x_label = "#proposals";
  curves.y_label = "AUC";
  curves.log_x = log_x;
  for (size_t i = 0; i < r.auc_curves.size(); ++i) {
    curves.series.push_back(
        SeriesOf("seen " + std::to_string(r.seen_counts[i]), r.auc_curves[i]));
  }
  w.Write("svg", "plots/auc_vs_budget.svg", RenderSvg(curves));
  out << r.method << ": slope of AUC@" << r.summary_budget
      << " vs seen fraction = " << FormatDouble(r.slope) << "\n";
  w.Done();
}

// ---- synth ----------------------------------------------------------------

void CmdSynth(const CommonOptions& common, std::ostream& out) {
  RunManifest m;
  m.command = "synth";
  SynthConfig cfg;
  if (!common.config.empty()) {
    cfg = SynthConfigFromJson(ParseJsonDocument(ReadFile(common.config), common.config),
                              common.config);
    m.AddInput("synth_config", common.config);
  }
  if (common.seed) cfg.seed = *common.seed;
  m.seeds["synth"] = cfg.seed;
  m.config["synth"] = SynthConfigToJson(cfg);
  const SynthWorld world = GenerateDataset(cfg, common.threads);
  const std::string full = DatasetToCanonicalJson(world.full);
  const std::string partial = DatasetToCanonicalJson(world.partial);

  OrderedJson result;
  result["num_images"] = world.full.images().size();
  auto describe = [](const Dataset& d, const std::string& file,
                     const std::string& text) {
    OrderedJson j;
    j["path"] = file;
    j["sha256"] = Sha256Hex(text);
    j["num_instances"] = d.instances().size();
    j["annotated_categories"] = OrderedJson::array();
    for (int64_t id : d.annotated_categories()) {
      j["annotated_categories"].push_back(d.categories()[static_cast<size_t>(id)].name);
    }
    return j;
  };
  result["full"] = describe(world.full, "full.json", full);
  result["partial"] = describe(world.partial, "partial.json", partial);

  std::set<int64_t> annotated = world.partial.annotated_categories();
  const StatsReport stats = AnnotationStats(world.full, annotated);

  OutputWriter w(common, out);
  w.Write("", "full.json", full);
  w.Write("", "partial.json", partial);
  w.Write("json", "synth.json", DumpJson(WrapReport("synth", m, result)));
  w.Write("csv", "synth.csv", StatsCsv(stats));
  w.Done();
}

// ---- stats ----------------------------------------------------------------

struct StatsArgs {
  CommonOptions common;
  DatasetArgs dataset;
  std::string subset;
};

void CmdStats(const StatsArgs& a, std::ostream& out) {
  RunManifest m;
  m.command = "stats";
  SetSeed(a.common, &m);
  const Dataset d = LoadDatasetArgs(a.dataset, &m);
  std::set<int64_t> split;
  if (!a.subset.empty()) {
    const auto names = ReadNameList(a.subset);
    if (fs::is_regular_file(a.subset)) m.AddInput("subset", a.subset);
    split = CategoryIdsByName(d, names, a.subset);
    m.config["subset"] = names;
  } else {
    m.config["subset"] = OrderedJson::array();
  }
  const StatsReport r = AnnotationStats(d, split);
  OutputWriter w(a.common, out);
  w.Write("json", "stats.json", DumpJson(WrapReport("stats", m, StatsToJson(r))));
  w.Write("csv", "stats.csv", StatsCsv(r));
  out << "instances: " << r.total_instances << " (inside subset "
      << r.inside_split << ", outside " << r.outside_split << ")\n";
  w.Done();
}

// ---- convert --------------------------------------------------------------

struct ConvertArgs {
  CommonOptions common;
  std::string kind = "dataset";
  std::string in;
  std::string in_format = "auto";
  std::string out_file;
  std::string out_format = "auto";
  bool voc_exclusive = false;
};

void CmdConvert(const ConvertArgs& a, std::ostream& out) {
  RunManifest m;
  m.command = "convert";
  m.config["kind"] = a.kind;
  std::string text;
  if (a.kind == "dataset") {
    if (a.out_format != "auto" && a.out_format != "canonical") {
      throw InputError("--out-format", "datasets convert to 'canonical' only");
    }
    DatasetArgs da{a.in, a.in_format, a.voc_exclusive};
    text = DatasetToCanonicalJson(LoadDatasetArgs(da, &m));
    m.config["out_format"] = "canonical";
  } else {
    const ProposalFormat in_format = a.in_format == "auto"
                                         ? ProposalFormatFromPath(a.in)
                                         : ParseProposalFormat(a.in_format);
    const ProposalFormat out_format = a.out_format == "auto"
                                          ? ProposalFormatFromPath(a.out_file)
                                          : ParseProposalFormat(a.out_format);
    const ProposalSet p = LoadProposals(a.in, in_format);
    m.AddInput("proposals", a.in);
    m.config["in_format"] = in_format == ProposalFormat::kCsv ? "csv" : "json";
    m.config["out_format"] = out_format == ProposalFormat::kCsv ? "csv" : "json";
    text = out_format == ProposalFormat::kCsv ? ProposalsToCsv(p)
                                              : ProposalsToJson(p);
  }
  WriteFile(a.out_file, text);
  OrderedJson result;
  result["output"] = fs::path(a.out_file).filename().string();
  result["sha256"] = Sha256Hex(text);
  if (a.common.Emits("json")) {
    WriteFile(a.out_file + ".report.json",
              DumpJson(WrapReport("convert", m, result)));
  }
  out << "wrote " << a.out_file << "\n";
}

// ---- finegrained ----------------------------------------------------------

struct FineGrainedArgs {
  CommonOptions common;
  DatasetArgs dataset;
  std::string proposals;
  std::string key = "size";
  double iou = 0.7;
  int64_t budget = 1000;
  std::string size_measure = "sqrt_relative_area";
  std::string supercategories;
};

void CmdFineGrained(const FineGrainedArgs& a, std::ostream& out) {
  RunManifest m;
  m.command = "finegrained";
  SetSeed(a.common, &m);
  const LoadedConfig c = LoadEvaluationConfig(a.common.config, &m);
  const Dataset d = LoadDatasetArgs(a.dataset, &m);
  const auto sets = LoadProposalFiles({a.proposals}, d, &m);
  FineGrainedOptions o;
  o.key = ParseFineGrainedKey(a.key);
  o.iou_threshold = a.iou;
  o.budget = a.budget;
  o.size_measure = a.size_measure == "relative_area" ? SizeMeasure::kRelativeArea
                                                     : SizeMeasure::kSqrtRelativeArea;
  o.comparison = c.cfg.threshold_comparison;
  if (!a.supercategories.empty()) {
    o.supercategory_map =
        ParseSupercategoryCsv(ReadFile(a.supercategories), a.supercategories);
    m.AddInput("supercategories", a.supercategories);
  }
  m.config["key"] = a.key;
  m.config["iou_threshold"] = a.iou;
  m.config["budget"] = a.budget;
  m.config["size_measure"] = a.size_measure;
  m.config["threshold_comparison"] = ToString(o.comparison);

  const FineGrainedResult r = FineGrainedRecall(d, sets.front(), o, a.common.threads);
  OutputWriter w(a.common, out);
  w.Write("json", "finegrained.json",
          DumpJson(WrapReport("finegrained", m, FineGrainedToJson(r))));
  w.Write("csv", "finegrained.csv", FineGrainedCsv(r));
  PlotSpec spec;
  spec.title = sets.front().method_name() + ": recall@" + FormatDouble(a.iou) +
               ", M=" + std::to_string(a.budget) + ", by " + a.key;
  spec.x_label = r.curve.x_label;
  spec.y_label = "recall";
  spec.series.push_back(SeriesOf(sets.front().method_name(), r.curve));
  w.Write("svg", "plots/recall_by_" + a.key + ".svg", RenderSvg(spec));
  w.Done();
}

// ---- propose --------------------------------------------------------------

struct ProposeArgs {
  CommonOptions common;
  DatasetArgs dataset;
  std::string method = "random";
  std::string name;
  int64_t per_image = 1000;
  std::string dmp_config;
  std::string seen;
  std::vector<double> scales = {0.1, 0.2, 0.4, 0.8};
  std::vector<double> ratios = {0.5, 1.0, 2.0};
  double stride = 0.5;
  std::string proposal_format = "csv";
};

void CmdPropose(const ProposeArgs& a, std::ostream& out) {
  RunManifest m;
  m.command = "propose";
  const Dataset d = LoadDatasetArgs(a.dataset, &m);
  const uint64_t seed = a.common.seed.value_or(0);
  const std::string name = a.name.empty() ? a.method : a.name;
  m.config["method"] = a.method;
  m.config["name"] = name;
  ProposalSet p;
  if (a.method == "random") {
    m.seeds["seed"] = seed;
    m.config["per_image"] = a.per_image;
    p = RandomProposer(d, a.per_image, seed, name);
  } else if (a.method == "sliding_window") {
    SlidingWindowParams params;
    params.scales = a.scales;
    params.aspect_ratios = a.ratios;
    params.stride_fraction = a.stride;
    m.config["scales"] = a.scales;
    m.config["aspect_ratios"] = a.ratios;
    m.config["stride_fraction"] = a.stride;
    p = SlidingWindowProposer(d, params, name);
  } else {
    DmpConfig dmp;
    if (!a.dmp_config.empty()) {
      dmp = DmpConfigFromJson(ParseJsonDocument(ReadFile(a.dmp_config), a.dmp_config),
                              &d, a.dmp_config);
      m.AddInput("dmp_config", a.dmp_config);
    }
    if (!a.seen.empty()) {
      dmp.seen_categories = CategoryIdsByName(d, ReadNameList(a.seen), a.seen);
    }
    if (a.common.seed) dmp.seed = *a.common.seed;
    m.seeds["dmp"] = dmp.seed;
    m.config["dmp"] = DmpConfigToJson(dmp);
    p = OracleDmp(d, dmp, name, a.common.threads);
  }
  const ProposalFormat format = ParseProposalFormat(a.proposal_format);
  const std::string file =
      FileSafe(name) + (format == ProposalFormat::kCsv ? ".csv" : ".json");
  const std::string text =
      format == ProposalFormat::kCsv ? ProposalsToCsv(p) : ProposalsToJson(p);
  OrderedJson result;
  result["method"] = name;
  result["num_images"] = d.images().size();
  result["total_boxes"] = p.TotalBoxes();
  result["output"] = {{"path", file}, {"sha256", Sha256Hex(text)}};
  OutputWriter w(a.common, out);
  w.Write("", file, text);
  w.Write("json", FileSafe(name) + ".report.json",
          DumpJson(WrapReport("propose", m, result)));
  w.Done();
}

class ScopedWarnings {
 public:
  explicit ScopedWarnings(std::ostream& err)
      : previous_(SetWarningHandler(
            [&err](std::string_view msg) { err << "warning: " << msg << "\n"; })) {}
  ~ScopedWarnings() { SetWarningHandler(previous_); }

 private:
  WarningHandler previous_;
};

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Evaluation and diagnostics for class-agnostic object proposals",
               kToolName};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  EvalArgs eval;
  auto* c_eval = app.add_subcommand("eval", "Recall, AUC, AR, ABO and VUS");
  AddCommon(c_eval, &eval.common);
  AddDatasetArgs(c_eval, &eval.dataset);
  c_eval->add_option("--proposals", eval.proposals, "Proposal files")
      ->required();

  GameabilityArgs game;
  auto* c_game = app.add_subcommand(
      "gameability", "Compare methods on an annotated subset and its complement");
  AddCommon(c_game, &game.common);
  AddDatasetArgs(c_game, &game.dataset);
  c_game->add_option("--subset", game.subset,
                     "Category names: a file or a comma-separated list")
      ->required();
  c_game->add_option("--proposals", game.proposals, "Proposal files")
      ->required();

  BiasArgs bias;
  auto* c_bias = app.add_subcommand(
      "bias-capacity", "AUC as a function of the number of seen categories");
  AddCommon(c_bias, &bias.common);
  c_bias->add_option("--dataset", bias.dataset, "Annotation file");
  c_bias->add_option("--dataset-format", bias.dataset_format, "auto, canonical, coco or voc")
      ->check(CLI::IsMember({"auto", "canonical", "coco", "voc"}));
  c_bias->add_option("--runs", bias.runs, "JSON list of {seen_count, proposals}");
  c_bias->add_option("--simulate", bias.simulate, "Synthetic world config (JSON)");
  c_bias->add_option("--dmp-config", bias.dmp_config, "Oracle DMP config (JSON)");
  c_bias->add_option("--seen-counts", bias.seen_counts, "Seen counts to simulate")
      ->delimiter(',');
  c_bias->add_option("--summary-budget", bias.summary_budget,
                     "Budget of the AUC-vs-seen summary");

  CommonOptions synth;
  auto* c_synth = app.add_subcommand("synth", "Generate a synthetic box world");
  AddCommon(c_synth, &synth);

  StatsArgs stats;
  auto* c_stats = app.add_subcommand("stats", "Annotation statistics");
  AddCommon(c_stats, &stats.common);
  AddDatasetArgs(c_stats, &stats.dataset);
  c_stats->add_option("--subset", stats.subset, "Category names of the split");

  ConvertArgs conv;
  auto* c_conv = app.add_subcommand("convert", "Convert annotations or proposals");
  AddCommon(c_conv, &conv.common, /*out_required=*/false);
  c_conv->remove_option(c_conv->get_option("--out"));
  c_conv->add_option("--kind", conv.kind, "What the input holds")
      ->check(CLI::IsMember({"dataset", "proposals"}));
  c_conv->add_option("--in", conv.in, "Input path")->required();
  c_conv->add_option("--in-format", conv.in_format,
                     "auto, canonical, coco, voc (datasets) or csv, json");
  c_conv->add_option("--out", conv.out_file, "Output file")->required();
  c_conv->add_option("--out-format", conv.out_format,
                     "canonical (datasets) or csv, json (proposals)");
  c_conv->add_flag("--voc-exclusive-coordinates", conv.voc_exclusive,
                   "VOC maxima are already exclusive");

  FineGrainedArgs fine;
  auto* c_fine = app.add_subcommand("finegrained", "Per-category recall");
  AddCommon(c_fine, &fine.common);
  AddDatasetArgs(c_fine, &fine.dataset);
  c_fine->add_option("--proposals", fine.proposals, "Proposal file")->required();
  c_fine->add_option("--key", fine.key, "Grouping of the recall rows")
      ->check(CLI::IsMember({"size", "frequency", "supercategory"}));
  c_fine->add_option("--iou", fine.iou, "IOU threshold")
      ->check(CLI::Range(0.0, 1.0));
  c_fine->add_option("--budget", fine.budget, "Proposal budget")
      ->check(CLI::PositiveNumber);
  c_fine->add_option("--size-measure", fine.size_measure,
                     "Per-instance size used by --key size")
      ->check(CLI::IsMember({"sqrt_relative_area", "relative_area"}));
  c_fine->add_option("--supercategories", fine.supercategories,
                     "CSV of category,supercategory");

  ProposeArgs prop;
  auto* c_prop = app.add_subcommand("propose", "Write baseline proposals");
  AddCommon(c_prop, &prop.common);
  AddDatasetArgs(c_prop, &prop.dataset);
  c_prop->add_option("--method", prop.method, "Baseline generator")
      ->check(CLI::IsMember({"random", "sliding_window", "oracle_dmp"}));
  c_prop->add_option("--name", prop.name, "Method name (default: --method)");
  c_prop->add_option("--per-image", prop.per_image, "Random boxes per image");
  c_prop->add_option("--dmp-config", prop.dmp_config, "Oracle DMP config (JSON)");
  c_prop->add_option("--seen", prop.seen, "Seen category names for oracle_dmp");
  c_prop->add_option("--scales", prop.scales, "Window scales relative to the image size")->delimiter(',');
  c_prop->add_option("--ratios", prop.ratios, "Window aspect ratios (width / height)")->delimiter(',');
  c_prop->add_option("--stride", prop.stride, "Window step as a fraction of the window extent");
  c_prop->add_option("--proposal-format", prop.proposal_format,
                     "Proposal file format")
      ->check(CLI::IsMember({"csv", "json"}));

  std::vector<std::string> argv_store = {kToolName};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  ScopedWarnings warnings(err);
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (c_eval->parsed()) {
      CmdEval(eval, out);
    } else if (c_game->parsed()) {
      CmdGameability(game, out);
    } else if (c_bias->parsed()) {
      CmdBiasCapacity(bias, out);
    } else if (c_synth->parsed()) {
      CmdSynth(synth, out);
    } else if (c_stats->parsed()) {
      CmdStats(stats, out);
    } else if (c_conv->parsed()) {
      CmdConvert(conv, out);
    } else if (c_fine->parsed()) {
      CmdFineGrained(fine, out);
    } else if (c_prop->parsed()) {
      CmdPropose(prop, out);
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace propeval
