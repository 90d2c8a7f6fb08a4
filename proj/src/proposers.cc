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

#include "propeval/proposers.h"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "propeval/errors.h"
#include "propeval/parallel.h"

namespace propeval {

namespace {

constexpr uint64_t kRandomStream = 0x524e44;
constexpr uint64_t kDetectStream = 0x444554;
constexpr uint64_t kFalsePositiveStream = 0x465053;

}  // namespace

BoundingBox RandomBoxInImage(Rng& rng, double width, double height) {
  for (;;) {
    const double cx = rng.UniformOpen() * width;
    const double cy = rng.UniformOpen() * height;
    const double hw = rng.UniformOpen() * std::min(cx, width - cx);
    const double hh = rng.UniformOpen() * std::min(cy, height - cy);
    if (auto b = BoundingBox::TryMake(cx - hw, cy - hh, cx + hw, cy + hh)) {
      return *b;
    }
  }
}

ProposalSet RandomProposer(const Dataset& d, int64_t per_image, uint64_t seed,
                           const std::string& method_name) {
  if (per_image <= 0) {
    throw InputError("random_proposer", "per_image must be positive");
  }
  ProposalSet set(method_name);
  for (size_t i = 0; i < d.images().size(); ++i) {
    const ImageRecord& im = d.image(i);
    Rng rng(DeriveSeed(seed, {kRandomStream, i}));
    std::vector<ScoredBox> boxes;
    boxes.reserve(static_cast<size_t>(per_image));
    for (int64_t k = 0; k < per_image; ++k) {
      const BoundingBox b = RandomBoxInImage(rng, static_cast<double>(im.width),
                                             static_cast<double>(im.height));
      boxes.emplace_back(b, rng.Uniform(), k);
    }
    set.SetImage(im.image_id, std::move(boxes));
  }
  return set;
}

ProposalSet SlidingWindowProposer(const Dataset& d,
                                  const SlidingWindowParams& params,
                                  const std::string& method_name) {
  if (params.scales.empty() || params.aspect_ratios.empty()) {
    throw InputError("sliding_window", "scales and aspect_ratios must be non-empty");
  }
  if (!(params.stride_fraction > 0.0 && params.stride_fraction <= 1.0)) {
    throw InputError("sliding_window", "stride_fraction must lie in (0, 1]");
  }
  for (double s : params.scales) {
    if (!(s > 0.0)) throw InputError("sliding_window", "scales must be positive");
  }
  for (double r : params.aspect_ratios) {
    if (!(r > 0.0)) throw InputError("sliding_window", "aspect ratios must be positive");
  }
  constexpr double kEps = 1e-9;
  ProposalSet set(method_name);
  for (const ImageRecord& im : d.images()) {
    const double W = static_cast<double>(im.width);
    const double H = static_cast<double>(im.height);
    std::vector<ScoredBox> boxes;
    int64_t rank = 0;
    for (double scale : params.scales) {
      for (double ratio : params.aspect_ratios) {
        const double w = scale * W * std::sqrt(ratio);
        const double h = scale * H / std::sqrt(ratio);
        const double sx = params.stride_fraction * w;
        const double sy = params.stride_fraction * h;
        for (int64_t iy = 0; iy == 0 || iy * sy + h <= H + kEps; ++iy) {
          for (int64_t ix = 0; ix == 0 || ix * sx + w <= W + kEps; ++ix) {
            const double x0 = static_cast<double>(ix) * sx;
            const double y0 = static_cast<double>(iy) * sy;
            auto b = BoundingBox(x0, y0, x0 + w, y0 + h).ClipTo(W, H);
            boxes.emplace_back(*b, 0.0, rank++);
          }
        }
      }
    }
    set.SetImage(im.image_id, std::move(boxes));
  }
  return set;
}

void DmpConfig::Validate() const {
  auto fail = [](const std::string& m) { throw InputError("dmp config", m); };
  if (!(hit_rate >= 0.0 && hit_rate <= 1.0)) fail("hit_rate must lie in [0, 1]");
  if (!(jitter_sigma >= 0.0)) fail("jitter_sigma must be >= 0");
  if (!(false_positive_rate >= 0.0) || !std::isfinite(false_positive_rate)) {
    fail("false_positive_rate must be finite and >= 0");
  }
  if (!(nms_threshold >= 0.0 && nms_threshold < 1.0)) {
    fail("nms_threshold must lie in [0, 1)");
  }
  if (budget <= 0) fail("budget must be positive");
  if (!(score_noise >= 0.0)) fail("score_noise must be >= 0");
  if (!(false_positive_max_score > 0.0)) {
    fail("false_positive_max_score must be positive");
  }
}

DmpConfig DmpConfigFromJson(const nlohmann::json& j, const Dataset* dataset,
                            const std::string& source) {
  if (!j.is_object()) throw InputError(source, "config must be a JSON object");
  static const std::set<std::string> kKnown = {
      "seen_categories", "hit_rate",    "jitter_sigma",
      "false_positive_rate", "nms_threshold", "budget",
      "seed", "score_noise", "false_positive_max_score"};
  for (const auto& [key, value] : j.items()) {
    if (!kKnown.count(key)) throw InputError(source, "unknown field '" + key + "'");
  }
  DmpConfig cfg;
  try {
    if (j.contains("seen_categories")) {
      for (const auto& v : j.at("seen_categories")) {
        if (v.is_number_integer()) {
          cfg.seen_categories.insert(v.get<int64_t>());
        } else if (v.is_string() && dataset) {
          auto id = dataset->CategoryIdByName(v.get<std::string>());
          if (!id) {
            throw InputError(source, "unknown category name '" +
                                         v.get<std::string>() + "'");
          }
          cfg.seen_categories.insert(*id);
        } else {
          throw InputError(source, "seen_categories entries must be ids");
        }
      }
    }
    if (j.contains("hit_rate")) cfg.hit_rate = j.at("hit_rate").get<double>();
    if (j.contains("jitter_sigma")) cfg.jitter_sigma = j.at("jitter_sigma").get<double>();
    if (j.contains("false_positive_rate")) {
      cfg.false_positive_rate = j.at("false_positive_rate").get<double>();
    }
    if (j.contains("nms_threshold")) cfg.nms_threshold = j.at("nms_threshold").get<double>();
    if (j.contains("budget")) cfg.budget = j.at("budget").get<int64_t>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
    if (j.contains("score_noise")) cfg.score_noise = j.at("score_noise").get<double>();
    if (j.contains("false_positive_max_score")) {
      cfg.false_positive_max_score = j.at("false_positive_max_score").get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(source, std::string("bad field type: ") + e.what());
  }
  cfg.Validate();
  return cfg;
}

nlohmann::ordered_json DmpConfigToJson(const DmpConfig& cfg) {
  nlohmann::ordered_json j;
  j["seen_categories"] = cfg.seen_categories;
  j["hit_rate"] = cfg.hit_rate;
  j["jitter_sigma"] = cfg.jitter_sigma;
  j["false_positive_rate"] = cfg.false_positive_rate;
  j["nms_threshold"] = cfg.nms_threshold;
  j["budget"] = cfg.budget;
  j["seed"] = cfg.seed;
  j["score_noise"] = cfg.score_noise;
  j["false_positive_max_score"] = cfg.false_positive_max_score;
  return j;
}

namespace {

struct Candidate {
  ScoredBox box;
  std::optional<int64_t> source_instance;
  int64_t group;  // category id, or -1 for spurious boxes
};

std::vector<TracedProposal> DmpForImage(const Dataset& full, size_t image_index,
                                        const DmpConfig& cfg) {
  const ImageRecord& im = full.image(image_index);
  const double W = static_cast<double>(im.width);
  const double H = static_cast<double>(im.height);
  std::vector<Candidate> candidates;
  int64_t rank = 0;

  for (size_t k : full.InstancesByImage()[image_index]) {
    const GroundTruthInstance& g = full.instances()[k];
    // Every instance consumes the same draws whether or not it is seen.
    Rng rng(DeriveSeed(cfg.seed, {kDetectStream, image_index,
                                  static_cast<uint64_t>(g.instance_id)}));
    const bool hit = rng.Bernoulli(cfg.hit_rate);
    const double sw = cfg.jitter_sigma * g.box.width();
    const double sh = cfg.jitter_sigma * g.box.height();
    double x0 = g.box.x_min() + sw * rng.Normal();
    double y0 = g.box.y_min() + sh * rng.Normal();
    double x1 = g.box.x_max() + sw * rng.Normal();
    double y1 = g.box.y_max() + sh * rng.Normal();
    const double noise = cfg.score_noise * rng.Normal();
    if (!hit || !cfg.seen_categories.count(g.category_id)) continue;
    if (x1 < x0) std::swap(x0, x1);
    if (y1 < y0) std::swap(y0, y1);
    auto raw = BoundingBox::TryMake(x0, y0, x1, y1);
    if (!raw) continue;
    auto box = raw->ClipTo(W, H);
    if (!box) continue;
    const double score = Iou(*box, g.box) + noise;
    candidates.push_back({ScoredBox(*box, score, rank++), g.instance_id,
                          g.category_id});
  }

  Rng fp_rng(DeriveSeed(cfg.seed, {kFalsePositiveStream, image_index}));
  const int64_t spurious = fp_rng.Poisson(cfg.false_positive_rate);
  for (int64_t k = 0; k < spurious; ++k) {
    const BoundingBox b = RandomBoxInImage(fp_rng, W, H);
    const double score = fp_rng.Uniform() * cfg.false_positive_max_score;
    candidates.push_back({ScoredBox(b, score, rank++), std::nullopt, -1});
  }

  // Per-category ranked lists, merged into one ranking by score.
  std::map<int64_t, std::vector<Candidate>> lists;
  for (auto& c : candidates) lists[c.group].push_back(std::move(c));
  auto by_score = [](const Candidate& a, const Candidate& b) {
    return ScoreOrder(a.box, b.box);
  };
  std::vector<Candidate> merged;
  for (auto& [group, list] : lists) {
    std::stable_sort(list.begin(), list.end(), by_score);
    std::vector<Candidate> next;
    next.reserve(merged.size() + list.size());
    std::merge(merged.begin(), merged.end(), list.begin(), list.end(),
               std::back_inserter(next), by_score);
    merged = std::move(next);
  }

  // NMS over the merged ranking; source_rank identifies the provenance.
  std::vector<ScoredBox> ranked;
  std::map<int64_t, std::optional<int64_t>> provenance;
  for (const auto& c : merged) {
    ranked.push_back(c.box);
    provenance[c.box.source_rank] = c.source_instance;
  }
  std::vector<ScoredBox> kept = Nms(ranked, cfg.nms_threshold);
  if (static_cast<int64_t>(kept.size()) > cfg.budget) {
    kept.erase(kept.begin() + cfg.budget, kept.end());
  }
  std::vector<TracedProposal> out;
  out.reserve(kept.size());
  for (size_t i = 0; i < kept.size(); ++i) {
    const auto source = provenance[kept[i].source_rank];
    ScoredBox p = kept[i];
    p.source_rank = static_cast<int64_t>(i);
    out.push_back({p, source});
  }
  return out;
}

}  // namespace

std::map<std::string, std::vector<TracedProposal>> OracleDmpTraced(
    const Dataset& full, const DmpConfig& cfg, int threads) {
  cfg.Validate();
  for (int64_t id : cfg.seen_categories) {
    if (!full.FindCategory(id)) {
      throw InputError("dmp config", "seen category " + std::to_string(id) +
                                         " not in dataset");
    }
  }
  std::vector<std::vector<TracedProposal>> per_image(full.images().size());
  ParallelFor(per_image.size(), threads,
              [&](size_t i) { per_image[i] = DmpForImage(full, i, cfg); });
  std::map<std::string, std::vector<TracedProposal>> out;
  for (size_t i = 0; i < per_image.size(); ++i) {
    out.emplace(full.image(i).image_id, std::move(per_image[i]));
  }
  return out;
}

ProposalSet OracleDmp(const Dataset& full, const DmpConfig& cfg,
                      const std::string& method_name, int threads) {
  ProposalSet set(method_name);
  for (auto& [image_id, traced] : OracleDmpTraced(full, cfg, threads)) {
    std::vector<ScoredBox> boxes;
    boxes.reserve(traced.size());
    for (auto& t : traced) boxes.push_back(t.proposal);
    set.SetImage(image_id, std::move(boxes));
  }
  return set;
}

}  // namespace propeval
