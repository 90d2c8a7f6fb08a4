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

#include "propeval/synth_data.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "propeval/errors.h"
#include "propeval/parallel.h"
#include "propeval/rng.h"

namespace propeval {

namespace {

constexpr uint64_t kSynthStream = 0x5359;

std::string PaddedId(const char* prefix, int64_t i, int64_t count,
                     int min_digits) {
  int digits = 1;
  for (int64_t c = count - 1; c >= 10; c /= 10) ++digits;
  digits = std::max(digits, min_digits);
  std::string n = std::to_string(i);
  if (static_cast<int>(n.size()) < digits) {
    n.insert(0, static_cast<size_t>(digits) - n.size(), '0');
  }
  return prefix + n;
}

struct DraftInstance {
  int64_t category_id;
  BoundingBox box;
};

}  // namespace

void SynthConfig::Validate() const {
  auto fail = [](const std::string& m) { throw InputError("synth config", m); };
  if (num_images <= 0) fail("num_images must be > 0");
  if (image_width <= 0 || image_height <= 0) fail("image_size must be positive");
  if (num_categories <= 0) fail("num_categories must be > 0");
  if (!category_frequency_weights.empty()) {
    if (static_cast<int64_t>(category_frequency_weights.size()) != num_categories) {
      fail("category_frequency_weights needs one entry per category");
    }
    for (double w : category_frequency_weights) {
      if (!(w > 0.0) || !std::isfinite(w)) fail("frequency weights must be positive");
    }
  }
  if (!category_size_params.empty()) {
    if (static_cast<int64_t>(category_size_params.size()) != num_categories) {
      fail("category_size_params needs one entry per category");
    }
    for (const auto& s : category_size_params) {
      if (!(s.mean_relative_side > 0.0 && s.mean_relative_side <= 1.0)) {
        fail("mean_relative_side must lie in (0, 1]");
      }
      if (!(s.jitter >= 0.0 && s.jitter < 1.0)) fail("jitter must lie in [0, 1)");
    }
  }
  if (instances_min < 0 || instances_max < instances_min) {
    fail("instances_per_image must satisfy 0 <= min <= max");
  }
  if (!(annotated_fraction_of_categories > 0.0 &&
        annotated_fraction_of_categories <= 1.0)) {
    fail("annotated_fraction_of_categories must lie in (0, 1]");
  }
}

int64_t SynthConfig::NumAnnotatedCategories() const {
  const double k = std::ceil(annotated_fraction_of_categories *
                                 static_cast<double>(num_categories) - 1e-9);
  return std::clamp<int64_t>(static_cast<int64_t>(k), 1, num_categories);
}

SynthConfig SynthConfigFromJson(const nlohmann::json& j,
                                const std::string& source) {
  if (!j.is_object()) throw InputError(source, "config must be a JSON object");
  static const std::set<std::string> kKnown = {
      "seed", "num_images", "image_size", "num_categories",
      "category_frequency_weights", "category_size_params",
      "instances_per_image", "annotated_fraction_of_categories"};
  for (const auto& [key, value] : j.items()) {
    if (!kKnown.count(key)) throw InputError(source, "unknown field '" + key + "'");
  }
  SynthConfig cfg;
  try {
    if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
    if (j.contains("num_images")) cfg.num_images = j.at("num_images").get<int64_t>();
    if (j.contains("image_size")) {
      const auto& s = j.at("image_size");
      if (!s.is_array() || s.size() != 2) {
        throw InputError(source, "image_size must be [width, height]");
      }
      cfg.image_width = s[0].get<int64_t>();
      cfg.image_height = s[1].get<int64_t>();
    }
    if (j.contains("num_categories")) {
      cfg.num_categories = j.at("num_categories").get<int64_t>();
    }
    if (j.contains("category_frequency_weights")) {
      cfg.category_frequency_weights =
          j.at("category_frequency_weights").get<std::vector<double>>();
    }
    if (j.contains("category_size_params")) {
      for (const auto& p : j.at("category_size_params")) {
        if (!p.is_array() || p.size() != 2) {
          throw InputError(source, "category_size_params entries are [side, jitter]");
        }
        cfg.category_size_params.push_back({p[0].get<double>(), p[1].get<double>()});
      }
    }
    if (j.contains("instances_per_image")) {
      const auto& r = j.at("instances_per_image");
      if (!r.is_array() || r.size() != 2) {
        throw InputError(source, "instances_per_image must be [min, max]");
      }
      cfg.instances_min = r[0].get<int64_t>();
      cfg.instances_max = r[1].get<int64_t>();
    }
    if (j.contains("annotated_fraction_of_categories")) {
      cfg.annotated_fraction_of_categories =
          j.at("annotated_fraction_of_categories").get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(source, std::string("bad field type: ") + e.what());
  }
  cfg.Validate();
  return cfg;
}

nlohmann::ordered_json SynthConfigToJson(const SynthConfig& cfg) {
  nlohmann::ordered_json j;
  j["seed"] = cfg.seed;
  j["num_images"] = cfg.num_images;
  j["image_size"] = {cfg.image_width, cfg.image_height};
  j["num_categories"] = cfg.num_categories;
  j["category_frequency_weights"] = cfg.category_frequency_weights;
  nlohmann::ordered_json sizes = nlohmann::ordered_json::array();
  for (const auto& s : cfg.category_size_params) {
    sizes.push_back({s.mean_relative_side, s.jitter});
  }
  j["category_size_params"] = std::move(sizes);
  j["instances_per_image"] = {cfg.instances_min, cfg.instances_max};
  j["annotated_fraction_of_categories"] = cfg.annotated_fraction_of_categories;
  return j;
}

SynthWorld GenerateDataset(const SynthConfig& cfg, int threads) {
  cfg.Validate();
  const auto n_cat = static_cast<size_t>(cfg.num_categories);
  std::vector<double> cumulative(n_cat);
  double total = 0.0;
  for (size_t c = 0; c < n_cat; ++c) {
    total += cfg.category_frequency_weights.empty()
                 ? 1.0
                 : cfg.category_frequency_weights[c];
    cumulative[c] = total;
  }
  const double W = static_cast<double>(cfg.image_width);
  const double H = static_cast<double>(cfg.image_height);

  std::vector<ImageRecord> images;
  for (int64_t i = 0; i < cfg.num_images; ++i) {
    images.push_back({PaddedId("img_", i, cfg.num_images, 6), cfg.image_width,
                      cfg.image_height});
  }

  std::vector<std::vector<DraftInstance>> drafts(images.size());
  ParallelFor(images.size(), threads, [&](size_t i) {
    Rng rng(DeriveSeed(cfg.seed, {kSynthStream, i}));
    const int64_t count = rng.UniformInt(cfg.instances_min, cfg.instances_max);
    for (int64_t k = 0; k < count; ++k) {
      const double u = rng.Uniform() * total;
      const size_t c = std::min<size_t>(
          n_cat - 1, static_cast<size_t>(
                         std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                         cumulative.begin()));
      const CategorySize size = cfg.category_size_params.empty()
                                    ? CategorySize{}
                                    : cfg.category_size_params[c];
      const double w = size.mean_relative_side *
                       (1.0 + size.jitter * rng.Uniform(-1.0, 1.0)) * W;
      const double h = size.mean_relative_side *
                       (1.0 + size.jitter * rng.Uniform(-1.0, 1.0)) * H;
      const double cx = rng.UniformOpen() * W;
      const double cy = rng.UniformOpen() * H;
      // The center is strictly inside the image, so clipping never empties.
      const BoundingBox box =
          *BoundingBox(cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h)
               .ClipTo(W, H);
      drafts[i].push_back({static_cast<int64_t>(c), box});
    }
  });

  std::vector<Category> categories;
  const int64_t groups = 4;
  const int64_t per_group = std::max<int64_t>(1, (cfg.num_categories + groups - 1) / groups);
  for (int64_t c = 0; c < cfg.num_categories; ++c) {
    categories.push_back({c, PaddedId("cat_", c, cfg.num_categories, 2),
                          "group_" + std::to_string(c / per_group)});
  }
  std::vector<GroundTruthInstance> instances;
  int64_t next_id = 0;
  for (size_t i = 0; i < drafts.size(); ++i) {
    for (const auto& d : drafts[i]) {
      instances.push_back({next_id++, images[i].image_id, d.category_id, d.box});
    }
  }
  std::set<int64_t> all;
  for (int64_t c = 0; c < cfg.num_categories; ++c) all.insert(c);

  Dataset full = Dataset::Create(std::move(images), std::move(categories),
                                 std::move(instances), all, "synth");
  std::set<int64_t> prefix;
  for (int64_t c = 0; c < cfg.NumAnnotatedCategories(); ++c) prefix.insert(c);
  Dataset partial = RestrictCategories(full, prefix);
  return {std::move(full), std::move(partial)};
}

}  // namespace propeval
