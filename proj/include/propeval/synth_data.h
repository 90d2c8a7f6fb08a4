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

#ifndef PROPEVAL_SYNTH_DATA_H_
#define PROPEVAL_SYNTH_DATA_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "propeval/data_model.h"

namespace propeval {

struct CategorySize {
  double mean_relative_side = 0.3;  // box side as a fraction of image side
  double jitter = 0.25;             // side scaled by 1 + jitter * U(-1, 1)

  bool operator==(const CategorySize&) const = default;
};

// Knobs of the synthetic box world. Empty weight / size lists mean "uniform"
// and "default size" for every category.
struct SynthConfig {
  uint64_t seed = 0;
  int64_t num_images = 100;
  int64_t image_width = 640;
  int64_t image_height = 480;
  int64_t num_categories = 10;
  std::vector<double> category_frequency_weights;
  std::vector<CategorySize> category_size_params;
  int64_t instances_min = 1;
  int64_t instances_max = 5;
  double annotated_fraction_of_categories = 1.0;

  // Throws InputError("synth config", ...).
  void Validate() const;
  // Number of leading categories in the partially annotated view.
  int64_t NumAnnotatedCategories() const;
};

// Field names: seed, num_images, image_size [w, h], num_categories,
// category_frequency_weights, category_size_params [[side, jitter], ...],
// instances_per_image [min, max], annotated_fraction_of_categories.
// Missing fields keep their defaults; unknown fields are an error.
SynthConfig SynthConfigFromJson(const nlohmann::json& j,
                                const std::string& source = "synth config");
nlohmann::ordered_json SynthConfigToJson(const SynthConfig& cfg);

struct SynthWorld {
  Dataset full;     // every instance, all categories annotated
  Dataset partial;  // only the leading annotated categories
};

// Deterministic in cfg. Image i draws from its own stream
// DeriveSeed(cfg.seed, {kSynthStream, i}): instance count, then per instance
// category, width factor, height factor, center x, center y. Boxes are
// centered uniformly in the image and clipped to it; overlaps are allowed.
SynthWorld GenerateDataset(const SynthConfig& cfg, int threads = 1);

}  // namespace propeval

#endif  // PROPEVAL_SYNTH_DATA_H_
