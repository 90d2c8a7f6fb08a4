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

#ifndef PROPEVAL_PROPOSERS_H_
#define PROPEVAL_PROPOSERS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "propeval/data_model.h"
#include "propeval/rng.h"

namespace propeval {

// Box with a uniformly distributed center in (0, W) x (0, H) and half-extents
// drawn uniformly up to the distance from the center to the nearest edge, so
// the box lies inside the image.
BoundingBox RandomBoxInImage(Rng& rng, double width, double height);

// Category-blind control: `per_image` random boxes per image with i.i.d.
// uniform scores. Throws InputError if per_image <= 0.
ProposalSet RandomProposer(const Dataset& d, int64_t per_image, uint64_t seed,
                           const std::string& method_name = "random");

struct SlidingWindowParams {
  // Window width = scale * image_width * sqrt(ratio),
  // window height = scale * image_height / sqrt(ratio).
  std::vector<double> scales;
  std::vector<double> aspect_ratios;
  // Stride along each axis as a fraction of the window extent on that axis.
  double stride_fraction = 0.5;
};

// Deterministic window grid, score 0, ranked row-major over
// (scale, ratio, y, x). Along an axis the windows start at 0 and step by the
// stride while they fit; a window wider than the image is placed once at 0 and
// clipped.
ProposalSet SlidingWindowProposer(const Dataset& d,
                                  const SlidingWindowParams& params,
                                  const std::string& method_name =
                                      "sliding_window");

// Synthetic detector presented as a proposal generator.
struct DmpConfig {
  std::set<int64_t> seen_categories;
  double hit_rate = 0.9;
  double jitter_sigma = 0.05;        // corner noise, fraction of box side
  double false_positive_rate = 5.0;  // expected spurious boxes per image
  double nms_threshold = 0.5;
  int64_t budget = 100;
  uint64_t seed = 0;
  // Gaussian noise added to the IOU-based detection score.
  double score_noise = 0.01;
  // Spurious boxes score uniformly in [0, false_positive_max_score).
  double false_positive_max_score = 0.2;

  void Validate() const;
};

// Field names as in DmpConfig; seen_categories is a list of ids or, with
// `dataset`, may also hold category names.
DmpConfig DmpConfigFromJson(const nlohmann::json& j,
                            const Dataset* dataset = nullptr,
                            const std::string& source = "dmp config");
nlohmann::ordered_json DmpConfigToJson(const DmpConfig& cfg);

struct TracedProposal {
  ScoredBox proposal;
  std::optional<int64_t> source_instance;  // nullopt for spurious boxes
};

// Per image (streams split by image, stage and instance so that changing one
// knob does not perturb the draws of another):
//   1. every instance of a seen category is detected with probability
//      hit_rate; its corners get N(0, jitter_sigma * side) noise and the
//      detection scores IOU(jittered, source) + N(0, score_noise);
//   2. Poisson(false_positive_rate) random boxes with low scores are added;
//   3. per-category lists are merge-sorted by score;
//   4. greedy NMS at nms_threshold;
//   5. the top `budget` boxes are kept.
ProposalSet OracleDmp(const Dataset& full, const DmpConfig& cfg,
                      const std::string& method_name = "oracle_dmp",
                      int threads = 1);
std::map<std::string, std::vector<TracedProposal>> OracleDmpTraced(
    const Dataset& full, const DmpConfig& cfg, int threads = 1);

}  // namespace propeval

#endif  // PROPEVAL_PROPOSERS_H_
