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

#include "propeval/geometry.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace propeval {

namespace {

bool ValidExtent(double lo, double hi) {
  return std::isfinite(lo) && std::isfinite(hi) && hi > lo;
}

}  // namespace

BoundingBox::BoundingBox(double x_min, double y_min, double x_max,
                         double y_max)
    : x_min_(x_min), y_min_(y_min), x_max_(x_max), y_max_(y_max) {
  if (!ValidExtent(x_min, x_max) || !ValidExtent(y_min, y_max)) {
    throw std::invalid_argument(
        "degenerate or non-finite box (" + std::to_string(x_min) + ", " +
        std::to_string(y_min) + ", " + std::to_string(x_max) + ", " +
        std::to_string(y_max) + ")");
  }
}

std::optional<BoundingBox> BoundingBox::TryMake(double x_min, double y_min,
                                                double x_max, double y_max) {
  if (!ValidExtent(x_min, x_max) || !ValidExtent(y_min, y_max)) {
    return std::nullopt;
  }
  return BoundingBox(Unchecked{}, x_min, y_min, x_max, y_max);
}

std::optional<BoundingBox> BoundingBox::ClipTo(double width,
                                               double height) const {
  return TryMake(std::max(x_min_, 0.0), std::max(y_min_, 0.0),
                 std::min(x_max_, width), std::min(y_max_, height));
}

ScoredBox::ScoredBox(BoundingBox b, double s, int64_t rank)
    : box(b), score(s), source_rank(rank) {
  if (!std::isfinite(s)) {
    throw std::invalid_argument("non-finite proposal score");
  }
}

bool ScoreOrder(const ScoredBox& a, const ScoredBox& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.source_rank < b.source_rank;
}

std::vector<ScoredBox> Nms(std::span<const ScoredBox> boxes,
                           double iou_threshold) {
  if (!(iou_threshold >= 0.0 && iou_threshold < 1.0)) {
    throw std::invalid_argument("NMS threshold must lie in [0, 1)");
  }
  std::vector<ScoredBox> sorted(boxes.begin(), boxes.end());
  std::stable_sort(sorted.begin(), sorted.end(), ScoreOrder);

  std::vector<ScoredBox> kept;
  std::vector<bool> suppressed(sorted.size(), false);
  for (size_t i = 0; i < sorted.size(); ++i) {
    if (suppressed[i]) continue;
    kept.push_back(sorted[i]);
    for (size_t j = i + 1; j < sorted.size(); ++j) {
      if (!suppressed[j] && Iou(sorted[i].box, sorted[j].box) > iou_threshold) {
        suppressed[j] = true;
      }
    }
  }
  return kept;
}

}  // namespace propeval
