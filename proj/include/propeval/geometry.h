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

#ifndef PROPEVAL_GEOMETRY_H_
#define PROPEVAL_GEOMETRY_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace propeval {

// Axis-aligned box over the half-open region [x_min, x_max) x [y_min, y_max)
// in continuous pixel coordinates. Area is width * height (no "+1"); legacy
// inclusive-pixel sources are converted at parse time.
//
// Construction rejects non-finite coordinates and non-positive extents, so a
// BoundingBox value always has strictly positive area.
class BoundingBox {
 public:
  // Throws std::invalid_argument for degenerate or non-finite boxes.
  BoundingBox(double x_min, double y_min, double x_max, double y_max);

  static std::optional<BoundingBox> TryMake(double x_min, double y_min,
                                            double x_max, double y_max);

  double x_min() const { return x_min_; }
  double y_min() const { return y_min_; }
  double x_max() const { return x_max_; }
  double y_max() const { return y_max_; }
  double width() const { return x_max_ - x_min_; }
  double height() const { return y_max_ - y_min_; }

  // Intersection with [0, width) x [0, height); nullopt if that is empty.
  std::optional<BoundingBox> ClipTo(double width, double height) const;

  bool operator==(const BoundingBox&) const = default;

 private:
  struct Unchecked {};
  BoundingBox(Unchecked, double x_min, double y_min, double x_max,
              double y_max)
      : x_min_(x_min), y_min_(y_min), x_max_(x_max), y_max_(y_max) {}

  double x_min_;
  double y_min_;
  double x_max_;
  double y_max_;
};

struct ScoredBox {
  // Throws std::invalid_argument if score is not finite.
  ScoredBox(BoundingBox box, double score, int64_t source_rank = 0);

  BoundingBox box;
  double score;
  int64_t source_rank;

  bool operator==(const ScoredBox&) const = default;
};

inline double Area(const BoundingBox& b) { return b.width() * b.height(); }

inline double IntersectionArea(const BoundingBox& a, const BoundingBox& b) {
  const double w = (a.x_max() < b.x_max() ? a.x_max() : b.x_max()) -
                   (a.x_min() > b.x_min() ? a.x_min() : b.x_min());
  if (w <= 0.0) return 0.0;
  const double h = (a.y_max() < b.y_max() ? a.y_max() : b.y_max()) -
                   (a.y_min() > b.y_min() ? a.y_min() : b.y_min());
  if (h <= 0.0) return 0.0;
  return w * h;
}

// Intersection over union. Exactly 1 for identical boxes and exactly 0 for
// boxes with disjoint interiors.
inline double Iou(const BoundingBox& a, const BoundingBox& b) {
  if (a == b) return 1.0;
  const double inter = IntersectionArea(a, b);
  if (inter == 0.0) return 0.0;
  const double uni = Area(a) + Area(b) - inter;
  const double v = inter / uni;
  return v > 1.0 ? 1.0 : v;
}

// Orders by descending score, then ascending source_rank.
bool ScoreOrder(const ScoredBox& a, const ScoredBox& b);

// Greedy non-maximum suppression. Repeatedly keeps the highest-scoring
// surviving box (lower source_rank wins ties) and drops every remaining box
// whose IOU with it is strictly greater than iou_threshold. Output is in
// ScoreOrder. Throws std::invalid_argument unless 0 <= iou_threshold < 1.
std::vector<ScoredBox> Nms(std::span<const ScoredBox> boxes,
                           double iou_threshold);

}  // namespace propeval

#endif  // PROPEVAL_GEOMETRY_H_
