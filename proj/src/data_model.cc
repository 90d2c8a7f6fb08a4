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

#include "propeval/data_model.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "propeval/errors.h"

namespace propeval {

Dataset Dataset::Create(std::vector<ImageRecord> images,
                        std::vector<Category> categories,
                        std::vector<GroundTruthInstance> instances,
                        std::set<int64_t> annotated_categories,
                        const std::string& source) {
  Dataset d;
  std::sort(images.begin(), images.end(),
            [](const ImageRecord& a, const ImageRecord& b) {
              return a.image_id < b.image_id;
            });
  for (size_t i = 0; i < images.size(); ++i) {
    const ImageRecord& im = images[i];
    if (im.image_id.empty()) throw InputError(source, "image with empty id");
    if (im.width <= 0 || im.height <= 0) {
      throw InputError(source, "image '" + im.image_id +
                                   "' has non-positive width or height");
    }
    if (!d.image_index_.emplace(im.image_id, i).second) {
      throw InputError(source, "duplicate image id '" + im.image_id + "'");
    }
  }

  std::sort(categories.begin(), categories.end(),
            [](const Category& a, const Category& b) { return a.id < b.id; });
  std::set<std::string> names;
  for (size_t i = 0; i < categories.size(); ++i) {
    const Category& c = categories[i];
    if (c.id != static_cast<int64_t>(i)) {
      throw InputError(source, "category ids must be dense and unique; got " +
                                   std::to_string(c.id) + " at position " +
                                   std::to_string(i));
    }
    if (c.name.empty()) {
      throw InputError(source,
                       "category " + std::to_string(c.id) + " has empty name");
    }
    if (!names.insert(c.name).second) {
      throw InputError(source, "duplicate category name '" + c.name + "'");
    }
  }
  for (int64_t id : annotated_categories) {
    if (id < 0 || id >= static_cast<int64_t>(categories.size())) {
      throw InputError(source, "annotated category id " + std::to_string(id) +
                                   " not in category table");
    }
  }

  std::sort(instances.begin(), instances.end(),
            [](const GroundTruthInstance& a, const GroundTruthInstance& b) {
              return a.instance_id < b.instance_id;
            });
  d.by_image_.assign(images.size(), {});
  for (size_t i = 0; i < instances.size(); ++i) {
    const GroundTruthInstance& g = instances[i];
    const std::string what = "annotation " + std::to_string(g.instance_id);
    if (i > 0 && instances[i - 1].instance_id == g.instance_id) {
      throw InputError(source, "duplicate annotation id " +
                                   std::to_string(g.instance_id));
    }
    auto it = d.image_index_.find(g.image_id);
    if (it == d.image_index_.end()) {
      throw InputError(source,
                       what + " references unknown image '" + g.image_id + "'");
    }
    if (!annotated_categories.count(g.category_id)) {
      throw InputError(source, what + " has category " +
                                   std::to_string(g.category_id) +
                                   " which is not an annotated category");
    }
    const ImageRecord& im = images[it->second];
    if (g.box.x_min() < 0 || g.box.y_min() < 0 ||
        g.box.x_max() > static_cast<double>(im.width) ||
        g.box.y_max() > static_cast<double>(im.height)) {
      throw InputError(source, what + " box lies outside image '" +
                                   im.image_id + "'");
    }
    d.by_image_[it->second].push_back(i);
  }

  d.images_ = std::move(images);
  d.categories_ = std::move(categories);
  d.instances_ = std::move(instances);
  d.annotated_categories_ = std::move(annotated_categories);
  return d;
}

std::set<int64_t> Dataset::CategoryIds() const {
  std::set<int64_t> ids;
  for (const auto& c : categories_) ids.insert(c.id);
  return ids;
}

const Category* Dataset::FindCategory(int64_t id) const {
  if (id < 0 || id >= static_cast<int64_t>(categories_.size())) return nullptr;
  return &categories_[static_cast<size_t>(id)];
}

std::optional<int64_t> Dataset::CategoryIdByName(
    const std::string& name) const {
  for (const auto& c : categories_) {
    if (c.name == name) return c.id;
  }
  return std::nullopt;
}

std::optional<size_t> Dataset::ImageIndex(const std::string& image_id) const {
  auto it = image_index_.find(image_id);
  if (it == image_index_.end()) return std::nullopt;
  return it->second;
}

bool Dataset::operator==(const Dataset& other) const {
  return images_ == other.images_ && categories_ == other.categories_ &&
         instances_ == other.instances_ &&
         annotated_categories_ == other.annotated_categories_;
}

void ProposalSet::Add(const std::string& image_id, const BoundingBox& box,
                      double score) {
  auto& list = per_image_[image_id];
  list.emplace_back(box, score, static_cast<int64_t>(list.size()));
  normalized_ = false;
}

void ProposalSet::SetImage(const std::string& image_id,
                           std::vector<ScoredBox> boxes) {
  auto& list = per_image_[image_id];
  list = std::move(boxes);
  std::stable_sort(list.begin(), list.end(), ScoreOrder);
  for (size_t i = 0; i < list.size(); ++i) {
    list[i].source_rank = static_cast<int64_t>(i);
  }
}

void ProposalSet::Normalize() {
  if (normalized_) return;
  for (auto& [id, list] : per_image_) {
    std::stable_sort(list.begin(), list.end(), ScoreOrder);
    for (size_t i = 0; i < list.size(); ++i) {
      list[i].source_rank = static_cast<int64_t>(i);
    }
  }
  normalized_ = true;
}

const std::vector<ScoredBox>& ProposalSet::ForImage(
    const std::string& image_id) const {
  if (!normalized_) {
    throw std::logic_error("ProposalSet read before Normalize()");
  }
  static const std::vector<ScoredBox> kEmpty;
  auto it = per_image_.find(image_id);
  return it == per_image_.end() ? kEmpty : it->second;
}

size_t ProposalSet::TotalBoxes() const {
  size_t n = 0;
  for (const auto& [id, list] : per_image_) n += list.size();
  return n;
}

size_t ProposalSet::MaxBoxesPerImage() const {
  size_t n = 0;
  for (const auto& [id, list] : per_image_) n = std::max(n, list.size());
  return n;
}

std::vector<std::string> ValidateProposals(const Dataset& d,
                                           const ProposalSet& p) {
  std::vector<std::string> problems;
  for (const auto& [id, list] : p.per_image()) {
    if (!d.ImageIndex(id)) {
      problems.push_back("proposals for unknown image '" + id + "'");
    }
  }
  for (const auto& im : d.images()) {
    if (!p.per_image().count(im.image_id)) {
      problems.push_back("no proposals for image '" + im.image_id +
                         "' (treated as empty)");
    }
  }
  return problems;
}

Dataset RestrictCategories(const Dataset& d, const std::set<int64_t>& keep) {
  for (int64_t id : keep) {
    if (!d.FindCategory(id)) {
      throw InputError("restrict_categories",
                       "unknown category id " + std::to_string(id));
    }
  }
  std::vector<GroundTruthInstance> kept;
  for (const auto& g : d.instances()) {
    if (keep.count(g.category_id)) kept.push_back(g);
  }
  std::set<int64_t> annotated;
  std::set_intersection(keep.begin(), keep.end(),
                        d.annotated_categories().begin(),
                        d.annotated_categories().end(),
                        std::inserter(annotated, annotated.end()));
  return Dataset::Create(d.images(), d.categories(), std::move(kept),
                         std::move(annotated), "restrict_categories");
}

std::set<int64_t> ComplementCategories(const Dataset& d,
                                       const std::set<int64_t>& subset) {
  std::set<int64_t> out;
  for (int64_t id : d.annotated_categories()) {
    if (!subset.count(id)) out.insert(id);
  }
  return out;
}

std::set<int64_t> CategoryIdsByName(const Dataset& d,
                                    const std::vector<std::string>& names,
                                    const std::string& source) {
  std::set<int64_t> ids;
  for (const auto& n : names) {
    auto id = d.CategoryIdByName(n);
    if (!id) throw InputError(source, "unknown category name '" + n + "'");
    ids.insert(*id);
  }
  return ids;
}

double UnionArea(const std::vector<BoundingBox>& boxes) {
  if (boxes.empty()) return 0.0;
  std::vector<double> xs;
  xs.reserve(2 * boxes.size());
  for (const auto& b : boxes) {
    xs.push_back(b.x_min());
    xs.push_back(b.x_max());
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  double area = 0.0;
  std::vector<std::pair<double, double>> spans;
  for (size_t i = 0; i + 1 < xs.size(); ++i) {
    // Boxes covering the slab [xs[i], xs[i+1]) contribute their y-extent.
    spans.clear();
    for (const auto& b : boxes) {
      if (b.x_min() <= xs[i] && b.x_max() >= xs[i + 1]) {
        spans.emplace_back(b.y_min(), b.y_max());
      }
    }
    std::sort(spans.begin(), spans.end());
    double covered = 0.0;
    double lo = 0.0, hi = 0.0;
    bool open = false;
    for (const auto& [y0, y1] : spans) {
      if (!open || y0 > hi) {
        if (open) covered += hi - lo;
        lo = y0;
        hi = y1;
        open = true;
      } else if (y1 > hi) {
        hi = y1;
      }
    }
    if (open) covered += hi - lo;
    area += covered * (xs[i + 1] - xs[i]);
  }
  return area;
}

StatsReport AnnotationStats(const Dataset& d, const std::set<int64_t>& split) {
  for (int64_t id : split) {
    if (!d.FindCategory(id)) {
      throw InputError("annotation_stats",
                       "unknown category id " + std::to_string(id));
    }
  }
  StatsReport r;
  std::vector<double> sum_rel(d.categories().size(), 0.0);
  std::vector<double> sum_sqrt(d.categories().size(), 0.0);
  r.per_category.resize(d.categories().size());
  for (const auto& c : d.categories()) {
    auto& s = r.per_category[static_cast<size_t>(c.id)];
    s.category_id = c.id;
    s.name = c.name;
    s.in_split = split.count(c.id) > 0;
  }

  const auto& by_image = d.InstancesByImage();
  double cov_in = 0.0, cov_out = 0.0, cov_all = 0.0;
  for (size_t i = 0; i < d.images().size(); ++i) {
    const ImageRecord& im = d.image(i);
    const double image_area =
        static_cast<double>(im.width) * static_cast<double>(im.height);
    std::vector<BoundingBox> in_boxes, out_boxes, all_boxes;
    for (size_t k : by_image[i]) {
      const auto& g = d.instances()[k];
      const double rel = Area(g.box) / image_area;
      const size_t c = static_cast<size_t>(g.category_id);
      auto& s = r.per_category[c];
      ++s.instance_count;
      sum_rel[c] += rel;
      sum_sqrt[c] += std::sqrt(rel);
      ++r.total_instances;
      if (s.in_split) {
        ++r.inside_split;
        in_boxes.push_back(g.box);
      } else {
        ++r.outside_split;
        out_boxes.push_back(g.box);
      }
      all_boxes.push_back(g.box);
    }
    cov_in += UnionArea(in_boxes) / image_area;
    cov_out += UnionArea(out_boxes) / image_area;
    cov_all += UnionArea(all_boxes) / image_area;
  }
  for (size_t c = 0; c < r.per_category.size(); ++c) {
    auto& s = r.per_category[c];
    if (s.instance_count > 0) {
      s.mean_relative_area = sum_rel[c] / static_cast<double>(s.instance_count);
      s.mean_sqrt_relative_area =
          sum_sqrt[c] / static_cast<double>(s.instance_count);
    }
  }
  if (!d.images().empty()) {
    const double n = static_cast<double>(d.images().size());
    r.covered_fraction_inside = cov_in / n;
    r.covered_fraction_outside = cov_out / n;
    r.covered_fraction_all = cov_all / n;
  }
  return r;
}

}  // namespace propeval
