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

#ifndef PROPEVAL_DATA_MODEL_H_
#define PROPEVAL_DATA_MODEL_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "propeval/geometry.h"

namespace propeval {

struct Category {
  int64_t id = 0;
  std::string name;
  std::optional<std::string> supercategory;

  bool operator==(const Category&) const = default;
};

struct ImageRecord {
  std::string image_id;
  int64_t width = 0;
  int64_t height = 0;

  bool operator==(const ImageRecord&) const = default;
};

struct GroundTruthInstance {
  int64_t instance_id = 0;
  std::string image_id;
  int64_t category_id = 0;
  BoundingBox box;

  bool operator==(const GroundTruthInstance&) const = default;
};

// Images, category universe and ground-truth instances, plus the subset of
// categories that is actually annotated. Partial annotation is modeled here:
// a category outside `annotated_categories` may exist in the world but has no
// instances in this dataset.
//
// Immutable once built. Images, categories and instances are stored sorted by
// id; Create() validates every cross-reference.
class Dataset {
 public:
  Dataset() = default;

  // Throws InputError(source, ...) on any violated invariant: duplicate or
  // non-dense category ids, duplicate names, unknown image/category
  // references, instances of unannotated categories, boxes outside their
  // image, non-positive image sizes.
  static Dataset Create(std::vector<ImageRecord> images,
                        std::vector<Category> categories,
                        std::vector<GroundTruthInstance> instances,
                        std::set<int64_t> annotated_categories,
                        const std::string& source = "dataset");

  const std::vector<ImageRecord>& images() const { return images_; }
  const std::vector<Category>& categories() const { return categories_; }
  const std::vector<GroundTruthInstance>& instances() const {
    return instances_;
  }
  const std::set<int64_t>& annotated_categories() const {
    return annotated_categories_;
  }

  std::set<int64_t> CategoryIds() const;
  const Category* FindCategory(int64_t id) const;
  std::optional<int64_t> CategoryIdByName(const std::string& name) const;
  // Index into images(), or nullopt.
  std::optional<size_t> ImageIndex(const std::string& image_id) const;
  const ImageRecord& image(size_t index) const { return images_[index]; }
  // Indices into instances() grouped by image index.
  const std::vector<std::vector<size_t>>& InstancesByImage() const {
    return by_image_;
  }

  bool operator==(const Dataset& other) const;

 private:
  std::vector<ImageRecord> images_;
  std::vector<Category> categories_;
  std::vector<GroundTruthInstance> instances_;
  std::set<int64_t> annotated_categories_;
  std::map<std::string, size_t> image_index_;
  std::vector<std::vector<size_t>> by_image_;
};

// Ranked candidate boxes per image for one method.
//
// Within every image the list is kept in ScoreOrder (descending score, ties
// by ascending source_rank) and source_rank is renumbered to the position in
// that list, so two sets with the same ranked content compare equal.
class ProposalSet {
 public:
  explicit ProposalSet(std::string method_name = "")
      : method_name_(std::move(method_name)) {}

  // Appends to an image's list; the list is re-normalized lazily by
  // Normalize(), which every reader below requires to have been called.
  void Add(const std::string& image_id, const BoundingBox& box, double score);
  // Replaces an image's list and normalizes that list only.
  void SetImage(const std::string& image_id, std::vector<ScoredBox> boxes);
  void Normalize();

  const std::string& method_name() const { return method_name_; }
  void set_method_name(std::string name) { method_name_ = std::move(name); }

  // Empty list for unknown images.
  const std::vector<ScoredBox>& ForImage(const std::string& image_id) const;
  const std::map<std::string, std::vector<ScoredBox>>& per_image() const {
    return per_image_;
  }
  size_t TotalBoxes() const;
  size_t MaxBoxesPerImage() const;

  bool operator==(const ProposalSet& other) const {
    return method_name_ == other.method_name_ &&
           per_image_ == other.per_image_;
  }

 private:
  std::string method_name_;
  std::map<std::string, std::vector<ScoredBox>> per_image_;
  bool normalized_ = true;
};

// Human-readable problems found when pairing a proposal set with a dataset:
// proposal images the dataset does not know, dataset images without any
// proposals (evaluated as empty lists).
std::vector<std::string> ValidateProposals(const Dataset& d,
                                           const ProposalSet& p);

// Keeps instances whose category is in `keep`; annotated_categories becomes
// keep ∩ d.annotated_categories. Images and the category table are
// unchanged. Throws InputError for ids not in d's category table.
Dataset RestrictCategories(const Dataset& d, const std::set<int64_t>& keep);

// Complement of `subset` within d.annotated_categories().
std::set<int64_t> ComplementCategories(const Dataset& d,
                                       const std::set<int64_t>& subset);

// Resolves category names to ids; throws InputError naming the first
// unknown name.
std::set<int64_t> CategoryIdsByName(const Dataset& d,
                                    const std::vector<std::string>& names,
                                    const std::string& source = "subset");

struct CategoryStats {
  int64_t category_id = 0;
  std::string name;
  bool in_split = false;
  int64_t instance_count = 0;
  // Mean of box area / image area over the category's instances (0 if none).
  double mean_relative_area = 0.0;
  // Mean of sqrt(box area / image area); a linear-scale size measure.
  double mean_sqrt_relative_area = 0.0;
};

struct StatsReport {
  int64_t total_instances = 0;
  int64_t inside_split = 0;
  int64_t outside_split = 0;
  std::vector<CategoryStats> per_category;  // ascending category id
  // Mean over images of (area of the union of the group's boxes) / image area.
  double covered_fraction_inside = 0.0;
  double covered_fraction_outside = 0.0;
  double covered_fraction_all = 0.0;
};

// Throws InputError if split contains unknown category ids.
StatsReport AnnotationStats(const Dataset& d, const std::set<int64_t>& split);

// Area of the union of axis-aligned boxes (coordinate compression).
double UnionArea(const std::vector<BoundingBox>& boxes);

}  // namespace propeval

#endif  // PROPEVAL_DATA_MODEL_H_
