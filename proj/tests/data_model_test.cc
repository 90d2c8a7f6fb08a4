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

#include <gtest/gtest.h>

#include <random>

#include "oracles.h"
#include "propeval/errors.h"

namespace propeval {
namespace {

Dataset TwoCategoryDataset() {
  return Dataset::Create(
      {{"b", 100, 100}, {"a", 50, 40}},
      {{0, "dog", std::string("animal")}, {1, "car", std::nullopt}},
      {{5, "a", 1, BoundingBox(0, 0, 10, 10)},
       {2, "b", 0, BoundingBox(0, 0, 50, 50)},
       {3, "b", 1, BoundingBox(50, 50, 100, 100)}},
      {0, 1});
}

TEST(DatasetTest, SortsImagesAndInstances) {
  const Dataset d = TwoCategoryDataset();
  ASSERT_EQ(d.images().size(), 2u);
  EXPECT_EQ(d.images()[0].image_id, "a");
  EXPECT_EQ(d.instances().front().instance_id, 2);
  EXPECT_EQ(d.instances().back().instance_id, 5);
  EXPECT_EQ(*d.ImageIndex("b"), 1u);
  EXPECT_FALSE(d.ImageIndex("zzz").has_value());
  EXPECT_EQ(*d.CategoryIdByName("car"), 1);
  EXPECT_EQ(d.InstancesByImage()[0].size(), 1u);
  EXPECT_EQ(d.InstancesByImage()[1].size(), 2u);
}

TEST(DatasetTest, RejectsBrokenReferences) {
  const std::vector<Category> cats = {{0, "x", std::nullopt}};
  EXPECT_THROW(Dataset::Create({{"a", 10, 10}}, cats,
                               {{0, "nope", 0, BoundingBox(0, 0, 1, 1)}}, {0}),
               InputError);
  EXPECT_THROW(Dataset::Create({{"a", 10, 10}}, cats,
                               {{0, "a", 3, BoundingBox(0, 0, 1, 1)}}, {0}),
               InputError);
  // Instance of an unannotated category.
  EXPECT_THROW(Dataset::Create({{"a", 10, 10}}, cats,
                               {{0, "a", 0, BoundingBox(0, 0, 1, 1)}}, {}),
               InputError);
  // Box outside its image.
  EXPECT_THROW(Dataset::Create({{"a", 10, 10}}, cats,
                               {{0, "a", 0, BoundingBox(5, 5, 11, 9)}}, {0}),
               InputError);
  // Non-dense category ids, duplicate names, duplicate images/instances.
  EXPECT_THROW(Dataset::Create({}, {{1, "x", std::nullopt}}, {}, {}), InputError);
  EXPECT_THROW(Dataset::Create({}, {{0, "x", std::nullopt}, {1, "x", std::nullopt}},
                               {}, {}),
               InputError);
  EXPECT_THROW(Dataset::Create({{"a", 10, 10}, {"a", 10, 10}}, cats, {}, {0}),
               InputError);
  EXPECT_THROW(Dataset::Create({{"a", 10, 10}}, cats,
                               {{0, "a", 0, BoundingBox(0, 0, 1, 1)},
                                {0, "a", 0, BoundingBox(0, 0, 2, 2)}},
                               {0}),
               InputError);
  EXPECT_THROW(Dataset::Create({{"a", 0, 10}}, cats, {}, {0}), InputError);
}

TEST(ProposalSetTest, NormalizesAndRenumbers) {
  ProposalSet p("m");
  p.Add("a", BoundingBox(0, 0, 1, 1), 0.1);
  p.Add("a", BoundingBox(0, 0, 2, 2), 0.9);
  p.Add("a", BoundingBox(0, 0, 3, 3), 0.9);
  EXPECT_THROW(p.ForImage("a"), std::logic_error);
  p.Normalize();
  const auto& list = p.ForImage("a");
  ASSERT_EQ(list.size(), 3u);
  EXPECT_EQ(list[0].box, BoundingBox(0, 0, 2, 2));  // insertion order on ties
  EXPECT_EQ(list[1].box, BoundingBox(0, 0, 3, 3));
  EXPECT_EQ(list[2].score, 0.1);
  for (size_t i = 0; i < list.size(); ++i) {
    EXPECT_EQ(list[i].source_rank, static_cast<int64_t>(i));
  }
  EXPECT_TRUE(p.ForImage("unknown").empty());
  EXPECT_EQ(p.TotalBoxes(), 3u);
  EXPECT_EQ(p.MaxBoxesPerImage(), 3u);
}

TEST(ProposalSetTest, EqualityIgnoresInputOrder) {
  ProposalSet a("m"), b("m");
  a.Add("x", BoundingBox(0, 0, 1, 1), 0.5);
  a.Add("x", BoundingBox(0, 0, 2, 2), 0.7);
  b.Add("x", BoundingBox(0, 0, 2, 2), 0.7);
  b.Add("x", BoundingBox(0, 0, 1, 1), 0.5);
  a.Normalize();
  b.Normalize();
  EXPECT_EQ(a, b);
}

TEST(ValidateProposalsTest, ReportsMismatches) {
  const Dataset d = TwoCategoryDataset();
  ProposalSet p("m");
  p.Add("a", BoundingBox(0, 0, 1, 1), 1);
  p.Add("ghost", BoundingBox(0, 0, 1, 1), 1);
  p.Normalize();
  const auto problems = ValidateProposals(d, p);
  ASSERT_EQ(problems.size(), 2u);
}

TEST(RestrictTest, SubsetAndComplement) {
  const Dataset d = TwoCategoryDataset();
  const Dataset only_car = RestrictCategories(d, {1});
  EXPECT_EQ(only_car.instances().size(), 2u);
  EXPECT_EQ(only_car.annotated_categories(), std::set<int64_t>({1}));
  EXPECT_EQ(only_car.images().size(), 2u);
  EXPECT_EQ(only_car.categories().size(), 2u);
  EXPECT_EQ(ComplementCategories(d, {1}), std::set<int64_t>({0}));
  EXPECT_TRUE(ComplementCategories(d, {0, 1}).empty());
  EXPECT_THROW(RestrictCategories(d, {7}), InputError);
  EXPECT_EQ(RestrictCategories(d, {0, 1}), d);
}

TEST(RestrictTest, NamesResolve) {
  const Dataset d = TwoCategoryDataset();
  EXPECT_EQ(CategoryIdsByName(d, {"car"}), std::set<int64_t>({1}));
  try {
    CategoryIdsByName(d, {"car", "cat"});
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("cat"), std::string::npos);
  }
}

TEST(UnionAreaTest, Examples) {
  EXPECT_EQ(UnionArea({}), 0.0);
  EXPECT_DOUBLE_EQ(UnionArea({BoundingBox(0, 0, 10, 10)}), 100.0);
  EXPECT_DOUBLE_EQ(UnionArea({BoundingBox(0, 0, 10, 10), BoundingBox(5, 5, 15, 15)}),
                   175.0);
  EXPECT_DOUBLE_EQ(UnionArea({BoundingBox(0, 0, 10, 10), BoundingBox(2, 2, 3, 3)}),
                   100.0);
}

TEST(UnionAreaTest, MatchesPixelCount) {
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<int> c(0, 20);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<BoundingBox> boxes;
    bool grid[20][20] = {};
    for (int k = 0; k < 6; ++k) {
      int x0 = c(gen), x1 = c(gen), y0 = c(gen), y1 = c(gen);
      if (x0 == x1 || y0 == y1) continue;
      if (x0 > x1) std::swap(x0, x1);
      if (y0 > y1) std::swap(y0, y1);
      boxes.emplace_back(x0, y0, x1, y1);
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) grid[y][x] = true;
      }
    }
    int count = 0;
    for (auto& row : grid) {
      for (bool b : row) count += b;
    }
    EXPECT_DOUBLE_EQ(UnionArea(boxes), count);
  }
}

TEST(AnnotationStatsTest, CountsAndCoverage) {
  const Dataset d = TwoCategoryDataset();
  const StatsReport r = AnnotationStats(d, {1});
  EXPECT_EQ(r.total_instances, 3);
  EXPECT_EQ(r.inside_split, 2);
  EXPECT_EQ(r.outside_split, 1);
  ASSERT_EQ(r.per_category.size(), 2u);
  EXPECT_EQ(r.per_category[1].instance_count, 2);
  EXPECT_TRUE(r.per_category[1].in_split);
  // car: 100/2000 in image a, 2500/10000 in image b.
  EXPECT_DOUBLE_EQ(r.per_category[1].mean_relative_area, (0.05 + 0.25) / 2);
  EXPECT_DOUBLE_EQ(r.per_category[1].mean_sqrt_relative_area,
                   (std::sqrt(0.05) + 0.5) / 2);
  // Mean over images of covered fraction.
  EXPECT_DOUBLE_EQ(r.covered_fraction_inside, (0.05 + 0.25) / 2);
  EXPECT_DOUBLE_EQ(r.covered_fraction_outside, (0.0 + 0.25) / 2);
  EXPECT_DOUBLE_EQ(r.covered_fraction_all, (0.05 + 0.5) / 2);
  EXPECT_THROW(AnnotationStats(d, {9}), InputError);
}

}  // namespace
}  // namespace propeval
