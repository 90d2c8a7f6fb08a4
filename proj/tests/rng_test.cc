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

#include "propeval/rng.h"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

namespace propeval {
namespace {

TEST(RngTest, EngineMatchesStandardReference) {
  // The standard requires the 10000th output of a default-constructed
  // mt19937_64 to be 9981545732273789042.
  Rng rng(5489u);
  uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = rng.NextU64();
  EXPECT_EQ(v, 9981545732273789042ull);
}

TEST(RngTest, SameSeedSameSequence) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(a.Uniform(), b.Uniform());
    EXPECT_EQ(a.Normal(), b.Normal());
    EXPECT_EQ(a.Poisson(3.5), b.Poisson(3.5));
  }
}

TEST(RngTest, Ranges) {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.Uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    const double o = rng.UniformOpen();
    EXPECT_GT(o, 0.0);
    EXPECT_LT(o, 1.0);
    const int64_t k = rng.UniformInt(-3, 4);
    EXPECT_GE(k, -3);
    EXPECT_LE(k, 4);
  }
}

TEST(RngTest, Moments) {
  Rng rng(11);
  constexpr int kN = 200000;
  double s = 0, s2 = 0, p = 0;
  for (int i = 0; i < kN; ++i) {
    const double z = rng.Normal();
    s += z;
    s2 += z * z;
    p += static_cast<double>(rng.Poisson(150.0));
  }
  EXPECT_NEAR(s / kN, 0.0, 0.01);
  EXPECT_NEAR(s2 / kN, 1.0, 0.01);
  EXPECT_NEAR(p / kN, 150.0, 0.2);
  EXPECT_EQ(rng.Poisson(0.0), 0);
}

TEST(RngTest, UniformIntCoversRange) {
  Rng rng(3);
  std::set<int64_t> seen;
  for (int i = 0; i < 1000; ++i) seen.insert(rng.UniformInt(0, 9));
  EXPECT_EQ(seen.size(), 10u);
}

TEST(RngTest, DerivedSeedsDiffer) {
  std::set<uint64_t> seeds;
  for (uint64_t a = 0; a < 20; ++a) {
    for (uint64_t b = 0; b < 20; ++b) seeds.insert(DeriveSeed(1, {a, b}));
  }
  EXPECT_EQ(seeds.size(), 400u);
  EXPECT_NE(DeriveSeed(1, {2, 3}), DeriveSeed(1, {3, 2}));
  EXPECT_NE(DeriveSeed(1, {2}), DeriveSeed(2, {2}));
  EXPECT_EQ(DeriveSeed(9, {4, 5}), DeriveSeed(9, {4, 5}));
}

}  // namespace
}  // namespace propeval
