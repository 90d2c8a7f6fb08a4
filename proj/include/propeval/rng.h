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

#ifndef PROPEVAL_RNG_H_
#define PROPEVAL_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace propeval {

// Seeded random source with portable output.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The standard <random> distributions are not (they differ between
// library implementations), so every draw below is derived from raw 64-bit
// engine outputs with a fixed recipe:
//
//   Uniform()        (u >> 11) * 2^-53                       in [0, 1)
//   UniformOpen()    ((u >> 11) + 0.5) * 2^-53               in (0, 1)
//   UniformInt(a,b)  rejection sampling on the top bits      in [a, b]
//   Normal()         Box-Muller on two UniformOpen() draws (cosine branch)
//   Poisson(l)       Knuth multiplication, split into chunks of <= 64
//
// Independent streams are obtained with DeriveSeed(master, {ids...}), a
// SplitMix64 chain, so that e.g. image 7 / stage 2 always sees the same
// sequence regardless of how many other streams were consumed.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }
  double Uniform();
  double UniformOpen();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  int64_t UniformInt(int64_t lo, int64_t hi);
  double Normal();
  double Normal(double mean, double stddev) {
    return mean + stddev * Normal();
  }
  bool Bernoulli(double p) { return Uniform() < p; }
  int64_t Poisson(double mean);

 private:
  std::mt19937_64 engine_;
};

uint64_t SplitMix64(uint64_t x);
uint64_t DeriveSeed(uint64_t master, std::initializer_list<uint64_t> ids);

}  // namespace propeval

#endif  // PROPEVAL_RNG_H_
