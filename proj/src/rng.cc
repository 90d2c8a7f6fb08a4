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

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace propeval {

double Rng::Uniform() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double Rng::UniformOpen() {
  return (static_cast<double>(NextU64() >> 11) + 0.5) * 0x1.0p-53;
}

int64_t Rng::UniformInt(int64_t lo, int64_t hi) {
  if (hi < lo) throw std::invalid_argument("UniformInt: empty range");
  const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<int64_t>(NextU64());  // full 64-bit range
  // Largest multiple of span that fits; reject the tail to stay unbiased.
  const uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  uint64_t u;
  do {
    u = NextU64();
  } while (u >= limit);
  return lo + static_cast<int64_t>(u % span);
}

double Rng::Normal() {
  const double u1 = UniformOpen();
  const double u2 = UniformOpen();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int64_t Rng::Poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw std::invalid_argument("Poisson: mean must be finite and >= 0");
  }
  int64_t total = 0;
  while (mean > 0.0) {
    const double chunk = mean > 64.0 ? 64.0 : mean;
    mean -= chunk;
    const double limit = std::exp(-chunk);
    double p = Uniform();
    while (p > limit) {
      ++total;
      p *= Uniform();
    }
  }
  return total;
}

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t DeriveSeed(uint64_t master, std::initializer_list<uint64_t> ids) {
  uint64_t h = SplitMix64(master);
  for (uint64_t id : ids) h = SplitMix64(h ^ SplitMix64(id + 0x632be59bd9b4e019ULL));
  return h;
}

}  // namespace propeval
