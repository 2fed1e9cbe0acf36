// Copyright 2026 The rrpo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded 64-bit splitmix generator. The algorithm is pinned so generated
// instances and multistart runs are reproducible across platforms.

#ifndef RRPO_RANDOM_H_
#define RRPO_RANDOM_H_

#include <cstdint>

namespace rrpo {

class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t Next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform01() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

  double Uniform(double lo, double hi) {
    return lo == hi ? lo : lo + (hi - lo) * Uniform01();
  }

  // Uniform integer in [0, n); n must be positive.
  int UniformInt(int n) {
    return static_cast<int>((Next() >> 11) % static_cast<uint64_t>(n));
  }

  // Seed of the r-th independent stream derived from `seed`.
  static uint64_t StreamSeed(uint64_t seed, uint64_t r) {
    SplitMix64 g(seed ^ (0xd1b54a32d192ed03ULL * (r + 1)));
    return g.Next();
  }

 private:
  uint64_t state_;
};

}  // namespace rrpo

#endif  // RRPO_RANDOM_H_
