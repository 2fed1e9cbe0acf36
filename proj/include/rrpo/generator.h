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

// Seeded random instance generation.

#ifndef RRPO_GENERATOR_H_
#define RRPO_GENERATOR_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "rrpo/demand_model.h"

namespace rrpo {

struct UniformRange {
  double lo = 0.0;
  double hi = 0.0;
};

struct GenerationSpec {
  DemandFamily family = DemandFamily::kLinear;
  int num_products = 1;
  uint64_t seed = 0;
  UniformRange alpha;
  UniformRange beta;
  UniformRange gamma;
  // Empty means {1, 2, 3, 4, 5} for every product.
  std::vector<std::vector<double>> grids;

  // Ranges used with the L1 set experiments.
  static GenerationSpec ConvexPreset(DemandFamily family, int num_products,
                                     uint64_t seed);
  // Ranges used with the budget set experiments.
  static GenerationSpec DiscretePreset(DemandFamily family, int num_products,
                                       uint64_t seed);
};

// Draws alpha, then beta, then off-diagonal gamma row-major, each uniform on
// its range, from SplitMix64(seed).
absl::StatusOr<Instance> GenerateInstance(const GenerationSpec& spec);

}  // namespace rrpo

#endif  // RRPO_GENERATOR_H_
