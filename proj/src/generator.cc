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

#include "rrpo/generator.h"

#include <cmath>

#include "absl/status/status.h"
#include "rrpo/random.h"
#include "rrpo/status_macros.h"

namespace rrpo {

GenerationSpec GenerationSpec::ConvexPreset(DemandFamily family,
                                            int num_products, uint64_t seed) {
  GenerationSpec spec;
  spec.family = family;
  spec.num_products = num_products;
  spec.seed = seed;
  switch (family) {
    case DemandFamily::kLinear:
      spec.alpha = {200, 300}, spec.beta = {5, 15}, spec.gamma = {-0.1, 0.1};
      break;
    case DemandFamily::kSemiLog:
      spec.alpha = {4, 7}, spec.beta = {1, 1.5}, spec.gamma = {-0.4, 0.4};
      break;
    case DemandFamily::kLogLog:
      spec.alpha = {10, 14}, spec.beta = {1, 2}, spec.gamma = {-0.6, 0.6};
      break;
  }
  return spec;
}

GenerationSpec GenerationSpec::DiscretePreset(DemandFamily family,
                                              int num_products, uint64_t seed) {
  GenerationSpec spec;
  spec.family = family;
  spec.num_products = num_products;
  spec.seed = seed;
  switch (family) {
    case DemandFamily::kLinear:
      spec.alpha = {100, 200}, spec.beta = {5, 15}, spec.gamma = {-0.1, 0.1};
      break;
    case DemandFamily::kSemiLog:
      spec.alpha = {8, 10}, spec.beta = {1.5, 2}, spec.gamma = {-0.5, 0.5};
      break;
    case DemandFamily::kLogLog:
      spec.alpha = {10, 14}, spec.beta = {1.5, 2}, spec.gamma = {-0.8, 0.8};
      break;
  }
  return spec;
}

absl::StatusOr<Instance> GenerateInstance(const GenerationSpec& spec) {
  if (spec.num_products < 1) {
    return absl::InvalidArgumentError("number of products must be positive");
  }
  for (const UniformRange* r : {&spec.alpha, &spec.beta, &spec.gamma}) {
    if (!std::isfinite(r->lo) || !std::isfinite(r->hi) || r->lo > r->hi) {
      return absl::InvalidArgumentError("ranges need finite lo <= hi");
    }
  }
  const int n = spec.num_products;
  Instance instance;
  instance.family = spec.family;
  instance.grids = spec.grids;
  if (instance.grids.empty()) {
    instance.grids.assign(n, std::vector<double>{1, 2, 3, 4, 5});
  }
  SplitMix64 rng(spec.seed);
  instance.u0 = ParamVector::Zero(n);
  for (double& a : instance.u0.alpha) a = rng.Uniform(spec.alpha.lo, spec.alpha.hi);
  for (double& b : instance.u0.beta) b = rng.Uniform(spec.beta.lo, spec.beta.hi);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) {
        instance.u0.gamma_at(i, j) = rng.Uniform(spec.gamma.lo, spec.gamma.hi);
      }
    }
  }
  RETURN_IF_ERROR(instance.Validate());
  return instance;
}

}  // namespace rrpo
