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

// Randomized pricing policies: finitely supported distributions over price
// vectors.

#ifndef RRPO_POLICY_H_
#define RRPO_POLICY_H_

#include <vector>

#include "absl/status/status.h"
#include "rrpo/demand_model.h"

namespace rrpo {

struct PolicyAtom {
  PriceVector p;
  double prob = 0.0;
};

struct RandomizedPolicy {
  std::vector<PolicyAtom> support;

  static RandomizedPolicy PointMass(PriceVector p) {
    return RandomizedPolicy{{PolicyAtom{std::move(p), 1.0}}};
  }

  // Probabilities nonnegative and summing to 1 within 1e-9, distinct price
  // vectors on the instance grids.
  absl::Status Validate(const Instance& instance) const;
};

// Merges duplicate price vectors, drops atoms whose weight is not positive,
// rescales to sum 1 and sorts by price vector.
RandomizedPolicy MakePolicy(std::vector<PolicyAtom> atoms);

// sum_p pi_p R(p, u). Inputs are assumed validated.
double ExpectedRevenue(const Instance& instance, const RandomizedPolicy& policy,
                       const ParamVector& u);

}  // namespace rrpo

#endif  // RRPO_POLICY_H_
