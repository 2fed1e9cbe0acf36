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

#include "rrpo/policy.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "absl/strings/str_format.h"

namespace rrpo {

absl::Status RandomizedPolicy::Validate(const Instance& instance) const {
  if (support.empty()) {
    return absl::InvalidArgumentError("policy has empty support");
  }
  double total = 0.0;
  for (size_t a = 0; a < support.size(); ++a) {
    if (absl::Status s = instance.ValidatePrice(support[a].p); !s.ok()) {
      return s;
    }
    if (!(support[a].prob >= 0.0)) {
      return absl::InvalidArgumentError("policy has a negative probability");
    }
    total += support[a].prob;
    for (size_t b = 0; b < a; ++b) {
      if (support[b].p == support[a].p) {
        return absl::InvalidArgumentError(
            "policy support has a repeated price vector");
      }
    }
  }
  if (std::abs(total - 1.0) > 1e-9) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "policy probabilities sum to %.12g instead of 1", total));
  }
  return absl::OkStatus();
}

RandomizedPolicy MakePolicy(std::vector<PolicyAtom> atoms) {
  std::map<PriceVector, double> merged;
  for (PolicyAtom& a : atoms) {
    if (a.prob > 0.0) merged[a.p] += a.prob;
  }
  double total = 0.0;
  for (const auto& [p, w] : merged) total += w;
  RandomizedPolicy policy;
  for (const auto& [p, w] : merged) policy.support.push_back({p, w / total});
  return policy;
}

double ExpectedRevenue(const Instance& instance, const RandomizedPolicy& policy,
                       const ParamVector& u) {
  const DemandFamily family = EffectiveFamily(instance, u);
  double total = 0.0;
  for (const PolicyAtom& a : policy.support) {
    total += a.prob * RevenueAt(family, instance.Prices(a.p), u);
  }
  return total;
}

}  // namespace rrpo
