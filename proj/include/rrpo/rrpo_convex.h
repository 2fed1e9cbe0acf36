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

// Randomized and deterministic robust pricing over an L1 uncertainty set.

#ifndef RRPO_RRPO_CONVEX_H_
#define RRPO_RRPO_CONVEX_H_

#include <vector>

#include "absl/status/statusor.h"
#include "rrpo/demand_model.h"
#include "rrpo/oracles.h"
#include "rrpo/policy.h"
#include "rrpo/uncertainty_set.h"

namespace rrpo {

struct ConvexSolveReport {
  // Bracket on the optimal worst-case expected revenue.
  double z_rr_lower = 0.0;
  double z_rr_upper = 0.0;
  RandomizedPolicy policy;
  // Independently recomputed worst case of `policy` and its gap.
  double policy_worst_case = 0.0;
  double policy_worst_case_gap = 0.0;
  // Minimizer of max_p R(p, u) among the evaluated iterates.
  ParamVector u_star;
  int iterations = 0;
  int cuts = 0;
  int prices_generated = 0;
  // True when the policy came from the restricted primal fallback.
  bool used_fallback = false;
  bool converged = false;
  // Converged with exact pricing and a certified inner worst case.
  bool certified = false;
  std::vector<double> lower_trace;
  std::vector<double> upper_trace;
  double wall_seconds = 0.0;
};

// Cutting-plane minimization of phi(u) = max_p R(p, u) over the set. Each
// iterate is priced by the oracle and contributes the linearization of the
// maximizing revenue function. The policy is read off the master's cut
// weights and validated against the worst-case oracle.
absl::StatusOr<ConvexSolveReport> SolveRrpoConvex(
    const Instance& instance, const L1Set& set, double eps = 1e-6,
    int max_iter = 500, const PricingMethod& pricing = PricingMethod());

// max_p min_{u in U} R(p, u) using the exact point-mass worst case.
absl::StatusOr<DrpoResult> SolveDrpoConvex(
    const Instance& instance, const L1Set& set,
    const PricingMethod& pricing = PricingMethod());

}  // namespace rrpo

#endif  // RRPO_RRPO_CONVEX_H_
