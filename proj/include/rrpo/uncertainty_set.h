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

// Uncertainty sets over the flattened demand parameters.
//
// L1 set (relative deviations from the nominal u0):
//   U = { u : sum_k |(u_k - u0_k) / u0_k| <= theta },
// where coordinates with u0_k = 0 cannot be rescaled and stay frozen at 0.
//
// Discrete budget set: up to Gamma coordinates sit at their upper or lower
// bound, the rest at nominal,
//   u = u0 - (u0 - u_hi) o xi - (u0 - u_lo) o eta,
//   xi, eta in {0,1}^d, xi + eta <= 1, sum(xi + eta) <= Gamma.
// The bounds need not bracket u0 (scaling a negative gamma flips them).
//
// Explicit set: a finite list of parameter vectors.

#ifndef RRPO_UNCERTAINTY_SET_H_
#define RRPO_UNCERTAINTY_SET_H_

#include <cstdint>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "rrpo/demand_model.h"
#include "rrpo/lp_solver.h"

namespace rrpo {

inline constexpr double kDefaultMembershipTol = 1e-9;
inline constexpr int64_t kDefaultMemberCap = 1000000;

struct L1Set {
  double theta = 0.0;
  ParamVector u0;
};

struct DiscreteBudgetSet {
  int gamma_budget = 0;
  ParamVector u0;
  ParamVector u_hi;
  ParamVector u_lo;
};

// Per-block scale factors applied to u0 to form budget-set endpoints.
struct BlockMultipliers {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
};
DiscreteBudgetSet BudgetFromMultipliers(const ParamVector& u0, int gamma_budget,
                                        const BlockMultipliers& hi,
                                        const BlockMultipliers& lo);

struct ExplicitSet {
  std::vector<ParamVector> members;
};

using UncertaintySet = std::variant<L1Set, DiscreteBudgetSet, ExplicitSet>;

inline bool IsFinite(const UncertaintySet& set) {
  return !std::holds_alternative<L1Set>(set);
}

// Checks shapes against `num_products` and basic sanity (theta >= 0, ...).
absl::Status ValidateSet(const UncertaintySet& set, int num_products);

absl::StatusOr<bool> Contains(const UncertaintySet& set, const ParamVector& u,
                              double tol = kDefaultMembershipTol);

// sum_{k <= Gamma} C(d, k) 2^k, saturating in double precision.
double Cardinality(const DiscreteBudgetSet& set);

// Members in a fixed order: by number of flips, then lexicographic flip
// positions, then upper bound before lower bound at each position. Fails
// with ResourceExhausted when the cardinality exceeds `cap`.
absl::StatusOr<std::vector<ParamVector>> EnumerateDiscrete(
    const DiscreteBudgetSet& set, int64_t cap = kDefaultMemberCap);
absl::StatusOr<std::vector<ParamVector>> EnumerateDiscrete(
    const ExplicitSet& set, int64_t cap = kDefaultMemberCap);
// Dispatches on the variant; L1 sets are rejected.
absl::StatusOr<std::vector<ParamVector>> EnumerateDiscrete(
    const UncertaintySet& set, int64_t cap = kDefaultMemberCap);

struct L1LinearMin {
  ParamVector u_star;
  // min over U of grad . (u - u0).
  double value_shift = 0.0;
};

// Minimizes the affine model grad . (u - u0) over the L1 set. The whole
// budget goes to the coordinate with the largest |grad_k u0_k| (lowest index
// on ties), moved against the sign of that product.
absl::StatusOr<L1LinearMin> LinearMinOverL1(const L1Set& set,
                                            absl::Span<const double> grad);

// LP embedding of the L1 set. Variables are u_0..u_{d-1} followed by
// s_0..s_{d-1}; rows encode s_k >= +-(u_k / u0_k - 1) and sum_k s_k <= theta.
// Frozen coordinates get an equality pin instead and s_k is fixed at 0.
struct LinearConstraintBlock {
  int num_vars = 0;
  std::vector<LinearRow> rows;
  std::vector<double> lower;
  std::vector<double> upper;
};
LinearConstraintBlock L1AsLinearConstraints(const L1Set& set);

}  // namespace rrpo

#endif  // RRPO_UNCERTAINTY_SET_H_
