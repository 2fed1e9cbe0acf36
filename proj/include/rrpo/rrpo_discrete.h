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

// Randomized and deterministic robust pricing over finite uncertainty sets.

#ifndef RRPO_RRPO_DISCRETE_H_
#define RRPO_RRPO_DISCRETE_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "rrpo/demand_model.h"
#include "rrpo/oracles.h"
#include "rrpo/policy.h"
#include "rrpo/uncertainty_set.h"

namespace rrpo {

// Distribution over demand scenarios (the adversary's mixed strategy).
struct DualDistribution {
  std::vector<WeightedScenario> support;
};

// Value and optimal mixed strategies of a finite zero-sum game in which the
// row player maximizes payoff[r][c].
struct MatrixGameSolution {
  double value = 0.0;
  std::vector<double> row_probs;
  std::vector<double> col_probs;
};
absl::StatusOr<MatrixGameSolution> SolveMatrixGame(
    const std::vector<std::vector<double>>& payoff);

struct PrimalCgResult {
  double z_p = 0.0;
  std::vector<ParamVector> scenarios;
  RandomizedPolicy policy;
  int cuts = 0;
  bool converged = false;
  bool certified = false;
};

// Restricted game over `price_pool` with scenarios generated by the
// worst-case oracle until no scenario is violated by more than `eps_sep`
// (relative).
absl::StatusOr<PrimalCgResult> PrimalCg(const Instance& instance,
                                        const std::vector<PriceVector>& price_pool,
                                        const UncertaintySet& set,
                                        std::vector<ParamVector> init_scenarios,
                                        const DiscreteMethod& separation,
                                        double eps_sep = 1e-7,
                                        int max_iter = 10000);

struct DualCgResult {
  double z_d = 0.0;
  std::vector<PriceVector> prices;
  DualDistribution dual;
  int cuts = 0;
  bool converged = false;
  bool certified = false;
};

// Mirror image: restricted game over `scenario_pool` with price vectors
// generated by the mixture pricing oracle.
absl::StatusOr<DualCgResult> DualCg(const Instance& instance,
                                    const std::vector<ParamVector>& scenario_pool,
                                    std::vector<PriceVector> init_prices,
                                    const PricingMethod& separation,
                                    double eps_sep = 1e-7,
                                    int max_iter = 10000);

struct DoubleCgOptions {
  PricingMethod pricing;
  DiscreteMethod worst_case;
  // Overrides for the initial pools.
  std::vector<PriceVector> init_prices;
  std::vector<ParamVector> init_scenarios;
};

struct DoubleCgReport {
  double lb = 0.0;
  double ub = 0.0;
  RandomizedPolicy policy;
  DualDistribution dual;
  std::vector<PriceVector> price_pool;
  std::vector<ParamVector> scenario_pool;
  int outer_iterations = 0;
  int primal_cuts = 0;
  int dual_cuts = 0;
  bool converged = false;
  bool certified = false;
  std::vector<double> lb_trace;
  std::vector<double> ub_trace;
  double wall_seconds = 0.0;
};

// Alternates primal and dual column generation until the bounds meet within
// eps relative.
absl::StatusOr<DoubleCgReport> SolveDoubleCg(const Instance& instance,
                                             const UncertaintySet& set,
                                             double eps = 1e-6,
                                             int max_outer = 100,
                                             const DoubleCgOptions& options = {});

struct FullMatrixResult {
  double value = 0.0;
  RandomizedPolicy policy;
  DualDistribution dual;
};

inline constexpr double kDefaultMatrixCap = 1e7;

// Exact game value over explicit price and scenario lists.
absl::StatusOr<FullMatrixResult> FullMatrixLpOracle(
    const Instance& instance, const std::vector<PriceVector>& prices,
    const std::vector<ParamVector>& scenarios,
    double cap = kDefaultMatrixCap);

// Every price vector of the instance in lexicographic level order.
absl::StatusOr<std::vector<PriceVector>> AllPriceVectors(
    const Instance& instance, double cap = kDefaultPriceCap);

// max_p min_{u in U} R(p, u) over a finite set.
absl::StatusOr<DrpoResult> SolveDrpoDiscrete(
    const Instance& instance, const UncertaintySet& set,
    const PricingMethod& pricing = PricingMethod(),
    const DiscreteMethod& worst_case = DiscreteMethod());

// The scenario used to seed the pools: u0 when it belongs to the set,
// otherwise the first member.
ParamVector NominalScenario(const Instance& instance, const UncertaintySet& set);

}  // namespace rrpo

#endif  // RRPO_RRPO_DISCRETE_H_
