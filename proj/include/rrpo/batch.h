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

// Per-cell solve pipeline and the CSV batch runner.

#ifndef RRPO_BATCH_H_
#define RRPO_BATCH_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "rrpo/analysis.h"
#include "rrpo/demand_model.h"
#include "rrpo/generator.h"
#include "rrpo/oracles.h"
#include "rrpo/policy.h"
#include "rrpo/uncertainty_set.h"

namespace rrpo {

// Accepts "enumerate", "enumerate:CAP" (price-vector cap), "extreme" and
// "local:R" (R random restarts).
absl::StatusOr<PricingMethod> ParsePricingMethod(std::string_view text,
                                                 uint64_t seed = 1);
// Accepts "enumerate" and "local:R".
absl::StatusOr<DiscreteMethod> ParseDiscreteMethod(std::string_view text,
                                                   uint64_t seed = 1);
std::string PricingMethodName(const PricingMethod& method);

struct SolveOptions {
  // Used for the nominal and randomized problems.
  PricingMethod pricing;
  // Used for the deterministic robust problem.
  PricingMethod drpo_pricing;
  DiscreteMethod worst_case;
  double eps = 1e-6;
  int max_iter = 500;
};

// Log-log instances price with the extreme-point search, others enumerate.
SolveOptions DefaultSolveOptions(const Instance& instance);

struct CellResult {
  MetricsRow metrics;
  PriceVector p_nominal;
  PriceVector p_dr;
  RandomizedPolicy policy;
  double z_rr_lower = 0.0;
  double z_rr_upper = 0.0;
  std::vector<double> lower_trace;
  std::vector<double> upper_trace;
};

// Solves the nominal, deterministic robust and randomized robust problems
// on one (instance, set) pair. L1 sets use the cutting-plane solver, finite
// sets use double column generation.
absl::StatusOr<CellResult> SolveCell(const Instance& instance,
                                     const UncertaintySet& set, double budget,
                                     const SolveOptions& options);

// The size knob of a set: theta, Gamma, or NaN for explicit sets.
double SetBudget(const UncertaintySet& set);

struct BatchConfig {
  // Generated instances, one per (size, seed) pair.
  DemandFamily family = DemandFamily::kLinear;
  std::vector<int> sizes;
  std::vector<uint64_t> seeds;
  enum class Preset { kConvex, kDiscrete } preset = Preset::kConvex;
  // Instance files used instead of generated instances when non-empty.
  std::vector<std::string> instance_paths;

  enum class SetKind { kL1, kBudget, kFromFile } set_kind = SetKind::kL1;
  std::vector<double> budgets;
  BlockMultipliers hi_multipliers{1.3, 1.3, 1.3};
  BlockMultipliers lo_multipliers{0.7, 0.7, 0.7};

  // Empty strings select the per-instance defaults.
  std::string pricing;
  std::string drpo_pricing;
  std::string worst_case = "enumerate";
  double eps = 1e-6;
  int max_iter = 500;
  // Wall-clock limit for the whole batch in seconds; <= 0 disables it.
  double time_limit = 0.0;
};

absl::StatusOr<BatchConfig> ParseBatchConfig(std::string_view json_text);

inline constexpr char kBatchCsvHeader[] =
    "I,budget,t_rr,z_rr,e_r_rr_nominal,t_dr,z_dr,ri_percent,r_dr_nominal,"
    "t_n,z_n,z_n_wc,certified,status";

// One row per (instance, budget) in config order, then one mean row per
// (I, budget) over the successful rows. Cell failures are written to the
// status column and do not stop the batch.
absl::StatusOr<std::string> RunBatch(const BatchConfig& config);

}  // namespace rrpo

#endif  // RRPO_BATCH_H_
