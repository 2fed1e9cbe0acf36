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

// Randomization-proofness diagnostics and experiment metrics.

#ifndef RRPO_ANALYSIS_H_
#define RRPO_ANALYSIS_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "rrpo/demand_model.h"
#include "rrpo/oracles.h"
#include "rrpo/policy.h"
#include "rrpo/uncertainty_set.h"

namespace rrpo {

enum class Verdict { kProofCertified, kReceptiveCertified, kInconclusive };
std::string_view VerdictName(Verdict verdict);

struct Evidence {
  std::string name;
  double value = 0.0;
  bool passed = false;
};

struct ProofnessReport {
  Verdict verdict = Verdict::kInconclusive;
  std::vector<Evidence> evidence;
  std::string notes;
};

inline constexpr double kDefaultRevenueTol = 1e-7;

// Sufficient conditions for randomization-proofness. ProofCertified needs
// the family condition to hold over the whole set and the grid to have a
// saddle point at the robust price (so that randomizing cannot help on this
// finite price set).
absl::StatusOr<ProofnessReport> CheckProofnessConditions(
    const Instance& instance, const UncertaintySet& set,
    double tol = kDefaultRevenueTol);

// Uniqueness-based test: with a unique worst case u* of the robust price,
// randomizing helps exactly when that price does not maximize R(., u*).
// Receptive verdicts carry a two-point policy that beats the robust price.
absl::StatusOr<ProofnessReport> CheckCorollary2(const Instance& instance,
                                                const UncertaintySet& set,
                                                double tol = kDefaultRevenueTol);

struct MinimaxGapResult {
  // max_p min_u R and min_u max_p R over pure strategies.
  double maxmin = 0.0;
  double minmax = 0.0;
  double gap = 0.0;
  // min over distributions on U of max_p E R, which equals the randomized
  // robust value. mixed_gap is zero exactly when randomizing cannot help,
  // while a zero pure gap is only sufficient for that.
  double mixed_minmax = 0.0;
  double mixed_gap = 0.0;
};

// Max-min and min-max over finite price and scenario sets.
absl::StatusOr<MinimaxGapResult> MinimaxGap(const Instance& instance,
                                            const UncertaintySet& set);

struct MetricsRow {
  int num_products = 0;
  double budget = 0.0;
  double t_rr = 0.0;
  double z_rr = 0.0;
  double e_r_rr_nominal = 0.0;
  double t_dr = 0.0;
  double z_dr = 0.0;
  double ri_percent = 0.0;
  double r_dr_nominal = 0.0;
  double t_n = 0.0;
  double z_n = 0.0;
  double z_n_wc = 0.0;
  bool certified = false;
};

// Summary of a randomized solve as consumed by the metrics.
struct RrpoOutcome {
  double z_rr = 0.0;
  RandomizedPolicy policy;
  double seconds = 0.0;
  bool certified = false;
};

struct NominalOutcome {
  PricingResult result;
  double seconds = 0.0;
};

absl::StatusOr<MetricsRow> ComputeMetrics(const Instance& instance,
                                          const UncertaintySet& set,
                                          double budget,
                                          const NominalOutcome& nominal,
                                          const DrpoResult& drpo,
                                          const RrpoOutcome& rrpo);

// 100 (z_rr - z_dr) / z_dr, or NaN when z_dr <= 0.
double RelativeImprovement(double z_rr, double z_dr);

}  // namespace rrpo

#endif  // RRPO_ANALYSIS_H_
