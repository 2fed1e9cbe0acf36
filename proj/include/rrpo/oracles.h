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

// Inner optimization problems shared by the robust pricing algorithms:
//
//   nominal pricing   max_p R(p, u)
//   mixture pricing   max_p sum_s lambda_s R(p, u_s)
//   convex worst case min_{u in L1 set} sum_p pi_p R(p, u)
//   finite worst case min_{u in budget or explicit set} sum_p pi_p R(p, u)
//
// Pricing runs over the finite grid by enumeration, by the extreme-price
// shortcut for log-log demand, or by multistart coordinate local search.
//
// Extreme prices: with log-log demand every scenario's revenue is a sum of
// terms p_i exp(e_i) = exp(log p_i + e_i) with e_i affine in log p, so any
// nonnegative mixture is convex in the log-price vector and its maximum over
// the grid's bounding box sits at a vertex. Restricting each product to its
// lowest and highest price is therefore exact.
//
// Worst cases of a single price vector are solved in closed form. Each
// coordinate of u enters the affine term of exactly one product, so over
// the L1 set the problem splits into a budget allocation across products:
//   linear:  R(u0) - theta * max_k |dR/du_k u0_k|
//   exp:     min sum_i A_i exp(-theta_i m_i) s.t. sum_i theta_i <= theta,
// solved by water-filling on the KKT multiplier, with A_i = p_i d_i(p, u0)
// and m_i the largest scaled sensitivity of product i's exponent. Over a
// budget set the same split yields a separable convex allocation of flips
// that a greedy pass solves exactly. Mixtures over the L1 set use Kelley's
// cutting planes.

#ifndef RRPO_ORACLES_H_
#define RRPO_ORACLES_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "rrpo/demand_model.h"
#include "rrpo/lp_solver.h"
#include "rrpo/policy.h"
#include "rrpo/uncertainty_set.h"

namespace rrpo {

inline constexpr double kDefaultPriceCap = 2e7;

struct PricingMethod {
  enum class Mode { kEnumerate, kExtremeLogLog, kLocalSearch };
  Mode mode = Mode::kEnumerate;
  int restarts = 100;
  uint64_t seed = 1;
  double cap = kDefaultPriceCap;

  static PricingMethod Enumerate(double cap = kDefaultPriceCap) {
    return {Mode::kEnumerate, 0, 0, cap};
  }
  static PricingMethod ExtremeLogLog() {
    return {Mode::kExtremeLogLog, 0, 0, kDefaultPriceCap};
  }
  static PricingMethod LocalSearch(int restarts, uint64_t seed) {
    return {Mode::kLocalSearch, restarts, seed, kDefaultPriceCap};
  }
  bool exact() const { return mode != Mode::kLocalSearch; }
};

struct PricingResult {
  PriceVector p_star;
  double value = 0.0;
  bool certified = false;
};

// Best deterministic robust price vector and its worst-case scenario.
struct DrpoResult {
  PriceVector p_dr;
  double z_dr = 0.0;
  ParamVector u_wc;
  bool certified = false;
  double wall_seconds = 0.0;
};

struct WeightedScenario {
  double weight = 0.0;
  ParamVector u;
};

// Price-search state: resolved prices plus the affine terms e_i of a list of
// scenarios, updated incrementally as single products change level.
class ScenarioBank {
 public:
  ScenarioBank(const Instance& instance,
               std::vector<const ParamVector*> scenarios);

  void SetAll(const std::vector<int>& levels);
  void SetLevel(int product, int level);

  int num_products() const { return n_; }
  int num_scenarios() const { return static_cast<int>(scenarios_.size()); }
  const std::vector<int>& levels() const { return levels_; }
  absl::Span<const double> prices() const { return prices_; }
  // x_j for the family of scenario s (price or log price).
  absl::Span<const double> transformed(int s) const;
  absl::Span<const double> exponents(int s) const {
    return absl::MakeConstSpan(&e_[static_cast<size_t>(s) * n_], n_);
  }
  DemandFamily family(int s) const { return families_[s]; }
  const ParamVector& scenario(int s) const { return *scenarios_[s]; }
  double Revenue(int s) const;

 private:
  void Recompute(int s);

  const Instance& instance_;
  int n_;
  std::vector<const ParamVector*> scenarios_;
  std::vector<DemandFamily> families_;
  std::vector<int> levels_;
  std::vector<double> prices_;
  std::vector<double> logs_;
  std::vector<double> e_;
  std::vector<int> steps_since_reset_;
};

using PriceScore = std::function<double(const ScenarioBank&)>;

// Maximizes `score` over the price grid. Ties within 1e-12 relative go to the
// lexicographically smallest level vector.
absl::StatusOr<PricingResult> MaximizeOverPrices(
    const Instance& instance, std::vector<const ParamVector*> scenarios,
    const PriceScore& score, const PricingMethod& method);

absl::StatusOr<PricingResult> NominalPriceOpt(const Instance& instance,
                                              const ParamVector& u,
                                              const PricingMethod& method);

// Weights must be nonnegative; they need not sum to one.
absl::StatusOr<PricingResult> MixturePriceOpt(
    const Instance& instance, absl::Span<const WeightedScenario> scenarios,
    const PricingMethod& method);

struct BiconjugateResult {
  double value = 0.0;
  std::vector<double> mu;
};

// log sum_i exp(y_i) with its maximizing weights mu = softmax(y) in
// log sum exp(y) = max_{mu in simplex} mu.y - sum mu log mu.
absl::StatusOr<BiconjugateResult> LogSumExpBiconjugate(
    absl::Span<const double> y);
// mu.y - sum mu log mu, with 0 log 0 = 0.
double EntropyObjective(absl::Span<const double> y, absl::Span<const double> mu);

struct WorstCaseResult {
  ParamVector u_star;
  double value = 0.0;
  double gap = 0.0;
  bool certified = true;
  bool converged = true;
  int iterations = 0;
};

absl::StatusOr<WorstCaseResult> WorstCaseConvex(const Instance& instance,
                                                const RandomizedPolicy& policy,
                                                const L1Set& set,
                                                double tol = 1e-7,
                                                int max_iter = 500);

struct DiscreteMethod {
  enum class Mode { kEnumerate, kLocalSearch };
  Mode mode = Mode::kEnumerate;
  int64_t cap = kDefaultMemberCap;
  int restarts = 50;
  uint64_t seed = 1;

  static DiscreteMethod Enumerate(int64_t cap = kDefaultMemberCap) {
    return {Mode::kEnumerate, cap, 0, 0};
  }
  static DiscreteMethod LocalSearch(int restarts, uint64_t seed) {
    return {Mode::kLocalSearch, kDefaultMemberCap, restarts, seed};
  }
};

// `set` must be a budget or explicit set. Enumerate is exact: explicit sets
// and small budget sets are scanned, linear demand and single price vectors
// use the exact greedy allocations. LocalSearch flips, unflips and swaps
// coordinates under the budget from random starts.
absl::StatusOr<WorstCaseResult> WorstCaseDiscrete(
    const Instance& instance, const RandomizedPolicy& policy,
    const UncertaintySet& set, const DiscreteMethod& method);

// Closed-form worst case of the price vector currently held by `bank`
// (scenario 0 must be the set's nominal vector). Writes the minimizer when
// `u_star` is not null.
double PointMassWorstCaseL1(const ScenarioBank& bank, double theta,
                            ParamVector* u_star);
double PointMassWorstCaseBudget(const ScenarioBank& bank,
                                const DiscreteBudgetSet& set,
                                ParamVector* u_star);

// Cutting-plane model of a convex function over an L1 set, kept as the dual
// LP  max_{lambda in simplex} sum_j lambda_j c_j - theta ||G' lambda||_inf
// in relative deviations z_k = u_k / u0_k - 1. Each cut is one column, so new
// cuts warm-start from the previous basis. The row duals give the minimizer
// of the model and lambda weights the cuts.
class L1CutModel {
 public:
  // Cut values and slopes are divided by `scale` inside the LP.
  L1CutModel(const L1Set& set, double scale);

  // Adds f(u) >= value + grad . (u - at).
  void AddCut(const ParamVector& at, double value,
              absl::Span<const double> grad);

  struct Solution {
    double lower_bound = 0.0;
    ParamVector u;
    std::vector<double> weights;  // one per cut
  };
  absl::StatusOr<Solution> Solve();

  int num_cuts() const { return num_cuts_; }

 private:
  L1Set set_;
  double scale_;
  std::vector<int> active_;  // flattened coordinates with u0_k != 0
  std::vector<double> center_;
  SimplexModel lp_;
  int num_cuts_ = 0;
};

}  // namespace rrpo

#endif  // RRPO_ORACLES_H_
