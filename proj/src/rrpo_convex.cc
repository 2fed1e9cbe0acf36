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

#include "rrpo/rrpo_convex.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <vector>

#include "absl/status/status.h"
#include "rrpo/lp_solver.h"
#include "rrpo/status_macros.h"

namespace rrpo {
namespace {

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

// Cut weights aggregated by price vector. Weights below `floor` times the
// largest are treated as simplex noise.
RandomizedPolicy PolicyFromWeights(const std::vector<double>& weights,
                                   const std::vector<int>& cut_price,
                                   const std::vector<PriceVector>& prices) {
  std::vector<double> mass(prices.size(), 0.0);
  for (size_t j = 0; j < weights.size(); ++j) {
    mass[cut_price[j]] += std::max(0.0, weights[j]);
  }
  const double top = *std::max_element(mass.begin(), mass.end());
  std::vector<PolicyAtom> atoms;
  for (size_t q = 0; q < prices.size(); ++q) {
    if (mass[q] > 1e-10 * top) atoms.push_back({prices[q], mass[q]});
  }
  return MakePolicy(std::move(atoms));
}

// max_pi min_j sum_q pi_q R(p_q, u_j) over the generated prices and iterates.
absl::StatusOr<RandomizedPolicy> RestrictedPrimal(
    const Instance& instance, const std::vector<PriceVector>& prices,
    const std::vector<ParamVector>& scenarios) {
  LinearProgram lp;
  lp.sense = Sense::kMax;
  lp.AddVariable(1.0, -kInfinity, kInfinity);
  for (size_t q = 0; q < prices.size(); ++q) lp.AddVariable(0.0, 0.0, kInfinity);
  const int cols = 1 + static_cast<int>(prices.size());
  for (const ParamVector& u : scenarios) {
    std::vector<double> row(cols, 0.0);
    row[0] = 1.0;
    for (size_t q = 0; q < prices.size(); ++q) {
      ASSIGN_OR_RETURN(row[1 + q], Revenue(instance, prices[q], u));
      row[1 + q] = -row[1 + q];
    }
    lp.AddRow(std::move(row), Relation::kLe, 0.0);
  }
  std::vector<double> sum(cols, 1.0);
  sum[0] = 0.0;
  lp.AddRow(std::move(sum), Relation::kEq, 1.0);
  ASSIGN_OR_RETURN(LpSolution sol, SolveLp(lp));
  if (sol.status != LpStatus::kOptimal) {
    return absl::InternalError("numerical failure: restricted primal LP");
  }
  std::vector<PolicyAtom> atoms;
  for (size_t q = 0; q < prices.size(); ++q) {
    if (sol.x[1 + q] > 1e-12) atoms.push_back({prices[q], sol.x[1 + q]});
  }
  return MakePolicy(std::move(atoms));
}

}  // namespace

absl::StatusOr<ConvexSolveReport> SolveRrpoConvex(const Instance& instance,
                                                  const L1Set& set, double eps,
                                                  int max_iter,
                                                  const PricingMethod& pricing) {
  const auto start = std::chrono::steady_clock::now();
  RETURN_IF_ERROR(instance.Validate());
  RETURN_IF_ERROR(ValidateSet(set, instance.num_products()));
  if (!(eps > 0.0) || max_iter < 1) {
    return absl::InvalidArgumentError("eps must be positive and max_iter >= 1");
  }

  ConvexSolveReport report;
  std::vector<PriceVector> prices;
  std::map<PriceVector, int> price_index;
  std::vector<int> cut_price;
  std::vector<ParamVector> iterates;
  std::vector<double> weights;

  ParamVector u = set.u0;
  double upper = std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();
  std::unique_ptr<L1CutModel> model;
  for (int it = 1; it <= max_iter; ++it) {
    ASSIGN_OR_RETURN(PricingResult best, NominalPriceOpt(instance, u, pricing));
    ASSIGN_OR_RETURN(const double phi, Revenue(instance, best.p_star, u));
    ASSIGN_OR_RETURN(const std::vector<double> grad,
                     RevenueGradient(instance, best.p_star, u));
    if (model == nullptr) {
      model = std::make_unique<L1CutModel>(
          set, std::abs(phi) > 0.0 ? std::abs(phi) : 1.0);
    }
    if (phi < upper) {
      upper = phi;
      report.u_star = u;
    }
    auto [pos, inserted] =
        price_index.emplace(best.p_star, static_cast<int>(prices.size()));
    if (inserted) prices.push_back(best.p_star);
    cut_price.push_back(pos->second);
    iterates.push_back(u);
    model->AddCut(u, phi, grad);

    ASSIGN_OR_RETURN(L1CutModel::Solution sol, model->Solve());
    lower = std::max(lower, std::min(sol.lower_bound, upper));
    weights = std::move(sol.weights);
    report.iterations = it;
    report.lower_trace.push_back(lower);
    report.upper_trace.push_back(upper);
    if (upper - lower <= eps * std::max(1.0, std::abs(upper))) {
      report.converged = true;
      break;
    }
    u = std::move(sol.u);
  }
  report.cuts = model->num_cuts();
  report.prices_generated = static_cast<int>(prices.size());

  // Cuts underestimate each revenue function, so the weighted policy
  // guarantees at least the master bound.
  const double scale = std::max(1.0, std::abs(upper));
  const double inner_tol = eps / 10.0;
  report.policy = PolicyFromWeights(weights, cut_price, prices);
  ASSIGN_OR_RETURN(WorstCaseResult check,
                   WorstCaseConvex(instance, report.policy, set, inner_tol,
                                   std::max(500, 4 * max_iter)));
  if (check.value < lower - eps * scale) {
    ASSIGN_OR_RETURN(RandomizedPolicy alt,
                     RestrictedPrimal(instance, prices, iterates));
    ASSIGN_OR_RETURN(WorstCaseResult alt_check,
                     WorstCaseConvex(instance, alt, set, inner_tol,
                                     std::max(500, 4 * max_iter)));
    if (alt_check.value > check.value) {
      report.policy = std::move(alt);
      check = std::move(alt_check);
      report.used_fallback = true;
    }
  }
  report.policy_worst_case = check.value;
  report.policy_worst_case_gap = check.gap;
  report.z_rr_upper = upper;
  report.z_rr_lower =
      std::min(upper, std::max(lower, check.value - check.gap));
  report.certified =
      report.converged && pricing.exact() && check.certified;
  report.wall_seconds = Seconds(start);
  return report;
}

absl::StatusOr<DrpoResult> SolveDrpoConvex(const Instance& instance,
                                           const L1Set& set,
                                           const PricingMethod& pricing) {
  const auto start = std::chrono::steady_clock::now();
  RETURN_IF_ERROR(instance.Validate());
  RETURN_IF_ERROR(ValidateSet(set, instance.num_products()));
  if (pricing.mode == PricingMethod::Mode::kExtremeLogLog) {
    return absl::InvalidArgumentError(
        "extreme-price search is not exact for the robust objective");
  }
  const double theta = set.theta;
  ASSIGN_OR_RETURN(
      PricingResult best,
      MaximizeOverPrices(
          instance, {&set.u0},
          [theta](const ScenarioBank& bank) {
            return PointMassWorstCaseL1(bank, theta, nullptr);
          },
          pricing));
  DrpoResult out;
  out.p_dr = best.p_star;
  out.z_dr = best.value;
  ScenarioBank bank(instance, {&set.u0});
  bank.SetAll(best.p_star.levels);
  PointMassWorstCaseL1(bank, theta, &out.u_wc);
  out.certified = best.certified;
  out.wall_seconds = Seconds(start);
  return out;
}

}  // namespace rrpo
