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

#include "rrpo/rrpo_discrete.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "rrpo/lp_solver.h"
#include "rrpo/status_macros.h"

namespace rrpo {
namespace {

double Scale(double v) { return std::max(1.0, std::abs(v)); }

std::vector<double> Normalized(std::vector<double> w) {
  double total = 0.0;
  for (double& v : w) total += (v = std::max(0.0, v));
  if (total > 0.0) {
    for (double& v : w) v /= total;
  }
  return w;
}

absl::StatusOr<std::vector<std::vector<double>>> Payoffs(
    const Instance& instance, const std::vector<PriceVector>& prices,
    const std::vector<ParamVector>& scenarios) {
  std::vector<std::vector<double>> out(prices.size(),
                                       std::vector<double>(scenarios.size()));
  for (size_t r = 0; r < prices.size(); ++r) {
    RETURN_IF_ERROR(instance.ValidatePrice(prices[r]));
    for (size_t c = 0; c < scenarios.size(); ++c) {
      ASSIGN_OR_RETURN(out[r][c], Revenue(instance, prices[r], scenarios[c]));
    }
  }
  return out;
}

RandomizedPolicy PolicyOver(const std::vector<PriceVector>& prices,
                            const std::vector<double>& probs) {
  std::vector<PolicyAtom> atoms;
  for (size_t r = 0; r < prices.size(); ++r) {
    if (probs[r] > 0.0) atoms.push_back({prices[r], probs[r]});
  }
  return MakePolicy(std::move(atoms));
}

DualDistribution DualOver(const std::vector<ParamVector>& scenarios,
                          const std::vector<double>& probs) {
  DualDistribution out;
  for (size_t c = 0; c < scenarios.size(); ++c) {
    if (probs[c] > 0.0) out.support.push_back({probs[c], scenarios[c]});
  }
  return out;
}

template <typename T>
bool Contains(const std::vector<T>& pool, const T& item) {
  return std::find(pool.begin(), pool.end(), item) != pool.end();
}

}  // namespace

absl::StatusOr<MatrixGameSolution> SolveMatrixGame(
    const std::vector<std::vector<double>>& payoff) {
  if (payoff.empty() || payoff[0].empty()) {
    return absl::InvalidArgumentError("payoff matrix is empty");
  }
  const size_t rows = payoff.size(), cols = payoff[0].size();
  double scale = 0.0;
  for (const auto& r : payoff) {
    if (r.size() != cols) {
      return absl::InvalidArgumentError("payoff matrix is ragged");
    }
    for (double v : r) {
      if (!std::isfinite(v)) {
        return absl::InvalidArgumentError("payoff matrix has non-finite entries");
      }
      scale = std::max(scale, std::abs(v));
    }
  }
  if (scale == 0.0) scale = 1.0;
  // max t  s.t.  t <= sum_r pi_r a_rc / scale for every column, sum pi = 1.
  LinearProgram lp;
  lp.sense = Sense::kMax;
  lp.AddVariable(1.0, -kInfinity, kInfinity);
  for (size_t r = 0; r < rows; ++r) lp.AddVariable(0.0, 0.0, kInfinity);
  for (size_t c = 0; c < cols; ++c) {
    std::vector<double> row(1 + rows);
    row[0] = 1.0;
    for (size_t r = 0; r < rows; ++r) row[1 + r] = -payoff[r][c] / scale;
    lp.AddRow(std::move(row), Relation::kLe, 0.0);
  }
  std::vector<double> sum(1 + rows, 1.0);
  sum[0] = 0.0;
  lp.AddRow(std::move(sum), Relation::kEq, 1.0);
  ASSIGN_OR_RETURN(LpSolution sol, SolveLp(lp));
  if (sol.status != LpStatus::kOptimal) {
    return absl::InternalError("numerical failure: matrix game LP is not optimal");
  }
  MatrixGameSolution out;
  out.value = sol.value * scale;
  out.row_probs = Normalized(
      std::vector<double>(sol.x.begin() + 1, sol.x.begin() + 1 + rows));
  out.col_probs = Normalized(
      std::vector<double>(sol.duals.begin(), sol.duals.begin() + cols));
  return out;
}

absl::StatusOr<PrimalCgResult> PrimalCg(const Instance& instance,
                                        const std::vector<PriceVector>& price_pool,
                                        const UncertaintySet& set,
                                        std::vector<ParamVector> init_scenarios,
                                        const DiscreteMethod& separation,
                                        double eps_sep, int max_iter) {
  if (price_pool.empty() || init_scenarios.empty()) {
    return absl::InvalidArgumentError("column generation needs nonempty pools");
  }
  PrimalCgResult out;
  out.scenarios = std::move(init_scenarios);
  out.certified = separation.mode == DiscreteMethod::Mode::kEnumerate;
  ASSIGN_OR_RETURN(std::vector<std::vector<double>> payoff,
                   Payoffs(instance, price_pool, out.scenarios));
  for (int it = 0; it < max_iter; ++it) {
    ASSIGN_OR_RETURN(MatrixGameSolution game, SolveMatrixGame(payoff));
    out.z_p = game.value;
    out.policy = PolicyOver(price_pool, game.row_probs);
    ASSIGN_OR_RETURN(WorstCaseResult wc,
                     WorstCaseDiscrete(instance, out.policy, set, separation));
    if (wc.value >= out.z_p - eps_sep * Scale(out.z_p) ||
        Contains(out.scenarios, wc.u_star)) {
      out.converged = true;
      // The restricted value is only attained up to the separation slack.
      out.z_p = std::min(out.z_p, wc.value);
      return out;
    }
    out.scenarios.push_back(wc.u_star);
    for (size_t r = 0; r < price_pool.size(); ++r) {
      ASSIGN_OR_RETURN(const double v,
                       Revenue(instance, price_pool[r], wc.u_star));
      payoff[r].push_back(v);
    }
    ++out.cuts;
  }
  return out;
}

absl::StatusOr<DualCgResult> DualCg(const Instance& instance,
                                    const std::vector<ParamVector>& scenario_pool,
                                    std::vector<PriceVector> init_prices,
                                    const PricingMethod& separation,
                                    double eps_sep, int max_iter) {
  if (scenario_pool.empty() || init_prices.empty()) {
    return absl::InvalidArgumentError("column generation needs nonempty pools");
  }
  DualCgResult out;
  out.prices = std::move(init_prices);
  out.certified = separation.exact();
  ASSIGN_OR_RETURN(std::vector<std::vector<double>> payoff,
                   Payoffs(instance, out.prices, scenario_pool));
  for (int it = 0; it < max_iter; ++it) {
    ASSIGN_OR_RETURN(MatrixGameSolution game, SolveMatrixGame(payoff));
    out.z_d = game.value;
    out.dual = DualOver(scenario_pool, game.col_probs);
    ASSIGN_OR_RETURN(PricingResult best,
                     MixturePriceOpt(instance, out.dual.support, separation));
    if (best.value <= out.z_d + eps_sep * Scale(out.z_d) ||
        Contains(out.prices, best.p_star)) {
      out.converged = true;
      out.z_d = std::max(out.z_d, best.value);
      return out;
    }
    out.prices.push_back(best.p_star);
    std::vector<double> row(scenario_pool.size());
    for (size_t c = 0; c < scenario_pool.size(); ++c) {
      ASSIGN_OR_RETURN(row[c], Revenue(instance, best.p_star, scenario_pool[c]));
    }
    payoff.push_back(std::move(row));
    ++out.cuts;
  }
  return out;
}

ParamVector NominalScenario(const Instance& instance,
                            const UncertaintySet& set) {
  if (const auto* e = std::get_if<ExplicitSet>(&set)) {
    if (!Contains(e->members, instance.u0) && !e->members.empty()) {
      return e->members.front();
    }
    return instance.u0;
  }
  if (const auto* b = std::get_if<DiscreteBudgetSet>(&set)) return b->u0;
  return std::get<L1Set>(set).u0;
}

absl::StatusOr<DoubleCgReport> SolveDoubleCg(const Instance& instance,
                                             const UncertaintySet& set,
                                             double eps, int max_outer,
                                             const DoubleCgOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  RETURN_IF_ERROR(instance.Validate());
  if (!IsFinite(set)) {
    return absl::InvalidArgumentError(
        "double column generation needs a finite uncertainty set");
  }
  RETURN_IF_ERROR(ValidateSet(set, instance.num_products()));
  if (!(eps > 0.0) || max_outer < 1) {
    return absl::InvalidArgumentError("eps must be positive and max_outer >= 1");
  }
  const double eps_sep = eps / 10.0;

  DoubleCgReport report;
  report.scenario_pool = options.init_scenarios;
  if (report.scenario_pool.empty()) {
    report.scenario_pool.push_back(NominalScenario(instance, set));
  }
  report.price_pool = options.init_prices;
  if (report.price_pool.empty()) {
    ASSIGN_OR_RETURN(PricingResult nominal,
                     NominalPriceOpt(instance, report.scenario_pool.front(),
                                     options.pricing));
    report.price_pool.push_back(nominal.p_star);
  }
  report.certified = options.pricing.exact() &&
                     options.worst_case.mode == DiscreteMethod::Mode::kEnumerate;
  report.lb = -std::numeric_limits<double>::infinity();
  report.ub = std::numeric_limits<double>::infinity();
  for (int outer = 1; outer <= max_outer; ++outer) {
    report.outer_iterations = outer;
    ASSIGN_OR_RETURN(PrimalCgResult primal,
                     PrimalCg(instance, report.price_pool, set,
                              report.scenario_pool, options.worst_case, eps_sep));
    report.primal_cuts += primal.cuts;
    report.scenario_pool = std::move(primal.scenarios);
    if (primal.z_p > report.lb) {
      report.lb = primal.z_p;
      report.policy = std::move(primal.policy);
    }
    ASSIGN_OR_RETURN(DualCgResult dual,
                     DualCg(instance, report.scenario_pool, report.price_pool,
                            options.pricing, eps_sep));
    report.dual_cuts += dual.cuts;
    report.price_pool = std::move(dual.prices);
    if (dual.z_d < report.ub) {
      report.ub = dual.z_d;
      report.dual = std::move(dual.dual);
    }
    report.lb_trace.push_back(report.lb);
    report.ub_trace.push_back(report.ub);
    if (report.ub - report.lb <= eps * Scale(report.ub)) {
      report.converged = true;
      break;
    }
  }
  // Separation slack can leave the bounds crossed by a hair.
  if (report.lb > report.ub) report.lb = report.ub;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

absl::StatusOr<FullMatrixResult> FullMatrixLpOracle(
    const Instance& instance, const std::vector<PriceVector>& prices,
    const std::vector<ParamVector>& scenarios, double cap) {
  RETURN_IF_ERROR(instance.Validate());
  if (prices.empty() || scenarios.empty()) {
    return absl::InvalidArgumentError("payoff matrix is empty");
  }
  const double cells =
      static_cast<double>(prices.size()) * static_cast<double>(scenarios.size());
  if (cells > cap) {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "payoff matrix has %.0f cells, above the cap of %.0f", cells, cap));
  }
  for (const ParamVector& u : scenarios) {
    RETURN_IF_ERROR(instance.ValidateParams(u));
  }
  ASSIGN_OR_RETURN(std::vector<std::vector<double>> payoff,
                   Payoffs(instance, prices, scenarios));
  ASSIGN_OR_RETURN(MatrixGameSolution game, SolveMatrixGame(payoff));
  FullMatrixResult out;
  out.value = game.value;
  out.policy = PolicyOver(prices, game.row_probs);
  out.dual = DualOver(scenarios, game.col_probs);
  return out;
}

absl::StatusOr<std::vector<PriceVector>> AllPriceVectors(
    const Instance& instance, double cap) {
  RETURN_IF_ERROR(instance.Validate());
  const double count = instance.NumPriceVectors();
  if (count > cap) {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "price grid has %.0f vectors, above the cap of %.0f", count, cap));
  }
  const int n = instance.num_products();
  std::vector<PriceVector> out;
  PriceVector p{std::vector<int>(n, 0)};
  while (true) {
    out.push_back(p);
    int i = n - 1;
    while (i >= 0 &&
           ++p.levels[i] == static_cast<int>(instance.grids[i].size())) {
      p.levels[i--] = 0;
    }
    if (i < 0) break;
  }
  return out;
}

absl::StatusOr<DrpoResult> SolveDrpoDiscrete(const Instance& instance,
                                             const UncertaintySet& set,
                                             const PricingMethod& pricing,
                                             const DiscreteMethod& worst_case) {
  const auto start = std::chrono::steady_clock::now();
  RETURN_IF_ERROR(instance.Validate());
  if (!IsFinite(set)) {
    return absl::InvalidArgumentError("discrete robust pricing needs a finite set");
  }
  RETURN_IF_ERROR(ValidateSet(set, instance.num_products()));
  if (pricing.mode == PricingMethod::Mode::kExtremeLogLog) {
    return absl::InvalidArgumentError(
        "extreme-price search is not exact for the robust objective");
  }
  DrpoResult out;
  PricingResult best;
  if (const auto* e = std::get_if<ExplicitSet>(&set)) {
    ASSIGN_OR_RETURN(std::vector<ParamVector> members,
                     EnumerateDiscrete(*e, worst_case.cap));
    std::vector<const ParamVector*> ptrs;
    for (const ParamVector& u : members) ptrs.push_back(&u);
    ASSIGN_OR_RETURN(best, MaximizeOverPrices(
                               instance, ptrs,
                               [](const ScenarioBank& bank) {
                                 double v = bank.Revenue(0);
                                 for (int s = 1; s < bank.num_scenarios(); ++s) {
                                   v = std::min(v, bank.Revenue(s));
                                 }
                                 return v;
                               },
                               pricing));
  } else {
    const auto& budget = std::get<DiscreteBudgetSet>(set);
    // The point-mass worst case over a budget set has an exact greedy form.
    ASSIGN_OR_RETURN(best, MaximizeOverPrices(
                               instance, {&budget.u0},
                               [&budget](const ScenarioBank& bank) {
                                 return PointMassWorstCaseBudget(bank, budget,
                                                                 nullptr);
                               },
                               pricing));
  }
  out.p_dr = best.p_star;
  out.certified = best.certified;
  ASSIGN_OR_RETURN(
      WorstCaseResult wc,
      WorstCaseDiscrete(instance, RandomizedPolicy::PointMass(best.p_star), set,
                        DiscreteMethod::Enumerate(worst_case.cap)));
  out.z_dr = wc.value;
  out.u_wc = wc.u_star;
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return out;
}

}  // namespace rrpo
