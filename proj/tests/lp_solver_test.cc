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

#include "rrpo/lp_solver.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"

namespace rrpo {
namespace {

// Value of the matrix game max_pi min_u pi' M e_u, as a maximization LP.
LpSolution SolveMaxMin(const std::vector<std::vector<double>>& payoff) {
  const int rows = payoff.size(), cols = payoff[0].size();
  LinearProgram lp;
  lp.sense = Sense::kMax;
  lp.AddVariable(1.0, -kInfinity, kInfinity);
  for (int p = 0; p < rows; ++p) lp.AddVariable(0.0, 0.0, kInfinity);
  for (int u = 0; u < cols; ++u) {
    std::vector<double> c(rows + 1);
    c[0] = 1.0;
    for (int p = 0; p < rows; ++p) c[p + 1] = -payoff[p][u];
    lp.AddRow(c, Relation::kLe, 0.0);
  }
  std::vector<double> simplex(rows + 1, 1.0);
  simplex[0] = 0.0;
  lp.AddRow(simplex, Relation::kEq, 1.0);
  auto sol = SolveLp(lp);
  EXPECT_TRUE(sol.ok()) << sol.status();
  return *sol;
}

// min_lambda max_p sum_u lambda_u M[p][u].
LpSolution SolveMinMax(const std::vector<std::vector<double>>& payoff) {
  const int rows = payoff.size(), cols = payoff[0].size();
  LinearProgram lp;
  lp.sense = Sense::kMin;
  lp.AddVariable(1.0, -kInfinity, kInfinity);
  for (int u = 0; u < cols; ++u) lp.AddVariable(0.0, 0.0, kInfinity);
  for (int p = 0; p < rows; ++p) {
    std::vector<double> c(cols + 1);
    c[0] = 1.0;
    for (int u = 0; u < cols; ++u) c[u + 1] = -payoff[p][u];
    lp.AddRow(c, Relation::kGe, 0.0);
  }
  std::vector<double> simplex(cols + 1, 1.0);
  simplex[0] = 0.0;
  lp.AddRow(simplex, Relation::kEq, 1.0);
  auto sol = SolveLp(lp);
  EXPECT_TRUE(sol.ok()) << sol.status();
  return *sol;
}

TEST(LpSolverTest, MatrixGameEpigraphFromTwoScenarioExample) {
  const LpSolution sol = SolveMaxMin({{25, 15}, {0, 20}});
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.value, 50.0 / 3.0, 1e-12);
  EXPECT_NEAR(sol.x[1], 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(sol.x[2], 1.0 / 3.0, 1e-12);
  // Scenario-row duals form the adversary's mixed strategy.
  EXPECT_NEAR(sol.duals[0], 1.0 / 6.0, 1e-12);
  EXPECT_NEAR(sol.duals[1], 5.0 / 6.0, 1e-12);
}

TEST(LpSolverTest, DualOverScenarios) {
  const LpSolution sol = SolveMinMax({{25, 15}, {0, 20}});
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.value, 50.0 / 3.0, 1e-12);
  EXPECT_NEAR(sol.x[1], 1.0 / 6.0, 1e-12);
  EXPECT_NEAR(sol.x[2], 5.0 / 6.0, 1e-12);
}

TEST(LpSolverTest, SingleBoundRowHasUnitDual) {
  LinearProgram lp;
  lp.AddVariable(1.0, -kInfinity, kInfinity);
  lp.AddRow({1.0}, Relation::kGe, 3.0);
  auto sol = SolveLp(lp);
  ASSERT_TRUE(sol.ok());
  ASSERT_EQ(sol->status, LpStatus::kOptimal);
  EXPECT_DOUBLE_EQ(sol->value, 3.0);
  EXPECT_NEAR(sol->duals[0], 1.0, 1e-12);
}

TEST(LpSolverTest, MaxWithLessEqualRowsHasNonnegativeDuals) {
  // max 3x + 2y s.t. x + y <= 4, x + 3y <= 7, x <= 3.
  LinearProgram lp;
  lp.sense = Sense::kMax;
  lp.AddVariable(3.0, 0.0, kInfinity);
  lp.AddVariable(2.0, 0.0, kInfinity);
  lp.AddRow({1, 1}, Relation::kLe, 4);
  lp.AddRow({1, 3}, Relation::kLe, 7);
  lp.AddRow({1, 0}, Relation::kLe, 3);
  auto sol = SolveLp(lp);
  ASSERT_TRUE(sol.ok());
  EXPECT_NEAR(sol->value, 11.0, 1e-12);
  EXPECT_NEAR(sol->duals[0], 2.0, 1e-12);
  EXPECT_NEAR(sol->duals[1], 0.0, 1e-12);
  EXPECT_NEAR(sol->duals[2], 1.0, 1e-12);
}

TEST(LpSolverTest, DetectsInfeasibleAndUnbounded) {
  LinearProgram infeasible;
  infeasible.AddVariable(1.0, 0.0, kInfinity);
  infeasible.AddRow({1.0}, Relation::kLe, -1.0);
  auto a = SolveLp(infeasible);
  ASSERT_TRUE(a.ok());
  EXPECT_EQ(a->status, LpStatus::kInfeasible);

  LinearProgram unbounded;
  unbounded.sense = Sense::kMax;
  unbounded.AddVariable(1.0, 0.0, kInfinity);
  unbounded.AddVariable(0.0, 0.0, kInfinity);
  unbounded.AddRow({1.0, -1.0}, Relation::kLe, 1.0);
  auto b = SolveLp(unbounded);
  ASSERT_TRUE(b.ok());
  EXPECT_EQ(b->status, LpStatus::kUnbounded);
}

TEST(LpSolverTest, BoundedAndFreeVariables) {
  // min -x - y + z with x in [1, 2], y in (-inf, 5], z free, z >= x - 7.
  LinearProgram lp;
  lp.AddVariable(-1.0, 1.0, 2.0);
  lp.AddVariable(-1.0, -kInfinity, 5.0);
  lp.AddVariable(1.0, -kInfinity, kInfinity);
  lp.AddRow({-1, 0, 1}, Relation::kGe, -7);
  auto sol = SolveLp(lp);
  ASSERT_TRUE(sol.ok());
  ASSERT_EQ(sol->status, LpStatus::kOptimal);
  EXPECT_NEAR(sol->value, -2.0 - 5.0 + (2.0 - 7.0), 1e-12);
}

TEST(LpSolverTest, RandomMatrixGamesSatisfyMinimaxEquality) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-5.0, 10.0);
  std::uniform_int_distribution<int> size(1, 9);
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = size(rng), cols = size(rng);
    std::vector<std::vector<double>> m(rows, std::vector<double>(cols));
    for (auto& r : m)
      for (double& v : r) v = unif(rng);
    const LpSolution a = SolveMaxMin(m);
    const LpSolution b = SolveMinMax(m);
    ASSERT_EQ(a.status, LpStatus::kOptimal);
    ASSERT_EQ(b.status, LpStatus::kOptimal);
    EXPECT_NEAR(a.value, b.value, 1e-8) << "trial " << trial;
  }
}

TEST(LpSolverTest, ComplementarySlacknessAndRowPermutation) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 7, m = 2 + (trial * 3) % 9;
    LinearProgram lp;
    lp.sense = Sense::kMax;
    for (int j = 0; j < n; ++j) lp.AddVariable(unif(rng), 0.0, 1.0 + 3 * unif(rng));
    for (int i = 0; i < m; ++i) {
      std::vector<double> c(n);
      for (double& v : c) v = unif(rng) - 0.2;
      lp.AddRow(c, i % 3 == 2 ? Relation::kGe : Relation::kLe,
                i % 3 == 2 ? -1.0 : 1.0 + unif(rng));
    }
    auto sol = SolveLp(lp);
    ASSERT_TRUE(sol.ok()) << sol.status();
    ASSERT_EQ(sol->status, LpStatus::kOptimal);
    for (int i = 0; i < m; ++i) {
      double ax = 0.0;
      for (int j = 0; j < n; ++j) ax += lp.rows[i].coeffs[j] * sol->x[j];
      EXPECT_NEAR(sol->duals[i] * (lp.rows[i].rhs - ax), 0.0, 1e-7);
      if (lp.rows[i].relation == Relation::kLe) {
        EXPECT_GE(sol->duals[i], -1e-9);
      } else {
        EXPECT_LE(sol->duals[i], 1e-9);
      }
    }
    LinearProgram permuted = lp;
    std::reverse(permuted.rows.begin(), permuted.rows.end());
    auto again = SolveLp(permuted);
    ASSERT_TRUE(again.ok());
    EXPECT_NEAR(again->value, sol->value, 1e-9);
  }
}

TEST(LpSolverTest, ColumnAppendWarmStartMatchesColdSolve) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const int m = 6;
  std::vector<Relation> rel(m, Relation::kLe);
  std::vector<double> rhs(m, 1.0);
  rel[0] = Relation::kEq;
  SimplexModel model(Sense::kMax, rel, rhs);
  LinearProgram lp;
  lp.sense = Sense::kMax;
  for (int i = 0; i < m; ++i) lp.AddRow({}, rel[i], rhs[i]);
  for (int round = 0; round < 30; ++round) {
    std::vector<double> col(m);
    col[0] = 1.0;
    for (int i = 1; i < m; ++i) col[i] = unif(rng);
    const double c = unif(rng);
    model.AddColumn(c, 0.0, kInfinity, col);
    const int j = lp.AddVariable(c, 0.0, kInfinity);
    for (int i = 0; i < m; ++i) lp.rows[i].coeffs[j] = col[i];
    auto warm = model.Solve();
    auto cold = SolveLp(lp);
    ASSERT_TRUE(warm.ok()) << warm.status();
    ASSERT_TRUE(cold.ok());
    ASSERT_EQ(warm->status, cold->status);
    if (warm->status == LpStatus::kOptimal) {
      EXPECT_NEAR(warm->value, cold->value, 1e-10);
    }
  }
}

}  // namespace
}  // namespace rrpo
