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
#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "rrpo/demand_model.h"
#include "rrpo/oracles.h"
#include "rrpo/policy.h"
#include "rrpo/random.h"
#include "rrpo/uncertainty_set.h"
#include "test_util.h"

namespace rrpo {
namespace {

using ::rrpo::testing::kAllFamilies;
using ::rrpo::testing::MakeInstance;
using ::rrpo::testing::Params;
using ::rrpo::testing::RandomParams;
using ::rrpo::testing::Range;

double Scale(double v) { return std::max(1.0, std::abs(v)); }

// Grids {1, ..., 5} as in the synthetic experiments.
Instance RandomSyntheticInstance(SplitMix64& rng, int n, DemandFamily family) {
  return MakeInstance(family,
                      std::vector<std::vector<double>>(n, {1, 2, 3, 4, 5}),
                      RandomParams(rng, n, family));
}

// A random member of the L1 set with total relative deviation <= theta.
ParamVector RandomMember(SplitMix64& rng, const L1Set& set) {
  const int d = set.u0.dimension();
  std::vector<double> z(d);
  double total = 0.0;
  for (double& v : z) {
    v = rng.Uniform(-1, 1);
    total += std::abs(v);
  }
  const double radius = set.theta * rng.Uniform01();
  ParamVector u = set.u0;
  for (int k = 0; k < d; ++k) {
    u.Set(k, set.u0.Get(k) * (1.0 + radius * z[k] / total));
  }
  return u;
}

TEST(RrpoConvexTest, ZeroBudgetIsNominal) {
  SplitMix64 rng(1);
  for (DemandFamily family : kAllFamilies) {
    for (int trial = 0; trial < 5; ++trial) {
      const Instance inst = RandomSyntheticInstance(rng, 2, family);
      auto nominal = NominalPriceOpt(inst, inst.u0, PricingMethod::Enumerate());
      auto rr = SolveRrpoConvex(inst, L1Set{0.0, inst.u0});
      ASSERT_TRUE(rr.ok()) << rr.status();
      EXPECT_NEAR(rr->z_rr_upper, nominal->value, 1e-9 * Scale(nominal->value));
      EXPECT_NEAR(rr->policy_worst_case, nominal->value,
                  1e-6 * Scale(nominal->value));
    }
  }
}

TEST(RrpoConvexTest, BracketIsSoundAndTight) {
  SplitMix64 rng(42);
  for (DemandFamily family : kAllFamilies) {
    for (int trial = 0; trial < 6; ++trial) {
      const int n = 1 + rng.UniformInt(3);
      const Instance inst = RandomSyntheticInstance(rng, n, family);
      const L1Set set{std::vector<double>{0.1, 0.5, 1.0}[trial % 3], inst.u0};
      auto rr = SolveRrpoConvex(inst, set);
      ASSERT_TRUE(rr.ok()) << rr.status();
      EXPECT_TRUE(rr->converged);
      EXPECT_TRUE(rr->certified);
      const double scale = Scale(rr->z_rr_upper);
      EXPECT_LE(rr->z_rr_upper - rr->z_rr_lower, 1e-6 * scale);

      // The upper bound is attained by max_p R(p, u*) at a member u*.
      EXPECT_TRUE(*Contains(set, rr->u_star, 1e-7));
      auto best = NominalPriceOpt(inst, rr->u_star, PricingMethod::Enumerate());
      EXPECT_NEAR(best->value, rr->z_rr_upper, 1e-9 * scale);

      // The policy's worst case, recomputed tightly, lies in the bracket.
      auto wc = WorstCaseConvex(inst, rr->policy, set, 1e-10, 5000);
      ASSERT_TRUE(wc.ok());
      EXPECT_GE(wc->value, rr->z_rr_lower - 1e-4 * scale);
      EXPECT_LE(wc->value - wc->gap, rr->z_rr_upper + 1e-4 * scale);

      // No sampled member does worse than the reported worst case.
      for (int s = 0; s < 200; ++s) {
        const double v = ExpectedRevenue(inst, rr->policy, RandomMember(rng, set));
        EXPECT_GE(v, rr->z_rr_lower - 1e-9 * scale);
      }
    }
  }
}

TEST(RrpoConvexTest, OrderingInvariant) {
  SplitMix64 rng(9);
  for (DemandFamily family : kAllFamilies) {
    for (int trial = 0; trial < 6; ++trial) {
      const Instance inst = RandomSyntheticInstance(rng, 2, family);
      const L1Set set{0.5, inst.u0};
      auto nominal = NominalPriceOpt(inst, inst.u0, PricingMethod::Enumerate());
      auto dr = SolveDrpoConvex(inst, set);
      auto rr = SolveRrpoConvex(inst, set);
      ASSERT_TRUE(dr.ok());
      ASSERT_TRUE(rr.ok());
      auto n_wc = WorstCaseConvex(
          inst, RandomizedPolicy::PointMass(nominal->p_star), set);
      const double tol = 1e-5 * Scale(nominal->value);
      EXPECT_GE(nominal->value, rr->policy_worst_case - tol);
      EXPECT_GE(rr->policy_worst_case, dr->z_dr - tol);
      EXPECT_GE(dr->z_dr, n_wc->value - tol);
    }
  }
}

TEST(RrpoConvexTest, TracesAreMonotone) {
  SplitMix64 rng(3);
  const Instance inst = RandomSyntheticInstance(rng, 3, DemandFamily::kSemiLog);
  auto rr = SolveRrpoConvex(inst, L1Set{1.0, inst.u0});
  ASSERT_TRUE(rr.ok());
  ASSERT_EQ(rr->lower_trace.size(), rr->upper_trace.size());
  ASSERT_GT(rr->lower_trace.size(), 1u);
  for (size_t k = 1; k < rr->lower_trace.size(); ++k) {
    EXPECT_GE(rr->lower_trace[k], rr->lower_trace[k - 1]);
    EXPECT_LE(rr->upper_trace[k], rr->upper_trace[k - 1]);
    EXPECT_LE(rr->lower_trace[k], rr->upper_trace[k]);
  }
}

TEST(RrpoConvexTest, NonincreasingInBudget) {
  SplitMix64 rng(17);
  for (DemandFamily family : kAllFamilies) {
    const Instance inst = RandomSyntheticInstance(rng, 2, family);
    double previous = INFINITY;
    for (double theta : {0.0, 0.1, 0.5, 1.0, 1.5}) {
      auto rr = SolveRrpoConvex(inst, L1Set{theta, inst.u0});
      ASSERT_TRUE(rr.ok());
      EXPECT_LE(rr->z_rr_upper, previous + 1e-9 * Scale(previous));
      previous = rr->z_rr_upper;
    }
  }
}

TEST(RrpoConvexTest, ExtremePricingMatchesEnumerationOnLogLog) {
  SplitMix64 rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    const Instance inst = RandomSyntheticInstance(rng, 3, DemandFamily::kLogLog);
    const L1Set set{0.5, inst.u0};
    auto full = SolveRrpoConvex(inst, set, 1e-6, 500, PricingMethod::Enumerate());
    auto extreme =
        SolveRrpoConvex(inst, set, 1e-6, 500, PricingMethod::ExtremeLogLog());
    ASSERT_TRUE(full.ok());
    ASSERT_TRUE(extreme.ok());
    EXPECT_NEAR(full->z_rr_upper, extreme->z_rr_upper,
                2e-6 * Scale(full->z_rr_upper));
    for (const PolicyAtom& atom : extreme->policy.support) {
      for (int level : atom.p.levels) EXPECT_TRUE(level == 0 || level == 4);
    }
  }
}

TEST(RrpoConvexTest, ConcaveSingleProductIsRandomizationProof) {
  // Linear demand with one product on a fine grid: concave revenue, so
  // randomizing cannot beat the best deterministic price.
  SplitMix64 rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const Instance inst =
        MakeInstance(DemandFamily::kLinear, {Range(1.0, 5.0, 1e-3)},
                     Params({rng.Uniform(20, 40)}, {rng.Uniform(2, 8)}));
    const L1Set set{rng.Uniform(0.05, 0.5), inst.u0};
    auto rr = SolveRrpoConvex(inst, set);
    auto dr = SolveDrpoConvex(inst, set);
    ASSERT_TRUE(rr.ok());
    ASSERT_TRUE(dr.ok());
    EXPECT_NEAR(rr->z_rr_upper, dr->z_dr, 1e-5 * Scale(dr->z_dr));
  }
}

TEST(DrpoConvexTest, MatchesPerPriceWorstCases) {
  SplitMix64 rng(57);
  for (DemandFamily family : kAllFamilies) {
    for (int trial = 0; trial < 4; ++trial) {
      const Instance inst = RandomSyntheticInstance(rng, 1 + trial % 2, family);
      const L1Set set{0.4, inst.u0};
      double best = -INFINITY;
      PriceVector p{std::vector<int>(inst.num_products(), 0)};
      // Enumerate every price vector and minimize each by the iterative
      // worst-case oracle rather than the closed form.
      while (true) {
        auto wc = WorstCaseConvex(inst, RandomizedPolicy::PointMass(p), set,
                                  1e-10, 5000);
        best = std::max(best, wc->value);
        int i = inst.num_products() - 1;
        while (i >= 0 && ++p.levels[i] == 5) p.levels[i--] = 0;
        if (i < 0) break;
      }
      auto dr = SolveDrpoConvex(inst, set);
      ASSERT_TRUE(dr.ok());
      EXPECT_NEAR(dr->z_dr, best, 1e-7 * Scale(best));
      EXPECT_TRUE(*Contains(set, dr->u_wc, 1e-7));
      EXPECT_NEAR(*Revenue(inst, dr->p_dr, dr->u_wc), dr->z_dr,
                  1e-9 * Scale(best));
    }
  }
}

TEST(DrpoConvexTest, RejectsExtremePricing) {
  SplitMix64 rng(2);
  const Instance inst = RandomSyntheticInstance(rng, 2, DemandFamily::kLogLog);
  auto dr = SolveDrpoConvex(inst, L1Set{0.5, inst.u0},
                            PricingMethod::ExtremeLogLog());
  EXPECT_EQ(dr.status().code(), absl::StatusCode::kInvalidArgument);
}

TEST(RrpoConvexTest, RejectsBadInput) {
  SplitMix64 rng(4);
  const Instance inst = RandomSyntheticInstance(rng, 2, DemandFamily::kLinear);
  EXPECT_FALSE(SolveRrpoConvex(inst, L1Set{-1.0, inst.u0}).ok());
  EXPECT_FALSE(SolveRrpoConvex(inst, L1Set{0.5, inst.u0}, 0.0).ok());
  EXPECT_FALSE(SolveRrpoConvex(inst, L1Set{0.5, ParamVector::Zero(3)}).ok());
}

}  // namespace
}  // namespace rrpo
