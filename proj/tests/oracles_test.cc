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

#include "rrpo/oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "gtest/gtest.h"
#include "rrpo/demand_model.h"
#include "rrpo/policy.h"
#include "rrpo/random.h"
#include "rrpo/uncertainty_set.h"
#include "test_util.h"

namespace rrpo {
namespace {

using ::rrpo::testing::ExampleTwo;
using ::rrpo::testing::ExampleTwoSecond;
using ::rrpo::testing::Levels;
using ::rrpo::testing::MakeInstance;
using ::rrpo::testing::Params;
using ::rrpo::testing::RandomBudgetSet;
using ::rrpo::testing::RandomGrid;
using ::rrpo::testing::RandomInstance;
using ::rrpo::testing::RandomParams;
using ::rrpo::testing::RandomPolicy;

// Brute-force argmax of a score over every price vector, lexicographic ties.
template <typename Score>
std::pair<PriceVector, double> BruteForceBest(const Instance& inst,
                                              const Score& score) {
  const int n = inst.num_products();
  PriceVector p{std::vector<int>(n, 0)};
  PriceVector best;
  double best_value = -std::numeric_limits<double>::infinity();
  while (true) {
    const double v = score(p);
    if (best.levels.empty() ||
        v > best_value + 1e-12 * std::max(1.0, std::abs(best_value))) {
      best_value = v;
      best = p;
    }
    int i = n - 1;
    while (i >= 0 && ++p.levels[i] == static_cast<int>(inst.grids[i].size())) {
      p.levels[i--] = 0;
    }
    if (i < 0) break;
  }
  return {best, best_value};
}

// ---------------------------------------------------------------------------
// Log-sum-exp biconjugate.

TEST(BiconjugateTest, HandExamples) {
  auto sym = LogSumExpBiconjugate(std::vector<double>{0.0, 0.0});
  ASSERT_TRUE(sym.ok());
  EXPECT_NEAR(sym->value, std::log(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(sym->mu[0], 0.5);
  EXPECT_DOUBLE_EQ(sym->mu[1], 0.5);

  auto single = LogSumExpBiconjugate(std::vector<double>{5.0});
  EXPECT_DOUBLE_EQ(single->value, 5.0);
  EXPECT_DOUBLE_EQ(single->mu[0], 1.0);

  auto skew = LogSumExpBiconjugate(std::vector<double>{1.0, 0.0});
  const double e = std::exp(1.0);
  EXPECT_NEAR(skew->value, std::log(e + 1.0), 1e-15);
  EXPECT_NEAR(skew->mu[0], e / (e + 1.0), 1e-15);
  EXPECT_NEAR(skew->mu[1], 1.0 / (e + 1.0), 1e-15);

  EXPECT_FALSE(LogSumExpBiconjugate(std::vector<double>{}).ok());
  EXPECT_FALSE(LogSumExpBiconjugate(std::vector<double>{1.0, NAN}).ok());
}

TEST(BiconjugateTest, AnalyticWeightsMaximizeEntropyObjective) {
  // Fine simplex grid for y = (1, 0).
  const std::vector<double> y{1.0, 0.0};
  double best = -1e300;
  for (int t = 0; t <= 200000; ++t) {
    const double m = t / 200000.0;
    best = std::max(best, EntropyObjective(y, std::vector<double>{m, 1 - m}));
  }
  auto res = LogSumExpBiconjugate(y);
  EXPECT_NEAR(best, res->value, 1e-9);
  EXPECT_LE(best, res->value + 1e-15);
}

TEST(BiconjugateTest, IdentityHoldsOnExtremeInputs) {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> y(1 + rng.UniformInt(8));
    for (double& v : y) v = rng.Uniform(-700.0, 700.0);
    auto res = LogSumExpBiconjugate(y);
    ASSERT_TRUE(res.ok());
    const double m = *std::max_element(y.begin(), y.end());
    double s = 0.0;
    for (double v : y) s += std::exp(v - m);
    const double direct = m + std::log(s);
    EXPECT_NEAR(res->value, direct, 1e-10);
    EXPECT_NEAR(EntropyObjective(y, res->mu), direct, 1e-10);
    double total = 0.0;
    for (double w : res->mu) {
      EXPECT_GE(w, 0.0);
      total += w;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

// ---------------------------------------------------------------------------
// Pricing oracles.

TEST(PricingTest, LinearTieBreaksToLowerLevel) {
  const Instance inst = MakeInstance(DemandFamily::kLinear, {{1, 2, 3, 4, 5}},
                                     Params({10.0}, {2.0}));
  auto res = NominalPriceOpt(inst, inst.u0, PricingMethod::Enumerate());
  ASSERT_TRUE(res.ok());
  EXPECT_EQ(res->p_star, Levels({1}));
  EXPECT_DOUBLE_EQ(res->value, 12.0);
  EXPECT_TRUE(res->certified);
}

TEST(PricingTest, LogLogSignRule) {
  const std::vector<std::vector<double>> grid{{1.0, 1.5, 2.0, 3.0}};
  Instance elastic = MakeInstance(DemandFamily::kLogLog, grid,
                                  Params({std::log(10.0)}, {2.0}));
  Instance inelastic = MakeInstance(DemandFamily::kLogLog, grid,
                                    Params({std::log(10.0)}, {0.5}));
  for (auto method : {PricingMethod::Enumerate(), PricingMethod::ExtremeLogLog()}) {
    EXPECT_EQ(NominalPriceOpt(elastic, elastic.u0, method)->p_star, Levels({0}));
    EXPECT_EQ(NominalPriceOpt(inelastic, inelastic.u0, method)->p_star,
              Levels({3}));
  }
  EXPECT_NEAR(NominalPriceOpt(elastic, elastic.u0, PricingMethod::Enumerate())
                  ->value,
              10.0, 1e-12);
}

TEST(PricingTest, ExtremeRequiresLogLog) {
  const Instance inst = ExampleTwo();
  EXPECT_FALSE(
      NominalPriceOpt(inst, inst.u0, PricingMethod::ExtremeLogLog()).ok());
}

TEST(PricingTest, CapExceeded) {
  const Instance inst = MakeInstance(
      DemandFamily::kLinear, {{1, 2, 3}, {1, 2, 3}},
      Params({10.0, 10.0}, {1.0, 1.0}));
  auto res = NominalPriceOpt(inst, inst.u0, PricingMethod::Enumerate(8));
  ASSERT_FALSE(res.ok());
  EXPECT_EQ(res.status().code(), absl::StatusCode::kResourceExhausted);
}

TEST(PricingTest, ExampleTwoMixtureTie) {
  const Instance inst = ExampleTwo();
  const std::vector<WeightedScenario> mix{{1.0 / 6, inst.u0},
                                          {5.0 / 6, ExampleTwoSecond()}};
  auto res = MixturePriceOpt(inst, mix, PricingMethod::Enumerate());
  ASSERT_TRUE(res.ok());
  EXPECT_EQ(res->p_star, Levels({0}));
  EXPECT_NEAR(res->value, 50.0 / 3.0, 1e-12);
}

TEST(PricingTest, SingleScenarioMixtureIsNominal) {
  SplitMix64 rng(4);
  for (DemandFamily f : testing::kAllFamilies) {
    const Instance inst = RandomInstance(rng, 3, f, 5);
    const std::vector<WeightedScenario> mix{{1.0, inst.u0}};
    auto a = MixturePriceOpt(inst, mix, PricingMethod::Enumerate());
    auto b = NominalPriceOpt(inst, inst.u0, PricingMethod::Enumerate());
    EXPECT_EQ(a->p_star, b->p_star);
    EXPECT_DOUBLE_EQ(a->value, b->value);
  }
}

TEST(PricingTest, EnumerateMatchesBruteForce) {
  SplitMix64 rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    const DemandFamily f = testing::kAllFamilies[trial % 3];
    const Instance inst = RandomInstance(rng, 1 + trial % 3, f, 4);
    std::vector<WeightedScenario> mix;
    for (int s = 0; s < 3; ++s) {
      mix.push_back({rng.Uniform(0.0, 1.0), RandomParams(rng, 1 + trial % 3, f)});
    }
    auto res = MixturePriceOpt(inst, mix, PricingMethod::Enumerate());
    ASSERT_TRUE(res.ok());
    auto [p, v] = BruteForceBest(inst, [&](const PriceVector& q) {
      double total = 0.0;
      for (const auto& w : mix) total += w.weight * *Revenue(inst, q, w.u);
      return total;
    });
    EXPECT_EQ(res->p_star, p);
    EXPECT_NEAR(res->value, v, 1e-9 * std::max(1.0, std::abs(v)));
  }
}

TEST(PricingTest, ExtremeMatchesEnumerateForLogLog) {
  SplitMix64 rng(31);
  for (int n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < (n <= 4 ? 100 : 10); ++trial) {
      const Instance inst = RandomInstance(rng, n, DemandFamily::kLogLog, 3);
      std::vector<WeightedScenario> mix;
      const int count = 1 + trial % 3;
      for (int s = 0; s < count; ++s) {
        ParamVector u = RandomParams(rng, n, DemandFamily::kLogLog);
        // Mix elastic and inelastic products.
        for (int i = 0; i < n; ++i) u.beta[i] = rng.Uniform(0.3, 2.5);
        mix.push_back({rng.Uniform(0.0, 1.0), u});
      }
      auto ext = MixturePriceOpt(inst, mix, PricingMethod::ExtremeLogLog());
      auto full = MixturePriceOpt(inst, mix, PricingMethod::Enumerate());
      ASSERT_TRUE(ext.ok() && full.ok());
      EXPECT_NEAR(ext->value, full->value,
                  1e-12 * std::max(1.0, std::abs(full->value)));
      EXPECT_TRUE(ext->certified);
    }
  }
}

TEST(PricingTest, LocalSearchNeverBeatsEnumerate) {
  SplitMix64 rng(8);
  int equal = 0;
  const int trials = 100;
  for (int trial = 0; trial < trials; ++trial) {
    const DemandFamily f = testing::kAllFamilies[trial % 3];
    const Instance inst = RandomInstance(rng, 3, f, 6);
    auto ls = NominalPriceOpt(inst, inst.u0, PricingMethod::LocalSearch(100, trial));
    auto full = NominalPriceOpt(inst, inst.u0, PricingMethod::Enumerate());
    ASSERT_TRUE(ls.ok() && full.ok());
    EXPECT_FALSE(ls->certified);
    const double tol = 1e-12 * std::max(1.0, std::abs(full->value));
    EXPECT_LE(ls->value, full->value + tol);
    if (ls->value >= full->value - tol) ++equal;
  }
  EXPECT_GE(equal, 95);
}

TEST(PricingTest, LocalSearchIsDeterministic) {
  SplitMix64 rng(2);
  const Instance inst = RandomInstance(rng, 4, DemandFamily::kSemiLog, 7);
  auto a = NominalPriceOpt(inst, inst.u0, PricingMethod::LocalSearch(20, 99));
  auto b = NominalPriceOpt(inst, inst.u0, PricingMethod::LocalSearch(20, 99));
  EXPECT_EQ(a->p_star, b->p_star);
  EXPECT_EQ(a->value, b->value);
}

// ---------------------------------------------------------------------------
// Convex worst case.

// Frank-Wolfe lower bound: f(u) + min_{v in U} grad f(u) . (v - u).
double FrankWolfeLowerBound(const Instance& inst, const RandomizedPolicy& pol,
                            const L1Set& set, const ParamVector& u) {
  const int d = u.dimension();
  std::vector<double> g(d, 0.0);
  for (const PolicyAtom& a : pol.support) {
    auto ga = RevenueGradient(inst, a.p, u);
    for (int k = 0; k < d; ++k) g[k] += a.prob * (*ga)[k];
  }
  double base = 0.0;
  for (int k = 0; k < d; ++k) base += g[k] * (u.Get(k) - set.u0.Get(k));
  return ExpectedRevenue(inst, pol, u) - base +
         LinearMinOverL1(set, g)->value_shift;
}

TEST(WorstCaseConvexTest, LinearHandExample) {
  const Instance inst = MakeInstance(DemandFamily::kLinear, {{1, 2, 3, 4, 5}},
                                     Params({10.0}, {2.0}));
  const L1Set set{0.5, inst.u0};
  auto res = WorstCaseConvex(inst, RandomizedPolicy::PointMass(Levels({0})), set);
  ASSERT_TRUE(res.ok());
  EXPECT_NEAR(res->value, 3.0, 1e-12);
  EXPECT_EQ(res->gap, 0.0);
}

TEST(WorstCaseConvexTest, ZeroRadiusIsNominal) {
  SplitMix64 rng(6);
  for (DemandFamily f : testing::kAllFamilies) {
    const Instance inst = RandomInstance(rng, 2, f, 4);
    const RandomizedPolicy pol = RandomPolicy(rng, inst, 3);
    auto res = WorstCaseConvex(inst, pol, L1Set{0.0, inst.u0});
    ASSERT_TRUE(res.ok());
    EXPECT_DOUBLE_EQ(res->value, ExpectedRevenue(inst, pol, inst.u0));
    EXPECT_EQ(res->gap, 0.0);
  }
}

TEST(WorstCaseConvexTest, SingleProductMatchesDenseGrid) {
  SplitMix64 rng(15);
  for (int trial = 0; trial < 12; ++trial) {
    const DemandFamily f = testing::kAllFamilies[trial % 3];
    const Instance inst = RandomInstance(rng, 1, f, 6);
    const RandomizedPolicy pol = RandomPolicy(rng, inst, 1 + trial % 3);
    const L1Set set{rng.Uniform(0.05, 0.6), inst.u0};
    auto res = WorstCaseConvex(inst, pol, set);
    ASSERT_TRUE(res.ok());
    // Grid over the diamond |r_a| + |r_b| <= theta in relative coordinates.
    const int steps = 400;
    double grid_min = std::numeric_limits<double>::infinity();
    ParamVector u = inst.u0;
    for (int a = -steps; a <= steps; ++a) {
      const double ra = set.theta * a / steps;
      const double rest = set.theta - std::abs(ra);
      for (int b = -steps; b <= steps; ++b) {
        const double rb = rest * b / steps;
        u.alpha[0] = inst.u0.alpha[0] * (1 + ra);
        u.beta[0] = inst.u0.beta[0] * (1 + rb);
        grid_min = std::min(grid_min, ExpectedRevenue(inst, pol, u));
      }
    }
    const double scale = std::max(1.0, std::abs(grid_min));
    EXPECT_LE(res->value, grid_min + 1e-7 * scale);
    EXPECT_GE(res->value, grid_min - 1e-2 * scale);
    EXPECT_TRUE(*Contains(set, res->u_star, 1e-9));
  }
}

TEST(WorstCaseConvexTest, FrankWolfeCertificate) {
  SplitMix64 rng(16);
  for (int trial = 0; trial < 30; ++trial) {
    const DemandFamily f = testing::kAllFamilies[trial % 3];
    const int n = 2 + trial % 2;
    const Instance inst = RandomInstance(rng, n, f, 5);
    const RandomizedPolicy pol = RandomPolicy(rng, inst, 1 + trial % 4);
    const L1Set set{rng.Uniform(0.05, 0.6), inst.u0};
    auto res = WorstCaseConvex(inst, pol, set);
    ASSERT_TRUE(res.ok());
    EXPECT_TRUE(res->converged);
    EXPECT_TRUE(*Contains(set, res->u_star, 1e-9));
    EXPECT_NEAR(res->value, ExpectedRevenue(inst, pol, res->u_star), 1e-9);
    const double scale = std::max(1.0, std::abs(res->value));
    // The true minimum lies in [value - gap, value]; an independent
    // first-order bound must not exceed the returned value.
    const double fw = FrankWolfeLowerBound(inst, pol, set, res->u_star);
    EXPECT_LE(fw, res->value + 1e-9 * scale);
    EXPECT_LE(res->gap, 1e-7 * scale);
    // Spot checks on random members.
    for (int s = 0; s < 200; ++s) {
      std::vector<double> flat = inst.u0.Flatten();
      std::vector<double> w(flat.size());
      double tot = 0;
      for (double& v : w) tot += std::abs(v = rng.Uniform(-1, 1));
      for (size_t k = 0; k < flat.size(); ++k) {
        flat[k] *= 1 + set.theta * w[k] / tot;
      }
      const double v =
          ExpectedRevenue(inst, pol, *ParamVector::Unflatten(n, flat));
      EXPECT_GE(v, res->value - 1e-7 * scale);
    }
  }
}

TEST(WorstCaseConvexTest, PointMassClosedFormIsFirstOrderOptimal) {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 90; ++trial) {
    const DemandFamily f = testing::kAllFamilies[trial % 3];
    const int n = 1 + trial % 3;
    Instance inst = RandomInstance(rng, n, f, 5);
    if (trial % 7 == 0) inst.u0.gamma.assign(n * n, 0.0);
    const RandomizedPolicy pol = RandomPolicy(rng, inst, 1);
    const L1Set set{rng.Uniform(0.0, 1.5), inst.u0};
    auto res = WorstCaseConvex(inst, pol, set);
    ASSERT_TRUE(res.ok());
    EXPECT_TRUE(*Contains(set, res->u_star, 1e-9));
    const double scale = std::max(1.0, std::abs(res->value));
    EXPECT_NEAR(res->value, ExpectedRevenue(inst, pol, res->u_star), 1e-9 * scale);
    // Convexity: value minus the Frank-Wolfe gap bounds the minimum from
    // below, so a zero gap proves optimality.
    const double fw = FrankWolfeLowerBound(inst, pol, set, res->u_star);
    EXPECT_NEAR(fw, res->value, 1e-8 * scale) << "trial " << trial;
  }
}

TEST(WorstCaseConvexTest, MonotoneInRadiusAndBelowNominal) {
  SplitMix64 rng(18);
  for (int trial = 0; trial < 15; ++trial) {
    const DemandFamily f = testing::kAllFamilies[trial % 3];
    const Instance inst = RandomInstance(rng, 2, f, 4);
    const RandomizedPolicy pol = RandomPolicy(rng, inst, 2);
    double prev = ExpectedRevenue(inst, pol, inst.u0);
    for (double theta : {0.0, 0.1, 0.2, 0.4, 0.8}) {
      auto res = WorstCaseConvex(inst, pol, L1Set{theta, inst.u0});
      ASSERT_TRUE(res.ok());
      EXPECT_LE(res->value, prev + 1e-7 * std::max(1.0, std::abs(prev)));
      prev = res->value;
    }
  }
}

// ---------------------------------------------------------------------------
// Discrete worst case.

TEST(WorstCaseDiscreteTest, ExampleOneMixedFamilies) {
  const Instance inst = MakeInstance(DemandFamily::kLinear, {{1.0, 2.5}},
                                     Params({10.0}, {2.0}));
  ParamVector loglog = Params({std::log(10.0)}, {2.0});
  loglog.family_override = DemandFamily::kLogLog;
  const ExplicitSet set{{inst.u0, loglog}};
  const RandomizedPolicy pol = MakePolicy(
      {{Levels({0}), 17.0 / 21.0}, {Levels({1}), 4.0 / 21.0}});
  auto res = WorstCaseDiscrete(inst, pol, set, DiscreteMethod::Enumerate());
  ASSERT_TRUE(res.ok());
  EXPECT_NEAR(res->value, 62.0 / 7.0, 1e-12);
  EXPECT_TRUE(res->certified);
}

double BruteForceWorst(const Instance& inst, const RandomizedPolicy& pol,
                       const DiscreteBudgetSet& set) {
  double best = std::numeric_limits<double>::infinity();
  const std::vector<ParamVector> members = *EnumerateDiscrete(set);
  for (const ParamVector& u : members) {
    best = std::min(best, ExpectedRevenue(inst, pol, u));
  }
  return best;
}

TEST(WorstCaseDiscreteTest, ZeroBudgetIsNominal) {
  SplitMix64 rng(40);
  const Instance inst = RandomInstance(rng, 2, DemandFamily::kSemiLog, 4);
  const RandomizedPolicy pol = RandomPolicy(rng, inst, 3);
  auto res = WorstCaseDiscrete(inst, pol, RandomBudgetSet(rng, inst.u0, 0),
                               DiscreteMethod::Enumerate());
  EXPECT_DOUBLE_EQ(res->value, ExpectedRevenue(inst, pol, inst.u0));
  EXPECT_EQ(res->u_star, inst.u0);
}

TEST(WorstCaseDiscreteTest, EnumerateMatchesBruteForce) {
  SplitMix64 rng(41);
  for (int trial = 0; trial < 90; ++trial) {
    const DemandFamily f = testing::kAllFamilies[trial % 3];
    const int n = 1 + trial % 2;
    const Instance inst = RandomInstance(rng, n, f, 4);
    // Point masses exercise the closed forms, mixtures the enumeration.
    const RandomizedPolicy pol = RandomPolicy(rng, inst, 1 + (trial / 3) % 3);
    const DiscreteBudgetSet set =
        RandomBudgetSet(rng, inst.u0, static_cast<int>(rng.UniformInt(5)));
    auto res = WorstCaseDiscrete(inst, pol, set, DiscreteMethod::Enumerate());
    ASSERT_TRUE(res.ok());
    const double want = BruteForceWorst(inst, pol, set);
    const double scale = std::max(1.0, std::abs(want));
    EXPECT_NEAR(res->value, want, 1e-10 * scale) << "trial " << trial;
    EXPECT_TRUE(*Contains(set, res->u_star, 1e-12));
    EXPECT_NEAR(ExpectedRevenue(inst, pol, res->u_star), res->value,
                1e-10 * scale);
  }
}

TEST(WorstCaseDiscreteTest, LocalSearchAgreesWithEnumerate) {
  SplitMix64 rng(42);
  int equal = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Instance inst = RandomInstance(rng, 2, DemandFamily::kSemiLog, 4);
    const RandomizedPolicy pol = RandomPolicy(rng, inst, 3);
    const DiscreteBudgetSet set = RandomBudgetSet(rng, inst.u0, 2);
    auto exact = WorstCaseDiscrete(inst, pol, set, DiscreteMethod::Enumerate());
    auto ls = WorstCaseDiscrete(inst, pol, set,
                                DiscreteMethod::LocalSearch(50, trial + 1));
    ASSERT_TRUE(exact.ok() && ls.ok());
    EXPECT_FALSE(ls->certified);
    const double tol = 1e-12 * std::max(1.0, std::abs(exact->value));
    EXPECT_GE(ls->value, exact->value - tol);
    EXPECT_TRUE(*Contains(set, ls->u_star, 1e-12));
    if (ls->value <= exact->value + tol) ++equal;
  }
  EXPECT_GE(equal, 95);
}

TEST(WorstCaseDiscreteTest, CapExceeded) {
  SplitMix64 rng(43);
  const Instance inst = RandomInstance(rng, 2, DemandFamily::kSemiLog, 4);
  const RandomizedPolicy pol = RandomPolicy(rng, inst, 3);
  auto res = WorstCaseDiscrete(inst, pol, RandomBudgetSet(rng, inst.u0, 3),
                               DiscreteMethod::Enumerate(10));
  ASSERT_FALSE(res.ok());
  EXPECT_EQ(res.status().code(), absl::StatusCode::kResourceExhausted);
}

}  // namespace
}  // namespace rrpo
