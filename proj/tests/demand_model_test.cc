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

#include "rrpo/demand_model.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "rrpo/random.h"
#include "test_util.h"

namespace rrpo {
namespace {

using ::rrpo::testing::Levels;
using ::rrpo::testing::MakeInstance;
using ::rrpo::testing::Params;

TEST(DemandModelTest, LinearTwoProductHandEvaluation) {
  // d1 = 10 - 2 + 0.5 * 3, d2 = 8 - 3 - 0.5 * 2.
  const Instance inst = MakeInstance(DemandFamily::kLinear, {{2.0}, {3.0}},
                                     Params({10, 8}, {1, 1}, {0, 0.5, -0.5, 0}));
  auto d = Demand(inst, Levels({0, 0}), inst.u0);
  ASSERT_TRUE(d.ok());
  EXPECT_DOUBLE_EQ((*d)[0], 9.5);
  EXPECT_DOUBLE_EQ((*d)[1], 4.0);
}

TEST(DemandModelTest, LogLogUnitPrice) {
  const Instance inst = MakeInstance(DemandFamily::kLogLog, {{1.0, 2.5}},
                                     Params({std::log(10.0)}, {2.0}));
  auto d = Demand(inst, Levels({0}), inst.u0);
  ASSERT_TRUE(d.ok());
  EXPECT_NEAR((*d)[0], 10.0, 1e-12);
  // R(p) = 10 / p.
  EXPECT_NEAR(*Revenue(inst, Levels({1}), inst.u0), 4.0, 1e-12);
}

TEST(DemandModelTest, SemiLogZeroExponent) {
  const Instance inst =
      MakeInstance(DemandFamily::kSemiLog, {{7.0}}, Params({0.0}, {0.0}));
  EXPECT_DOUBLE_EQ((*Demand(inst, Levels({0}), inst.u0))[0], 1.0);
}

TEST(DemandModelTest, QuadraticRevenueValues) {
  const Instance inst = MakeInstance(DemandFamily::kLinear, {{1.0, 2.5}},
                                     Params({10.0}, {2.0}));
  EXPECT_DOUBLE_EQ(*Revenue(inst, Levels({0}), inst.u0), 8.0);
  EXPECT_DOUBLE_EQ(*Revenue(inst, Levels({1}), inst.u0), 12.5);
}

TEST(DemandModelTest, ZeroDemandGivesZeroRevenue) {
  const Instance inst = MakeInstance(DemandFamily::kLinear, {{1.0}, {2.0}},
                                     ParamVector::Zero(2));
  EXPECT_EQ(*Revenue(inst, Levels({0, 0}), inst.u0), 0.0);
}

TEST(DemandModelTest, GradientHandValues) {
  const Instance lin =
      MakeInstance(DemandFamily::kLinear, {{3.0}}, Params({10.0}, {2.0}));
  auto g = RevenueGradient(lin, Levels({0}), lin.u0);
  ASSERT_TRUE(g.ok());
  EXPECT_EQ(*g, (std::vector<double>{3.0, -9.0}));

  const Instance semi =
      MakeInstance(DemandFamily::kSemiLog, {{1.7}}, Params({2.0}, {0.8}));
  auto gs = RevenueGradient(semi, Levels({0}), semi.u0);
  EXPECT_NEAR((*gs)[0], *Revenue(semi, Levels({0}), semi.u0), 1e-12);
}

TEST(DemandModelTest, FlattenOrderAndRoundTrip) {
  ParamVector u = Params({1, 2, 3}, {4, 5, 6},
                         {0, 12, 13, 21, 0, 23, 31, 32, 0});
  const std::vector<double> flat = u.Flatten();
  EXPECT_EQ(flat, (std::vector<double>{1, 2, 3, 4, 5, 6, 12, 13, 21, 23, 31, 32}));
  auto back = ParamVector::Unflatten(3, flat);
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(*back, u);
  for (int k = 0; k < 12; ++k) EXPECT_EQ(u.Get(k), flat[k]);
  EXPECT_FALSE(ParamVector::Unflatten(3, std::vector<double>(11)).ok());
}

TEST(DemandModelTest, RejectsMalformedInputs) {
  Instance inst = MakeInstance(DemandFamily::kLinear, {{1.0, 2.0}},
                               Params({1.0}, {1.0}));
  EXPECT_TRUE(inst.Validate().ok());
  EXPECT_FALSE(Demand(inst, Levels({2}), inst.u0).ok());
  EXPECT_FALSE(Demand(inst, Levels({0, 0}), inst.u0).ok());
  EXPECT_FALSE(Demand(inst, Levels({0}), ParamVector::Zero(2)).ok());
  Instance bad = inst;
  bad.grids = {{2.0, 1.0}};
  EXPECT_FALSE(bad.Validate().ok());
  bad.grids = {{0.0, 1.0}};
  EXPECT_FALSE(bad.Validate().ok());
  Instance diag = MakeInstance(DemandFamily::kLinear, {{1.0}, {1.0}},
                               Params({1, 1}, {1, 1}, {0.5, 0, 0, 0}));
  EXPECT_FALSE(diag.Validate().ok());
  EXPECT_FALSE(ParseFamily("cubic").ok());
  EXPECT_EQ(*ParseFamily("loglog"), DemandFamily::kLogLog);
}

class RandomModelTest : public ::testing::TestWithParam<DemandFamily> {};

TEST_P(RandomModelTest, RevenueMatchesDemandAndGradientMatchesDifferences) {
  const DemandFamily family = GetParam();
  SplitMix64 rng(42 + static_cast<int>(family));
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 4;
    std::vector<std::vector<double>> grids(n);
    for (auto& g : grids) g = {rng.Uniform(0.5, 5.0)};
    const Instance inst = MakeInstance(
        family, grids, testing::RandomParams(rng, n, family));
    const PriceVector p = Levels(std::vector<int>(n, 0));
    const auto d = *Demand(inst, p, inst.u0);
    double dot = 0.0;
    for (int i = 0; i < n; ++i) dot += grids[i][0] * d[i];
    const double r = *Revenue(inst, p, inst.u0);
    EXPECT_NEAR(r, dot, 1e-12 * std::abs(dot));

    const std::vector<double> g = *RevenueGradient(inst, p, inst.u0);
    const std::vector<double> flat = inst.u0.Flatten();
    for (int k = 0; k < inst.u0.dimension(); ++k) {
      const double h = 1e-6 * std::max(1.0, std::abs(flat[k]));
      ParamVector up = inst.u0, dn = inst.u0;
      up.Set(k, flat[k] + h);
      dn.Set(k, flat[k] - h);
      const double fd =
          (*Revenue(inst, p, up) - *Revenue(inst, p, dn)) / (2 * h);
      EXPECT_LE(std::abs(fd - g[k]), 1e-6 * std::max(std::abs(g[k]), 1e-6 * std::abs(r)) + 1e-9)
          << "coordinate " << k;
    }
  }
}

TEST_P(RandomModelTest, LinearityOrConvexityInParameters) {
  const DemandFamily family = GetParam();
  SplitMix64 rng(7 + static_cast<int>(family));
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 3;
    std::vector<std::vector<double>> grids(n);
    for (auto& g : grids) g = {rng.Uniform(0.5, 5.0)};
    const Instance inst = MakeInstance(family, grids,
                                       testing::RandomParams(rng, n, family));
    const ParamVector v = testing::RandomParams(rng, n, family);
    const PriceVector p = Levels(std::vector<int>(n, 0));
    const double a = rng.Uniform01();
    std::vector<double> fu = inst.u0.Flatten(), fv = v.Flatten(), mix(fu.size());
    for (size_t k = 0; k < fu.size(); ++k) mix[k] = a * fu[k] + (1 - a) * fv[k];
    const ParamVector m = *ParamVector::Unflatten(n, mix);
    const double ru = *Revenue(inst, p, inst.u0), rv = *Revenue(inst, p, v);
    const double rm = *Revenue(inst, p, m);
    if (family == DemandFamily::kLinear) {
      EXPECT_NEAR(rm, a * ru + (1 - a) * rv, 1e-10 * std::max(1.0, std::abs(ru) + std::abs(rv)));
    } else {
      EXPECT_LE(rm, a * ru + (1 - a) * rv + 1e-10 * (ru + rv));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(AllFamilies, RandomModelTest,
                         ::testing::ValuesIn(testing::kAllFamilies));

}  // namespace
}  // namespace rrpo
