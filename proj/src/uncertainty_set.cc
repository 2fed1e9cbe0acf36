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

#include "rrpo/uncertainty_set.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>

#include "absl/strings/str_format.h"

namespace rrpo {
namespace {

absl::Status CheckShape(const ParamVector& u, int num_products,
                        const char* what) {
  const size_t n = num_products;
  if (u.alpha.size() != n || u.beta.size() != n || u.gamma.size() != n * n) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "dimension mismatch: %s does not match %d products", what, n));
  }
  for (size_t i = 0; i < n; ++i) {
    if (u.gamma[i * n + i] != 0.0) {
      return absl::InvalidArgumentError(
          absl::StrFormat("%s has a nonzero gamma diagonal", what));
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::Status ValidateSet(const UncertaintySet& set, int num_products) {
  if (const auto* l1 = std::get_if<L1Set>(&set)) {
    if (!(l1->theta >= 0.0) || !std::isfinite(l1->theta)) {
      return absl::InvalidArgumentError("theta must be finite and nonnegative");
    }
    return CheckShape(l1->u0, num_products, "L1 center");
  }
  if (const auto* b = std::get_if<DiscreteBudgetSet>(&set)) {
    if (b->gamma_budget < 0) {
      return absl::InvalidArgumentError("budget Gamma must be nonnegative");
    }
    if (absl::Status s = CheckShape(b->u0, num_products, "budget nominal");
        !s.ok()) {
      return s;
    }
    if (absl::Status s = CheckShape(b->u_hi, num_products, "upper bound");
        !s.ok()) {
      return s;
    }
    return CheckShape(b->u_lo, num_products, "lower bound");
  }
  const auto& e = std::get<ExplicitSet>(set);
  if (e.members.empty()) {
    return absl::InvalidArgumentError("explicit set has no members");
  }
  for (const ParamVector& m : e.members) {
    if (absl::Status s = CheckShape(m, num_products, "explicit member");
        !s.ok()) {
      return s;
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<bool> Contains(const UncertaintySet& set, const ParamVector& u,
                              double tol) {
  int n = 0;
  if (const auto* l1 = std::get_if<L1Set>(&set)) {
    n = l1->u0.num_products();
  } else if (const auto* b = std::get_if<DiscreteBudgetSet>(&set)) {
    n = b->u0.num_products();
  } else {
    n = std::get<ExplicitSet>(set).members.front().num_products();
  }
  if (absl::Status s = CheckShape(u, n, "parameter vector"); !s.ok()) return s;
  const std::vector<double> x = u.Flatten();

  if (const auto* l1 = std::get_if<L1Set>(&set)) {
    const std::vector<double> c = l1->u0.Flatten();
    double norm = 0.0;
    for (size_t k = 0; k < c.size(); ++k) {
      if (c[k] == 0.0) {
        if (std::abs(x[k]) > tol) return false;
      } else {
        norm += std::abs((x[k] - c[k]) / c[k]);
      }
    }
    return norm <= l1->theta + tol;
  }
  if (const auto* b = std::get_if<DiscreteBudgetSet>(&set)) {
    const std::vector<double> c = b->u0.Flatten();
    const std::vector<double> hi = b->u_hi.Flatten();
    const std::vector<double> lo = b->u_lo.Flatten();
    int flips = 0;
    for (size_t k = 0; k < c.size(); ++k) {
      if (std::abs(x[k] - c[k]) <= tol) continue;
      if (std::abs(x[k] - hi[k]) <= tol || std::abs(x[k] - lo[k]) <= tol) {
        ++flips;
      } else {
        return false;
      }
    }
    return flips <= b->gamma_budget;
  }
  for (const ParamVector& m : std::get<ExplicitSet>(set).members) {
    if (m.family_override != u.family_override) continue;
    const std::vector<double> y = m.Flatten();
    bool same = true;
    for (size_t k = 0; k < y.size() && same; ++k) {
      same = std::abs(x[k] - y[k]) <= tol;
    }
    if (same) return true;
  }
  return false;
}

DiscreteBudgetSet BudgetFromMultipliers(const ParamVector& u0, int gamma_budget,
                                        const BlockMultipliers& hi,
                                        const BlockMultipliers& lo) {
  auto scaled = [&u0](const BlockMultipliers& m) {
    ParamVector u = u0;
    for (double& v : u.alpha) v *= m.alpha;
    for (double& v : u.beta) v *= m.beta;
    for (double& v : u.gamma) v *= m.gamma;
    return u;
  };
  return DiscreteBudgetSet{gamma_budget, u0, scaled(hi), scaled(lo)};
}

double Cardinality(const DiscreteBudgetSet& set) {
  const int d = set.u0.dimension();
  const int top = std::min(d, set.gamma_budget);
  double total = 0.0, binom = 1.0, pow2 = 1.0;
  for (int k = 0; k <= top; ++k) {
    total += binom * pow2;
    binom = binom * (d - k) / (k + 1);
    pow2 *= 2.0;
  }
  return total;
}

absl::StatusOr<std::vector<ParamVector>> EnumerateDiscrete(
    const DiscreteBudgetSet& set, int64_t cap) {
  const double card = Cardinality(set);
  if (card > static_cast<double>(cap)) {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "discrete set has %.0f members, above the cap of %d", card, cap));
  }
  const int d = set.u0.dimension();
  const int top = std::min(d, set.gamma_budget);
  const std::vector<double> hi = set.u_hi.Flatten();
  const std::vector<double> lo = set.u_lo.Flatten();
  std::vector<ParamVector> out;
  out.reserve(static_cast<size_t>(card));
  for (int k = 0; k <= top; ++k) {
    // Positions in lexicographic order.
    std::vector<int> pos(k);
    for (int i = 0; i < k; ++i) pos[i] = i;
    while (true) {
      // Sides: bit (k-1-i) of mask set means position i takes the lower
      // bound, so the upper bound comes first at every position.
      for (uint64_t mask = 0; mask < (uint64_t{1} << k); ++mask) {
        ParamVector u = set.u0;
        for (int i = 0; i < k; ++i) {
          const bool lower = (mask >> (k - 1 - i)) & 1;
          u.Set(pos[i], lower ? lo[pos[i]] : hi[pos[i]]);
        }
        out.push_back(std::move(u));
      }
      int i = k - 1;
      while (i >= 0 && pos[i] == d - k + i) --i;
      if (i < 0) break;
      ++pos[i];
      for (int j = i + 1; j < k; ++j) pos[j] = pos[j - 1] + 1;
    }
  }
  return out;
}

absl::StatusOr<std::vector<ParamVector>> EnumerateDiscrete(
    const ExplicitSet& set, int64_t cap) {
  if (static_cast<int64_t>(set.members.size()) > cap) {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "explicit set has %d members, above the cap of %d", set.members.size(),
        cap));
  }
  return set.members;
}

absl::StatusOr<std::vector<ParamVector>> EnumerateDiscrete(
    const UncertaintySet& set, int64_t cap) {
  if (const auto* b = std::get_if<DiscreteBudgetSet>(&set)) {
    return EnumerateDiscrete(*b, cap);
  }
  if (const auto* e = std::get_if<ExplicitSet>(&set)) {
    return EnumerateDiscrete(*e, cap);
  }
  return absl::InvalidArgumentError("an L1 set cannot be enumerated");
}

absl::StatusOr<L1LinearMin> LinearMinOverL1(const L1Set& set,
                                            absl::Span<const double> grad) {
  const std::vector<double> c = set.u0.Flatten();
  if (grad.size() != c.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "dimension mismatch: gradient has %d entries, set has %d", grad.size(),
        c.size()));
  }
  L1LinearMin out{set.u0, 0.0};
  int best = -1;
  double best_abs = 0.0;
  for (size_t k = 0; k < c.size(); ++k) {
    const double s = std::abs(grad[k] * c[k]);
    if (s > best_abs) {
      best_abs = s;
      best = static_cast<int>(k);
    }
  }
  if (best < 0 || set.theta == 0.0) return out;
  const double sign = grad[best] * c[best] > 0.0 ? 1.0 : -1.0;
  out.u_star.Set(best, c[best] * (1.0 - sign * set.theta));
  out.value_shift = -set.theta * best_abs;
  return out;
}

LinearConstraintBlock L1AsLinearConstraints(const L1Set& set) {
  const std::vector<double> c = set.u0.Flatten();
  const int d = static_cast<int>(c.size());
  LinearConstraintBlock block;
  block.num_vars = 2 * d;
  block.lower.assign(2 * d, -kInfinity);
  block.upper.assign(2 * d, kInfinity);
  std::vector<double> budget(2 * d, 0.0);
  for (int k = 0; k < d; ++k) {
    if (c[k] == 0.0) {
      std::vector<double> pin(2 * d, 0.0);
      pin[k] = 1.0;
      block.rows.push_back({std::move(pin), Relation::kEq, 0.0});
      block.lower[d + k] = 0.0;
      block.upper[d + k] = 0.0;
      continue;
    }
    block.lower[d + k] = 0.0;
    // u_k / u0_k - s_k <= 1 and -u_k / u0_k - s_k <= -1.
    std::vector<double> up(2 * d, 0.0), down(2 * d, 0.0);
    up[k] = 1.0 / c[k];
    up[d + k] = -1.0;
    down[k] = -1.0 / c[k];
    down[d + k] = -1.0;
    block.rows.push_back({std::move(up), Relation::kLe, 1.0});
    block.rows.push_back({std::move(down), Relation::kLe, -1.0});
    budget[d + k] = 1.0;
  }
  block.rows.push_back({std::move(budget), Relation::kLe, set.theta});
  return block;
}

}  // namespace rrpo
