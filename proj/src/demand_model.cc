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
#include <cstddef>

#include "absl/strings/str_format.h"

namespace rrpo {
namespace {

// x_j: the price itself, or its logarithm for log-log demand.
inline double Transformed(DemandFamily family, double price) {
  return family == DemandFamily::kLogLog ? std::log(price) : price;
}

// Fills e_i (the affine term of product i) and x_j.
void Exponents(DemandFamily family, absl::Span<const double> prices,
               const ParamVector& u, double* x, double* e) {
  const int n = static_cast<int>(prices.size());
  for (int j = 0; j < n; ++j) x[j] = Transformed(family, prices[j]);
  for (int i = 0; i < n; ++i) {
    double v = u.alpha[i] - u.beta[i] * x[i];
    const double* row = &u.gamma[static_cast<size_t>(i) * n];
    for (int j = 0; j < n; ++j) {
      if (j != i) v += row[j] * x[j];
    }
    e[i] = v;
  }
}

}  // namespace

std::string_view FamilyName(DemandFamily family) {
  switch (family) {
    case DemandFamily::kLinear:
      return "linear";
    case DemandFamily::kSemiLog:
      return "semilog";
    case DemandFamily::kLogLog:
      return "loglog";
  }
  return "unknown";
}

absl::StatusOr<DemandFamily> ParseFamily(std::string_view name) {
  if (name == "linear") return DemandFamily::kLinear;
  if (name == "semilog") return DemandFamily::kSemiLog;
  if (name == "loglog") return DemandFamily::kLogLog;
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown demand family \"%s\"", std::string(name)));
}

ParamVector ParamVector::Zero(int num_products) {
  ParamVector u;
  u.alpha.assign(num_products, 0.0);
  u.beta.assign(num_products, 0.0);
  u.gamma.assign(static_cast<size_t>(num_products) * num_products, 0.0);
  return u;
}

std::vector<double> ParamVector::Flatten() const {
  const int n = num_products();
  std::vector<double> flat;
  flat.reserve(dimension());
  flat.insert(flat.end(), alpha.begin(), alpha.end());
  flat.insert(flat.end(), beta.begin(), beta.end());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j != i) flat.push_back(gamma_at(i, j));
    }
  }
  return flat;
}

absl::StatusOr<ParamVector> ParamVector::Unflatten(
    int num_products, absl::Span<const double> flat) {
  if (num_products < 1 ||
      static_cast<int>(flat.size()) != ParamDimension(num_products)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "dimension mismatch: %d coordinates for %d products", flat.size(),
        num_products));
  }
  ParamVector u = Zero(num_products);
  for (int k = 0; k < static_cast<int>(flat.size()); ++k) u.Set(k, flat[k]);
  return u;
}

CoordinateRole RoleOf(int num_products, int k) {
  const int n = num_products;
  if (k < n) return {CoordinateRole::kAlpha, k, k};
  if (k < 2 * n) return {CoordinateRole::kBeta, k - n, k - n};
  const int idx = k - 2 * n;
  const int i = idx / (n - 1);
  const int r = idx % (n - 1);
  return {CoordinateRole::kGamma, i, r < i ? r : r + 1};
}

double ParamVector::Get(int k) const {
  const CoordinateRole role = RoleOf(num_products(), k);
  switch (role.kind) {
    case CoordinateRole::kAlpha:
      return alpha[role.product];
    case CoordinateRole::kBeta:
      return beta[role.product];
    case CoordinateRole::kGamma:
      return gamma_at(role.product, role.partner);
  }
  return 0.0;
}

void ParamVector::Set(int k, double value) {
  const CoordinateRole role = RoleOf(num_products(), k);
  switch (role.kind) {
    case CoordinateRole::kAlpha:
      alpha[role.product] = value;
      break;
    case CoordinateRole::kBeta:
      beta[role.product] = value;
      break;
    case CoordinateRole::kGamma:
      gamma_at(role.product, role.partner) = value;
      break;
  }
}

double Instance::NumPriceVectors() const {
  double count = 1.0;
  for (const auto& grid : grids) count *= static_cast<double>(grid.size());
  return count;
}

std::vector<double> Instance::Prices(const PriceVector& p) const {
  std::vector<double> prices(grids.size());
  for (size_t i = 0; i < grids.size(); ++i) prices[i] = grids[i][p.levels[i]];
  return prices;
}

absl::Status Instance::Validate() const {
  if (grids.empty()) {
    return absl::InvalidArgumentError("instance has no products");
  }
  for (size_t i = 0; i < grids.size(); ++i) {
    const auto& grid = grids[i];
    if (grid.empty()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("price grid of product %d is empty", i + 1));
    }
    for (size_t t = 0; t < grid.size(); ++t) {
      if (!(grid[t] > 0.0) || !std::isfinite(grid[t])) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "price grid of product %d has nonpositive level %g", i + 1,
            grid[t]));
      }
      if (t > 0 && !(grid[t] > grid[t - 1])) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "price grid of product %d is not strictly increasing", i + 1));
      }
    }
  }
  return ValidateParams(u0);
}

absl::Status Instance::ValidatePrice(const PriceVector& p) const {
  if (p.levels.size() != grids.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "dimension mismatch: price vector has %d levels for %d products",
        p.levels.size(), grids.size()));
  }
  for (size_t i = 0; i < grids.size(); ++i) {
    if (p.levels[i] < 0 || p.levels[i] >= static_cast<int>(grids[i].size())) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "price level %d of product %d is off the grid", p.levels[i], i + 1));
    }
  }
  return absl::OkStatus();
}

absl::Status Instance::ValidateParams(const ParamVector& u) const {
  const size_t n = grids.size();
  if (u.alpha.size() != n || u.beta.size() != n || u.gamma.size() != n * n) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "dimension mismatch: parameter vector does not match %d products", n));
  }
  for (size_t i = 0; i < n; ++i) {
    if (u.gamma[i * n + i] != 0.0) {
      return absl::InvalidArgumentError(
          absl::StrFormat("gamma diagonal entry %d is nonzero", i + 1));
    }
  }
  return absl::OkStatus();
}

namespace {

absl::Status CheckInputs(const Instance& instance, const PriceVector& p,
                         const ParamVector& u) {
  if (absl::Status s = instance.ValidatePrice(p); !s.ok()) return s;
  if (EffectiveFamily(instance, u) == DemandFamily::kLogLog) {
    for (size_t i = 0; i < p.levels.size(); ++i) {
      if (!(instance.grids[i][p.levels[i]] > 0.0)) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "nonpositive price for product %d under log-log demand", i + 1));
      }
    }
  }
  return instance.ValidateParams(u);
}

}  // namespace

void DemandAt(DemandFamily family, absl::Span<const double> prices,
              const ParamVector& u, absl::Span<double> demand) {
  const int n = static_cast<int>(prices.size());
  std::vector<double> x(n);
  Exponents(family, prices, u, x.data(), demand.data());
  if (family != DemandFamily::kLinear) {
    for (int i = 0; i < n; ++i) demand[i] = std::exp(demand[i]);
  }
}

double RevenueAt(DemandFamily family, absl::Span<const double> prices,
                 const ParamVector& u) {
  std::vector<double> d(prices.size());
  DemandAt(family, prices, u, absl::MakeSpan(d));
  double r = 0.0;
  for (size_t i = 0; i < prices.size(); ++i) r += prices[i] * d[i];
  return r;
}

void RevenueGradientAt(DemandFamily family, absl::Span<const double> prices,
                       const ParamVector& u, absl::Span<double> gradient) {
  const int n = static_cast<int>(prices.size());
  std::vector<double> x(n), e(n);
  Exponents(family, prices, u, x.data(), e.data());
  // w_i = dR/de_i: p_i for linear demand, p_i d_i otherwise.
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) {
    w[i] = family == DemandFamily::kLinear ? prices[i]
                                           : prices[i] * std::exp(e[i]);
  }
  int k = 0;
  for (int i = 0; i < n; ++i) gradient[k++] = w[i];
  for (int i = 0; i < n; ++i) gradient[k++] = -w[i] * x[i];
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j != i) gradient[k++] = w[i] * x[j];
    }
  }
}

absl::StatusOr<std::vector<double>> Demand(const Instance& instance,
                                           const PriceVector& p,
                                           const ParamVector& u) {
  if (absl::Status s = CheckInputs(instance, p, u); !s.ok()) return s;
  const std::vector<double> prices = instance.Prices(p);
  std::vector<double> d(prices.size());
  DemandAt(EffectiveFamily(instance, u), prices, u, absl::MakeSpan(d));
  return d;
}

absl::StatusOr<double> Revenue(const Instance& instance, const PriceVector& p,
                               const ParamVector& u) {
  if (absl::Status s = CheckInputs(instance, p, u); !s.ok()) return s;
  return RevenueAt(EffectiveFamily(instance, u), instance.Prices(p), u);
}

absl::StatusOr<std::vector<double>> RevenueGradient(const Instance& instance,
                                                    const PriceVector& p,
                                                    const ParamVector& u) {
  if (absl::Status s = CheckInputs(instance, p, u); !s.ok()) return s;
  std::vector<double> g(u.dimension());
  RevenueGradientAt(EffectiveFamily(instance, u), instance.Prices(p), u,
                    absl::MakeSpan(g));
  return g;
}

}  // namespace rrpo
