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

// Demand and revenue models for multi-product pricing.
//
// A parameter vector u = (alpha, beta, gamma) drives one of three families:
//
//   linear:   d_i = alpha_i - beta_i p_i + sum_{j != i} gamma_ij p_j
//   semi-log: d_i = exp(alpha_i - beta_i p_i + sum_{j != i} gamma_ij p_j)
//   log-log:  d_i = exp(alpha_i - beta_i log p_i + sum_{j != i} gamma_ij log p_j)
//
// and revenue is R(p, u) = sum_i p_i d_i. Writing x_j = p_j (linear, semi-log)
// or x_j = log p_j (log-log), every family shares the exponent/affine term
// e_i = alpha_i - beta_i x_i + sum_{j != i} gamma_ij x_j.

#ifndef RRPO_DEMAND_MODEL_H_
#define RRPO_DEMAND_MODEL_H_

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/types/span.h"

namespace rrpo {

enum class DemandFamily { kLinear, kSemiLog, kLogLog };

// Serialized names: "linear", "semilog", "loglog".
std::string_view FamilyName(DemandFamily family);
absl::StatusOr<DemandFamily> ParseFamily(std::string_view name);

// Number of flattened uncertain coordinates, I + I^2.
inline int ParamDimension(int num_products) {
  return num_products + num_products * num_products;
}

// Uncertain demand parameters. gamma is a full I x I row-major matrix whose
// diagonal must be exactly zero.
//
// Flattened order: alpha_0..alpha_{I-1}, beta_0..beta_{I-1}, then gamma_ij
// row-major over i, skipping j == i.
struct ParamVector {
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> gamma;
  // Set only for members of explicit scenario sets that mix families.
  std::optional<DemandFamily> family_override;

  static ParamVector Zero(int num_products);

  int num_products() const { return static_cast<int>(alpha.size()); }
  int dimension() const { return ParamDimension(num_products()); }
  double gamma_at(int i, int j) const { return gamma[i * num_products() + j]; }
  double& gamma_at(int i, int j) { return gamma[i * num_products() + j]; }

  std::vector<double> Flatten() const;
  static absl::StatusOr<ParamVector> Unflatten(int num_products,
                                               absl::Span<const double> flat);

  // Coordinate access in flattened order.
  double Get(int k) const;
  void Set(int k, double value);

  bool operator==(const ParamVector& other) const = default;
};

// Where flattened coordinate k enters the model: it belongs to the term of
// `product`. Its derivative of e_product is 1 (alpha), -x_product (beta) or
// x_partner (gamma).
struct CoordinateRole {
  enum Kind { kAlpha, kBeta, kGamma } kind;
  int product;
  int partner;  // gamma column j; equals product otherwise
};
CoordinateRole RoleOf(int num_products, int k);

// Per-product grid indices.
struct PriceVector {
  std::vector<int> levels;
  auto operator<=>(const PriceVector& other) const = default;
};

struct Instance {
  DemandFamily family = DemandFamily::kLinear;
  // Strictly increasing positive price levels per product.
  std::vector<std::vector<double>> grids;
  ParamVector u0;

  int num_products() const { return static_cast<int>(grids.size()); }
  // Product of grid sizes, as a double so huge grids do not overflow.
  double NumPriceVectors() const;
  std::vector<double> Prices(const PriceVector& p) const;

  absl::Status Validate() const;
  absl::Status ValidatePrice(const PriceVector& p) const;
  absl::Status ValidateParams(const ParamVector& u) const;
};

// Family used when evaluating `u` on `instance`.
inline DemandFamily EffectiveFamily(const Instance& instance,
                                    const ParamVector& u) {
  return u.family_override.value_or(instance.family);
}

absl::StatusOr<std::vector<double>> Demand(const Instance& instance,
                                           const PriceVector& p,
                                           const ParamVector& u);
absl::StatusOr<double> Revenue(const Instance& instance, const PriceVector& p,
                               const ParamVector& u);
// Gradient of R(p, .) at u in flattened coordinate order.
absl::StatusOr<std::vector<double>> RevenueGradient(const Instance& instance,
                                                    const PriceVector& p,
                                                    const ParamVector& u);

// Unchecked kernels on resolved prices. Callers validate dimensions and
// positivity once up front.
void DemandAt(DemandFamily family, absl::Span<const double> prices,
              const ParamVector& u, absl::Span<double> demand);
double RevenueAt(DemandFamily family, absl::Span<const double> prices,
                 const ParamVector& u);
void RevenueGradientAt(DemandFamily family, absl::Span<const double> prices,
                       const ParamVector& u, absl::Span<double> gradient);

}  // namespace rrpo

#endif  // RRPO_DEMAND_MODEL_H_
