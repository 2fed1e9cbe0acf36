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

#include "rrpo/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <variant>
#include <vector>

#include "Eigen/Dense"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "rrpo/rrpo_convex.h"
#include "rrpo/rrpo_discrete.h"
#include "rrpo/status_macros.h"

namespace rrpo {
namespace {

double Scale(double v) { return std::max(1.0, std::abs(v)); }

// u0 and the single-coordinate extremes of an L1 set, or every member of a
// finite set.
absl::StatusOr<std::vector<ParamVector>> CheckPoints(const UncertaintySet& set) {
  if (const auto* l1 = std::get_if<L1Set>(&set)) {
    std::vector<ParamVector> out{l1->u0};
    for (int k = 0; k < l1->u0.dimension(); ++k) {
      const double c = l1->u0.Get(k);
      if (c == 0.0 || l1->theta == 0.0) continue;
      for (double s : {1.0, -1.0}) {
        ParamVector u = l1->u0;
        u.Set(k, c * (1.0 + s * l1->theta));
        out.push_back(std::move(u));
      }
    }
    return out;
  }
  return EnumerateDiscrete(set);
}

// Smallest eigenvalue of the symmetric part of diag(beta) - offdiag(gamma).
double MinSymmetrizedEigenvalue(const ParamVector& u) {
  const int n = u.num_products();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m(i, j) = i == j ? u.beta[i] : -u.gamma_at(i, j);
    }
  }
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

struct RobustPoint {
  DrpoResult drpo;
  double saddle_gap = 0.0;
  PriceVector best_response;
  double best_response_value = 0.0;
};

absl::StatusOr<RobustPoint> SolveRobustPoint(const Instance& instance,
                                             const UncertaintySet& set) {
  RobustPoint out;
  if (const auto* l1 = std::get_if<L1Set>(&set)) {
    ASSIGN_OR_RETURN(out.drpo,
                     SolveDrpoConvex(instance, *l1, PricingMethod::Enumerate()));
  } else {
    ASSIGN_OR_RETURN(out.drpo, SolveDrpoDiscrete(instance, set,
                                                 PricingMethod::Enumerate()));
  }
  ASSIGN_OR_RETURN(PricingResult br, NominalPriceOpt(instance, out.drpo.u_wc,
                                                     PricingMethod::Enumerate()));
  ASSIGN_OR_RETURN(const double at_dr,
                   Revenue(instance, out.drpo.p_dr, out.drpo.u_wc));
  out.best_response = br.p_star;
  out.best_response_value = br.value;
  out.saddle_gap = br.value - at_dr;
  return out;
}

absl::StatusOr<WorstCaseResult> PolicyWorstCase(const Instance& instance,
                                                const RandomizedPolicy& policy,
                                                const UncertaintySet& set) {
  if (const auto* l1 = std::get_if<L1Set>(&set)) {
    return WorstCaseConvex(instance, policy, *l1);
  }
  return WorstCaseDiscrete(instance, policy, set, DiscreteMethod::Enumerate());
}

// Best worst case over (1 - w) p_dr + w p_alt for w = 2^-1 .. 2^-40, as a
// guaranteed lower bound.
absl::StatusOr<std::pair<double, double>> BestMixingWitness(
    const Instance& instance, const UncertaintySet& set,
    const PriceVector& p_dr, const PriceVector& p_alt) {
  double best = -std::numeric_limits<double>::infinity(), best_w = 0.0;
  double w = 1.0;
  for (int k = 1; k <= 40; ++k) {
    w *= 0.5;
    const RandomizedPolicy mix = MakePolicy({{p_dr, 1.0 - w}, {p_alt, w}});
    ASSIGN_OR_RETURN(WorstCaseResult wc, PolicyWorstCase(instance, mix, set));
    const double guaranteed = wc.value - wc.gap;
    if (guaranteed > best) {
      best = guaranteed;
      best_w = w;
    }
  }
  return std::make_pair(best, best_w);
}

}  // namespace

std::string_view VerdictName(Verdict verdict) {
  switch (verdict) {
    case Verdict::kProofCertified:
      return "ProofCertified";
    case Verdict::kReceptiveCertified:
      return "ReceptiveCertified";
    case Verdict::kInconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

absl::StatusOr<ProofnessReport> CheckProofnessConditions(
    const Instance& instance, const UncertaintySet& set, double tol) {
  RETURN_IF_ERROR(instance.Validate());
  RETURN_IF_ERROR(ValidateSet(set, instance.num_products()));
  ASSIGN_OR_RETURN(std::vector<ParamVector> points, CheckPoints(set));
  ProofnessReport report;
  const int n = instance.num_products();
  for (const ParamVector& u : points) {
    if (EffectiveFamily(instance, u) != instance.family) {
      report.notes = "set mixes demand families; no sufficient condition applies";
      return report;
    }
  }

  bool condition = false;
  const std::vector<double>& grid0 = instance.grids[0];
  switch (instance.family) {
    case DemandFamily::kLinear: {
      double lowest = std::numeric_limits<double>::infinity();
      for (const ParamVector& u : points) {
        lowest = std::min(lowest, MinSymmetrizedEigenvalue(u));
      }
      condition = lowest >= 0.0;
      report.evidence.push_back(
          {n == 1 ? "min beta" : "min symmetrized eigenvalue", lowest, condition});
      if (n > 1) {
        absl::StrAppend(&report.notes,
                        "concave revenue check on (M+M')/2 with "
                        "M = diag(beta) - offdiag(gamma); the smallest "
                        "eigenvalue is concave in u, so set extremes suffice. ");
      }
      break;
    }
    case DemandFamily::kSemiLog: {
      if (n > 1) break;
      double sup = -std::numeric_limits<double>::infinity();
      for (const ParamVector& u : points) {
        sup = std::max({sup, u.beta[0] * grid0.front(), u.beta[0] * grid0.back()});
      }
      condition = sup - 2.0 <= 0.0;
      report.evidence.push_back({"sup beta*p - 2", sup - 2.0, condition});
      break;
    }
    case DemandFamily::kLogLog: {
      if (n > 1) break;
      double sup = -std::numeric_limits<double>::infinity();
      for (const ParamVector& u : points) sup = std::max(sup, u.beta[0]);
      condition = sup - 1.0 <= 0.0;
      report.evidence.push_back({"sup beta - 1", sup - 1.0, condition});
      break;
    }
  }
  if (report.evidence.empty()) {
    report.notes =
        "no sufficient condition for multi-product exponential demand";
    return report;
  }
  if (!condition) {
    absl::StrAppend(&report.notes,
                    "sufficient condition fails; receptiveness is not implied.");
    return report;
  }
  ASSIGN_OR_RETURN(RobustPoint rp, SolveRobustPoint(instance, set));
  const bool saddle = rp.saddle_gap <= tol * Scale(rp.drpo.z_dr);
  report.evidence.push_back({"grid saddle gap", rp.saddle_gap, saddle});
  if (saddle) {
    report.verdict = Verdict::kProofCertified;
    absl::StrAppend(&report.notes,
                    "condition holds and the robust price is a best response "
                    "to its worst case.");
  } else {
    absl::StrAppend(&report.notes,
                    "condition holds but the finite price grid has no saddle "
                    "point at the robust price.");
  }
  return report;
}

absl::StatusOr<ProofnessReport> CheckCorollary2(const Instance& instance,
                                                const UncertaintySet& set,
                                                double tol) {
  RETURN_IF_ERROR(instance.Validate());
  RETURN_IF_ERROR(ValidateSet(set, instance.num_products()));
  ASSIGN_OR_RETURN(RobustPoint rp, SolveRobustPoint(instance, set));
  ProofnessReport report;
  const double z_dr = rp.drpo.z_dr;
  report.evidence.push_back({"z_dr", z_dr, true});

  if (IsFinite(set)) {
    ASSIGN_OR_RETURN(std::vector<ParamVector> members, EnumerateDiscrete(set));
    std::vector<const ParamVector*> minimizers;
    for (const ParamVector& u : members) {
      ASSIGN_OR_RETURN(const double v, Revenue(instance, rp.drpo.p_dr, u));
      if (v <= z_dr + tol &&
          std::none_of(minimizers.begin(), minimizers.end(),
                       [&u](const ParamVector* m) { return *m == u; })) {
        minimizers.push_back(&u);
      }
    }
    report.evidence.push_back(
        {"worst-case minimizers", static_cast<double>(minimizers.size()),
         minimizers.size() == 1});
    if (minimizers.size() != 1) {
      // Any minimizer at which the robust price is a best response still
      // proves that randomizing cannot help.
      for (const ParamVector* u : minimizers) {
        ASSIGN_OR_RETURN(PricingResult br,
                         NominalPriceOpt(instance, *u, PricingMethod::Enumerate()));
        if (br.value <= z_dr + tol) {
          report.verdict = Verdict::kProofCertified;
          report.notes = "robust price is a best response to a worst case.";
          return report;
        }
      }
      report.notes = absl::StrFormat(
          "the worst case of the robust price is not unique (%d minimizers); "
          "uniqueness is required.",
          static_cast<int>(minimizers.size()));
      return report;
    }
    rp.drpo.u_wc = *minimizers.front();
    ASSIGN_OR_RETURN(PricingResult br,
                     NominalPriceOpt(instance, rp.drpo.u_wc,
                                     PricingMethod::Enumerate()));
    rp.best_response = br.p_star;
    rp.saddle_gap = br.value - z_dr;
  }

  const bool in_argmax = rp.saddle_gap <= tol;
  report.evidence.push_back({"best response gap at worst case", rp.saddle_gap,
                             in_argmax});
  if (in_argmax) {
    report.verdict = Verdict::kProofCertified;
    report.notes = "robust price is a best response to its worst case.";
    return report;
  }
  ASSIGN_OR_RETURN(auto witness, BestMixingWitness(instance, set, rp.drpo.p_dr,
                                                   rp.best_response));
  report.evidence.push_back({"two-point policy worst case", witness.first,
                             witness.first > z_dr + tol});
  report.evidence.push_back({"two-point policy weight", witness.second, true});
  if (witness.first > z_dr + tol) {
    report.verdict = Verdict::kReceptiveCertified;
    report.notes =
        "robust price is not a best response to its worst case; a two-point "
        "policy beats it.";
  } else {
    report.notes = IsFinite(set)
                       ? "no improving two-point policy found."
                       : "uniqueness over a convex set is not certified and no "
                         "improving two-point policy was found.";
  }
  return report;
}

absl::StatusOr<MinimaxGapResult> MinimaxGap(const Instance& instance,
                                            const UncertaintySet& set) {
  RETURN_IF_ERROR(instance.Validate());
  if (!IsFinite(set)) {
    return absl::InvalidArgumentError("minimax gap needs a finite set");
  }
  RETURN_IF_ERROR(ValidateSet(set, instance.num_products()));
  ASSIGN_OR_RETURN(std::vector<ParamVector> members, EnumerateDiscrete(set));
  ASSIGN_OR_RETURN(std::vector<PriceVector> prices, AllPriceVectors(instance));
  const double cells = static_cast<double>(members.size()) * prices.size();
  if (cells > kDefaultMatrixCap) {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "payoff matrix has %.0f cells, above the cap of %.0f", cells,
        kDefaultMatrixCap));
  }
  std::vector<std::vector<double>> payoff(
      prices.size(), std::vector<double>(members.size()));
  std::vector<double> col_max(members.size(),
                              -std::numeric_limits<double>::infinity());
  MinimaxGapResult out;
  out.maxmin = -std::numeric_limits<double>::infinity();
  for (size_t r = 0; r < prices.size(); ++r) {
    double row_min = std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < members.size(); ++c) {
      ASSIGN_OR_RETURN(const double v, Revenue(instance, prices[r], members[c]));
      payoff[r][c] = v;
      row_min = std::min(row_min, v);
      col_max[c] = std::max(col_max[c], v);
    }
    out.maxmin = std::max(out.maxmin, row_min);
  }
  out.minmax = *std::min_element(col_max.begin(), col_max.end());
  out.gap = out.minmax - out.maxmin;
  ASSIGN_OR_RETURN(MatrixGameSolution game, SolveMatrixGame(payoff));
  // The LP value can land a rounding error outside [maxmin, minmax].
  out.mixed_minmax = std::clamp(game.value, out.maxmin, out.minmax);
  out.mixed_gap = out.mixed_minmax - out.maxmin;
  return out;
}

double RelativeImprovement(double z_rr, double z_dr) {
  if (!(z_dr > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return 100.0 * (z_rr - z_dr) / z_dr;
}

absl::StatusOr<MetricsRow> ComputeMetrics(const Instance& instance,
                                          const UncertaintySet& set,
                                          double budget,
                                          const NominalOutcome& nominal,
                                          const DrpoResult& drpo,
                                          const RrpoOutcome& rrpo) {
  RETURN_IF_ERROR(instance.Validate());
  RETURN_IF_ERROR(ValidateSet(set, instance.num_products()));
  for (const PriceVector* p : {&nominal.result.p_star, &drpo.p_dr}) {
    if (absl::Status s = instance.ValidatePrice(*p); !s.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("inconsistent inputs: ", s.message()));
    }
  }
  if (absl::Status s = rrpo.policy.Validate(instance); !s.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("inconsistent inputs: ", s.message()));
  }
  MetricsRow row;
  row.num_products = instance.num_products();
  row.budget = budget;
  row.t_rr = rrpo.seconds;
  row.z_rr = rrpo.z_rr;
  row.e_r_rr_nominal = ExpectedRevenue(instance, rrpo.policy, instance.u0);
  row.t_dr = drpo.wall_seconds;
  row.z_dr = drpo.z_dr;
  row.ri_percent = RelativeImprovement(rrpo.z_rr, drpo.z_dr);
  ASSIGN_OR_RETURN(row.r_dr_nominal, Revenue(instance, drpo.p_dr, instance.u0));
  row.t_n = nominal.seconds;
  row.z_n = nominal.result.value;
  ASSIGN_OR_RETURN(
      WorstCaseResult wc,
      PolicyWorstCase(instance, RandomizedPolicy::PointMass(nominal.result.p_star),
                      set));
  row.z_n_wc = wc.value;
  row.certified =
      rrpo.certified && drpo.certified && nominal.result.certified;
  return row;
}

}  // namespace rrpo
