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

// Dense two-phase primal simplex with bounded variables.
//
// The solver keeps an explicit basis inverse, refactorized periodically, and
// supports appending columns to a solved model: the previous basis stays
// primal feasible, so re-solving continues from it. That is the access
// pattern of cutting-plane masters written in dual form.
//
// Pricing is Dantzig's rule with lowest-index tie-breaking. After a run of
// degenerate pivots the solver switches to Bland's rule until progress
// resumes, which rules out cycling. All choices are deterministic.
//
// Duals are shadow prices: dual_i = d(optimal value) / d(rhs_i). Hence a <=
// row of a maximization, or a >= row of a minimization, has a nonnegative
// dual.

#ifndef RRPO_LP_SOLVER_H_
#define RRPO_LP_SOLVER_H_

#include <limits>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"

namespace rrpo {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { kMin, kMax };
enum class Relation { kLe, kGe, kEq };

struct LinearRow {
  std::vector<double> coeffs;
  Relation relation = Relation::kLe;
  double rhs = 0.0;
};

struct LinearProgram {
  Sense sense = Sense::kMin;
  std::vector<double> objective;
  std::vector<LinearRow> rows;
  std::vector<double> lower;
  std::vector<double> upper;

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }
  // Appends a variable with zero coefficients in every existing row.
  int AddVariable(double cost, double lo, double hi);
  // Coefficients may be shorter than num_vars(); missing entries are zero.
  int AddRow(std::vector<double> coeffs, Relation relation, double rhs);
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  std::vector<double> duals;
  double value = 0.0;
  int iterations = 0;
};

struct LpOptions {
  double feasibility_tol = 1e-8;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-11;
  // Zero selects a size-based default.
  int max_iterations = 0;
};

// Solves `lp`. Infeasible and unbounded problems are reported through the
// solution status; an error status signals numerical failure.
absl::StatusOr<LpSolution> SolveLp(const LinearProgram& lp,
                                   const LpOptions& options = {});

// A model with a fixed set of rows to which columns may be appended between
// solves.
class SimplexModel {
 public:
  SimplexModel(Sense sense, std::vector<Relation> relations,
               std::vector<double> rhs, LpOptions options = {});

  // `column` holds one coefficient per row.
  int AddColumn(double cost, double lo, double hi,
                absl::Span<const double> column);

  int num_rows() const { return m_; }
  int num_columns() const { return static_cast<int>(cols_.size()); }

  absl::StatusOr<LpSolution> Solve();

 private:
  enum class VarState { kBasic, kAtLower, kAtUpper, kFreeZero };

  // Internal variables: slacks [0, m), artificials [m, 2m), then structural
  // columns in insertion order.
  int NumVars() const { return 2 * m_ + num_columns(); }
  int StructuralIndex(int j) const { return 2 * m_ + j; }
  // y . a_j for internal variable j.
  double DotColumn(const std::vector<double>& y, int j) const;
  // out = B^{-1} a_j.
  void FtranColumn(int j, std::vector<double>& out) const;

  void ColdStart();
  bool Refactor();
  void RecomputeBasics();
  bool BasisFeasible() const;
  double NonbasicValue(int j) const;
  // Runs simplex iterations against cost vector `cost`. Returns false on
  // numerical failure; sets *unbounded when a ray was found.
  absl::Status Iterate(const std::vector<double>& cost, bool* unbounded);
  void DriveOutArtificials();

  Sense sense_;
  int m_;
  std::vector<Relation> relations_;
  std::vector<double> rhs_;
  LpOptions options_;

  std::vector<std::vector<double>> cols_;
  std::vector<double> cost_;
  std::vector<double> lo_;  // internal bounds for every variable
  std::vector<double> hi_;
  std::vector<double> art_sign_;

  std::vector<int> head_;  // basic variable of each row position
  std::vector<VarState> state_;
  std::vector<double> x_;
  std::vector<double> binv_;  // m x m, row-major
  bool has_basis_ = false;
  int pivots_since_refactor_ = 0;
  int total_iterations_ = 0;
};

}  // namespace rrpo

#endif  // RRPO_LP_SOLVER_H_
