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
#include <cstddef>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace rrpo {
namespace {

// Entries of B^{-1} a_q below this magnitude are ignored by the ratio test.
constexpr double kRatioPivotTol = 1e-9;
constexpr int kRefactorInterval = 50;
// Consecutive degenerate pivots that trigger Bland's rule.
constexpr int kDegenerateRunForBland = 40;

}  // namespace

int LinearProgram::AddVariable(double cost, double lo, double hi) {
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(hi);
  for (LinearRow& row : rows) row.coeffs.resize(objective.size(), 0.0);
  return num_vars() - 1;
}

int LinearProgram::AddRow(std::vector<double> coeffs, Relation relation,
                          double rhs) {
  coeffs.resize(objective.size(), 0.0);
  rows.push_back({std::move(coeffs), relation, rhs});
  return num_rows() - 1;
}

SimplexModel::SimplexModel(Sense sense, std::vector<Relation> relations,
                           std::vector<double> rhs, LpOptions options)
    : sense_(sense),
      m_(static_cast<int>(rhs.size())),
      relations_(std::move(relations)),
      rhs_(std::move(rhs)),
      options_(options) {
  lo_.resize(2 * m_);
  hi_.resize(2 * m_);
  state_.resize(2 * m_);
  x_.assign(2 * m_, 0.0);
  art_sign_.assign(m_, 1.0);
  for (int i = 0; i < m_; ++i) {
    switch (relations_[i]) {
      case Relation::kLe:
        lo_[i] = 0.0;
        hi_[i] = kInfinity;
        state_[i] = VarState::kAtLower;
        break;
      case Relation::kGe:
        lo_[i] = -kInfinity;
        hi_[i] = 0.0;
        state_[i] = VarState::kAtUpper;
        break;
      case Relation::kEq:
        lo_[i] = 0.0;
        hi_[i] = 0.0;
        state_[i] = VarState::kAtLower;
        break;
    }
    lo_[m_ + i] = 0.0;
    hi_[m_ + i] = 0.0;
    state_[m_ + i] = VarState::kAtLower;
  }
}

int SimplexModel::AddColumn(double cost, double lo, double hi,
                            absl::Span<const double> column) {
  cols_.emplace_back(column.begin(), column.end());
  cols_.back().resize(m_, 0.0);
  cost_.push_back(cost);
  lo_.push_back(lo);
  hi_.push_back(hi);
  if (std::isfinite(lo)) {
    state_.push_back(VarState::kAtLower);
    x_.push_back(lo);
  } else if (std::isfinite(hi)) {
    state_.push_back(VarState::kAtUpper);
    x_.push_back(hi);
  } else {
    state_.push_back(VarState::kFreeZero);
    x_.push_back(0.0);
  }
  return num_columns() - 1;
}

double SimplexModel::DotColumn(const std::vector<double>& y, int j) const {
  if (j < m_) return y[j];
  if (j < 2 * m_) return art_sign_[j - m_] * y[j - m_];
  const std::vector<double>& a = cols_[j - 2 * m_];
  double s = 0.0;
  for (int i = 0; i < m_; ++i) s += y[i] * a[i];
  return s;
}

void SimplexModel::FtranColumn(int j, std::vector<double>& out) const {
  out.assign(m_, 0.0);
  if (j < 2 * m_) {
    const int i = j < m_ ? j : j - m_;
    const double sign = j < m_ ? 1.0 : art_sign_[i];
    for (int r = 0; r < m_; ++r) out[r] = sign * binv_[r * m_ + i];
    return;
  }
  const std::vector<double>& a = cols_[j - 2 * m_];
  for (int i = 0; i < m_; ++i) {
    if (a[i] == 0.0) continue;
    for (int r = 0; r < m_; ++r) out[r] += binv_[r * m_ + i] * a[i];
  }
}

double SimplexModel::NonbasicValue(int j) const {
  switch (state_[j]) {
    case VarState::kAtLower:
      return lo_[j];
    case VarState::kAtUpper:
      return hi_[j];
    default:
      return 0.0;
  }
}

void SimplexModel::ColdStart() {
  const int n = NumVars();
  for (int j = 0; j < n; ++j) {
    if (j >= m_ && j < 2 * m_) continue;
    if (std::isfinite(lo_[j])) {
      state_[j] = VarState::kAtLower;
    } else if (std::isfinite(hi_[j])) {
      state_[j] = VarState::kAtUpper;
    } else {
      state_[j] = VarState::kFreeZero;
    }
    x_[j] = NonbasicValue(j);
  }
  std::vector<double> residual = rhs_;
  for (int j = 0; j < n; ++j) {
    if (j >= m_ && j < 2 * m_) continue;
    if (x_[j] == 0.0) continue;
    if (j < m_) {
      residual[j] -= x_[j];
    } else {
      const std::vector<double>& a = cols_[j - 2 * m_];
      for (int i = 0; i < m_; ++i) residual[i] -= a[i] * x_[j];
    }
  }
  head_.resize(m_);
  binv_.assign(static_cast<size_t>(m_) * m_, 0.0);
  for (int i = 0; i < m_; ++i) {
    const int art = m_ + i;
    art_sign_[i] = residual[i] >= 0.0 ? 1.0 : -1.0;
    lo_[art] = 0.0;
    hi_[art] = kInfinity;
    state_[art] = VarState::kBasic;
    x_[art] = std::abs(residual[i]);
    head_[i] = art;
    binv_[static_cast<size_t>(i) * m_ + i] = art_sign_[i];
  }
  has_basis_ = true;
  pivots_since_refactor_ = 0;
}

bool SimplexModel::Refactor() {
  const int m = m_;
  // Gauss-Jordan on [B | I] with partial pivoting.
  std::vector<double> b(static_cast<size_t>(m) * m, 0.0);
  std::vector<double> unit;
  for (int r = 0; r < m; ++r) {
    const int j = head_[r];
    if (j < 2 * m) {
      const int i = j < m ? j : j - m;
      b[static_cast<size_t>(i) * m + r] = j < m ? 1.0 : art_sign_[i];
    } else {
      const std::vector<double>& a = cols_[j - 2 * m];
      for (int i = 0; i < m; ++i) b[static_cast<size_t>(i) * m + r] = a[i];
    }
  }
  std::vector<double> inv(static_cast<size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i) inv[static_cast<size_t>(i) * m + i] = 1.0;
  for (int c = 0; c < m; ++c) {
    int piv = c;
    double best = std::abs(b[static_cast<size_t>(c) * m + c]);
    for (int r = c + 1; r < m; ++r) {
      const double v = std::abs(b[static_cast<size_t>(r) * m + c]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best < options_.pivot_tol) return false;
    if (piv != c) {
      for (int k = 0; k < m; ++k) {
        std::swap(b[static_cast<size_t>(c) * m + k],
                  b[static_cast<size_t>(piv) * m + k]);
        std::swap(inv[static_cast<size_t>(c) * m + k],
                  inv[static_cast<size_t>(piv) * m + k]);
      }
    }
    const double d = b[static_cast<size_t>(c) * m + c];
    for (int k = 0; k < m; ++k) {
      b[static_cast<size_t>(c) * m + k] /= d;
      inv[static_cast<size_t>(c) * m + k] /= d;
    }
    for (int r = 0; r < m; ++r) {
      if (r == c) continue;
      const double f = b[static_cast<size_t>(r) * m + c];
      if (f == 0.0) continue;
      for (int k = 0; k < m; ++k) {
        b[static_cast<size_t>(r) * m + k] -= f * b[static_cast<size_t>(c) * m + k];
        inv[static_cast<size_t>(r) * m + k] -=
            f * inv[static_cast<size_t>(c) * m + k];
      }
    }
  }
  // Row r of the inverse of B (columns ordered by basis position) maps row
  // space to basis position r.
  binv_ = std::move(inv);
  pivots_since_refactor_ = 0;
  return true;
}

void SimplexModel::RecomputeBasics() {
  std::vector<double> residual = rhs_;
  const int n = NumVars();
  for (int j = 0; j < n; ++j) {
    if (state_[j] == VarState::kBasic) continue;
    x_[j] = NonbasicValue(j);
    if (x_[j] == 0.0) continue;
    if (j < m_) {
      residual[j] -= x_[j];
    } else if (j < 2 * m_) {
      residual[j - m_] -= art_sign_[j - m_] * x_[j];
    } else {
      const std::vector<double>& a = cols_[j - 2 * m_];
      for (int i = 0; i < m_; ++i) residual[i] -= a[i] * x_[j];
    }
  }
  for (int r = 0; r < m_; ++r) {
    double s = 0.0;
    for (int i = 0; i < m_; ++i) s += binv_[static_cast<size_t>(r) * m_ + i] * residual[i];
    x_[head_[r]] = s;
  }
}

bool SimplexModel::BasisFeasible() const {
  for (int r = 0; r < m_; ++r) {
    const int j = head_[r];
    const double tol = options_.feasibility_tol * (1.0 + std::abs(x_[j]));
    if (x_[j] < lo_[j] - tol || x_[j] > hi_[j] + tol) return false;
  }
  return true;
}

absl::Status SimplexModel::Iterate(const std::vector<double>& cost,
                                   bool* unbounded) {
  *unbounded = false;
  const int n = NumVars();
  const int max_iter = options_.max_iterations > 0
                           ? options_.max_iterations
                           : 200 * (m_ + n) + 10000;
  std::vector<double> y(m_), alpha(m_);
  int degenerate_run = 0;
  int failures = 0;
  for (int iter = 0;; ++iter) {
    if (iter > max_iter) {
      return absl::InternalError(absl::StrFormat(
          "numerical failure: simplex iteration limit %d reached", max_iter));
    }
    if (pivots_since_refactor_ >= kRefactorInterval) {
      if (!Refactor()) {
        return absl::InternalError("numerical failure: singular basis");
      }
      RecomputeBasics();
    }
    for (int i = 0; i < m_; ++i) {
      double s = 0.0;
      for (int r = 0; r < m_; ++r) {
        s += cost[head_[r]] * binv_[static_cast<size_t>(r) * m_ + i];
      }
      y[i] = s;
    }
    const bool bland = degenerate_run >= kDegenerateRunForBland;
    int q = -1;
    double q_d = 0.0;
    double best_score = 0.0;
    for (int j = 0; j < n; ++j) {
      const VarState st = state_[j];
      if (st == VarState::kBasic || lo_[j] == hi_[j]) continue;
      const double d = cost[j] - DotColumn(y, j);
      const bool up = (st == VarState::kAtLower || st == VarState::kFreeZero) &&
                      d < -options_.optimality_tol;
      const bool down =
          (st == VarState::kAtUpper || st == VarState::kFreeZero) &&
          d > options_.optimality_tol;
      if (!up && !down) continue;
      if (bland) {
        q = j;
        q_d = d;
        break;
      }
      if (std::abs(d) > best_score) {
        best_score = std::abs(d);
        q = j;
        q_d = d;
      }
    }
    if (q < 0) return absl::OkStatus();

    FtranColumn(q, alpha);
    const double dir = q_d < 0.0 ? 1.0 : -1.0;
    double flip = kInfinity;
    if (std::isfinite(lo_[q]) && std::isfinite(hi_[q])) flip = hi_[q] - lo_[q];

    int leave = -1;
    double best_t = kInfinity;
    double best_abs = 0.0;
    bool leave_to_lower = false;
    for (int r = 0; r < m_; ++r) {
      const double a = alpha[r];
      if (std::abs(a) <= kRatioPivotTol) continue;
      const int b = head_[r];
      const double delta = -dir * a;
      double lim;
      if (delta < 0.0) {
        if (!std::isfinite(lo_[b])) continue;
        lim = std::max(0.0, x_[b] - lo_[b]) / -delta;
      } else {
        if (!std::isfinite(hi_[b])) continue;
        lim = std::max(0.0, hi_[b] - x_[b]) / delta;
      }
      bool take = false;
      if (lim < best_t - 1e-12) {
        take = true;
      } else if (lim <= best_t + 1e-12 && leave >= 0) {
        if (bland) {
          take = b < head_[leave];
        } else {
          take = std::abs(a) > best_abs ||
                 (std::abs(a) == best_abs && b < head_[leave]);
        }
      }
      if (take) {
        leave = r;
        best_t = lim;
        best_abs = std::abs(a);
        leave_to_lower = delta < 0.0;
      }
    }

    if (leave < 0 && !std::isfinite(flip)) {
      *unbounded = true;
      return absl::OkStatus();
    }
    if (flip <= best_t) {
      // The entering variable reaches its own opposite bound first.
      for (int r = 0; r < m_; ++r) x_[head_[r]] -= dir * alpha[r] * flip;
      state_[q] = dir > 0 ? VarState::kAtUpper : VarState::kAtLower;
      x_[q] = NonbasicValue(q);
      degenerate_run = flip > 1e-12 ? 0 : degenerate_run + 1;
      ++total_iterations_;
      continue;
    }
    if (std::abs(alpha[leave]) < options_.pivot_tol * 1e2) {
      if (++failures > 3) {
        return absl::InternalError(
            "numerical failure: repeated tiny pivot elements");
      }
      if (!Refactor()) {
        return absl::InternalError("numerical failure: singular basis");
      }
      RecomputeBasics();
      continue;
    }

    const double t = best_t;
    for (int r = 0; r < m_; ++r) x_[head_[r]] -= dir * alpha[r] * t;
    x_[q] += dir * t;
    const int out = head_[leave];
    state_[out] = leave_to_lower ? VarState::kAtLower : VarState::kAtUpper;
    x_[out] = NonbasicValue(out);
    head_[leave] = q;
    state_[q] = VarState::kBasic;

    const double piv = alpha[leave];
    double* prow = &binv_[static_cast<size_t>(leave) * m_];
    for (int k = 0; k < m_; ++k) prow[k] /= piv;
    for (int r = 0; r < m_; ++r) {
      if (r == leave || alpha[r] == 0.0) continue;
      const double f = alpha[r];
      double* row = &binv_[static_cast<size_t>(r) * m_];
      for (int k = 0; k < m_; ++k) row[k] -= f * prow[k];
    }
    ++pivots_since_refactor_;
    ++total_iterations_;
    degenerate_run = t > 1e-12 ? 0 : degenerate_run + 1;
  }
}

void SimplexModel::DriveOutArtificials() {
  std::vector<double> alpha;
  const int n = NumVars();
  for (int r = 0; r < m_; ++r) {
    const int b = head_[r];
    if (b < m_ || b >= 2 * m_) continue;
    const double* row = &binv_[static_cast<size_t>(r) * m_];
    int best = -1;
    double best_abs = 1e-7;
    for (int j = 0; j < n; ++j) {
      if (state_[j] == VarState::kBasic || (j >= m_ && j < 2 * m_)) continue;
      if (lo_[j] == hi_[j]) continue;
      double v;
      if (j < m_) {
        v = row[j];
      } else {
        const std::vector<double>& a = cols_[j - 2 * m_];
        v = 0.0;
        for (int i = 0; i < m_; ++i) v += row[i] * a[i];
      }
      if (std::abs(v) > best_abs) {
        best_abs = std::abs(v);
        best = j;
      }
    }
    if (best < 0) continue;  // redundant row; artificial stays at zero
    FtranColumn(best, alpha);
    state_[b] = VarState::kAtLower;
    x_[b] = 0.0;
    head_[r] = best;
    state_[best] = VarState::kBasic;
    const double piv = alpha[r];
    double* prow = &binv_[static_cast<size_t>(r) * m_];
    for (int k = 0; k < m_; ++k) prow[k] /= piv;
    for (int rr = 0; rr < m_; ++rr) {
      if (rr == r || alpha[rr] == 0.0) continue;
      const double f = alpha[rr];
      double* other = &binv_[static_cast<size_t>(rr) * m_];
      for (int k = 0; k < m_; ++k) other[k] -= f * prow[k];
    }
    ++pivots_since_refactor_;
  }
}

absl::StatusOr<LpSolution> SimplexModel::Solve() {
  const int n = NumVars();
  total_iterations_ = 0;
  bool cold = !has_basis_;
  if (!cold) {
    if (!Refactor()) {
      cold = true;
    } else {
      RecomputeBasics();
      cold = !BasisFeasible();
    }
  }
  LpSolution sol;
  bool unbounded = false;
  if (cold) {
    ColdStart();
    std::vector<double> phase1(n, 0.0);
    for (int i = 0; i < m_; ++i) phase1[m_ + i] = 1.0;
    if (absl::Status s = Iterate(phase1, &unbounded); !s.ok()) return s;
    if (!Refactor()) {
      return absl::InternalError("numerical failure: singular basis");
    }
    RecomputeBasics();
    double infeas = 0.0, scale = 1.0;
    for (int i = 0; i < m_; ++i) {
      infeas += std::max(0.0, x_[m_ + i]);
      scale = std::max(scale, std::abs(rhs_[i]));
    }
    if (infeas > 10.0 * options_.feasibility_tol * scale) {
      has_basis_ = false;
      sol.status = LpStatus::kInfeasible;
      sol.iterations = total_iterations_;
      return sol;
    }
    for (int i = 0; i < m_; ++i) {
      const int art = m_ + i;
      hi_[art] = 0.0;
      if (state_[art] != VarState::kBasic) {
        state_[art] = VarState::kAtLower;
        x_[art] = 0.0;
      }
    }
    DriveOutArtificials();
    if (!Refactor()) {
      return absl::InternalError("numerical failure: singular basis");
    }
    RecomputeBasics();
  }

  std::vector<double> cost(n, 0.0);
  const double sign = sense_ == Sense::kMax ? -1.0 : 1.0;
  for (int j = 0; j < num_columns(); ++j) cost[StructuralIndex(j)] = sign * cost_[j];

  // Iterate, then refactor and confirm optimality on fresh values.
  for (int pass = 0; pass < 3; ++pass) {
    const int before = total_iterations_;
    if (absl::Status s = Iterate(cost, &unbounded); !s.ok()) return s;
    if (unbounded) {
      sol.status = LpStatus::kUnbounded;
      sol.iterations = total_iterations_;
      return sol;
    }
    if (!Refactor()) {
      return absl::InternalError("numerical failure: singular basis");
    }
    RecomputeBasics();
    if (pass > 0 && total_iterations_ == before) break;
  }

  std::vector<double> y(m_, 0.0);
  for (int i = 0; i < m_; ++i) {
    double s = 0.0;
    for (int r = 0; r < m_; ++r) s += cost[head_[r]] * binv_[static_cast<size_t>(r) * m_ + i];
    y[i] = s;
  }
  sol.status = LpStatus::kOptimal;
  sol.iterations = total_iterations_;
  sol.x.resize(num_columns());
  for (int j = 0; j < num_columns(); ++j) sol.x[j] = x_[StructuralIndex(j)];
  sol.duals.resize(m_);
  for (int i = 0; i < m_; ++i) sol.duals[i] = sign * y[i];
  double value = 0.0;
  for (int j = 0; j < num_columns(); ++j) value += cost_[j] * sol.x[j];
  sol.value = value;

  // Self-audit: primal residuals and strong duality.
  double max_resid = 0.0, dual_value = 0.0, magnitude = 1.0;
  for (int i = 0; i < m_; ++i) {
    double ax = 0.0, row_scale = std::abs(rhs_[i]);
    for (int j = 0; j < num_columns(); ++j) {
      ax += cols_[j][i] * sol.x[j];
      row_scale += std::abs(cols_[j][i] * sol.x[j]);
    }
    double viol = 0.0;
    switch (relations_[i]) {
      case Relation::kLe:
        viol = std::max(0.0, ax - rhs_[i]);
        break;
      case Relation::kGe:
        viol = std::max(0.0, rhs_[i] - ax);
        break;
      case Relation::kEq:
        viol = std::abs(ax - rhs_[i]);
        break;
    }
    max_resid = std::max(max_resid, viol / (1.0 + row_scale));
    dual_value += sol.duals[i] * rhs_[i];
    magnitude += std::abs(sol.duals[i] * rhs_[i]);
  }
  for (int j = 0; j < num_columns(); ++j) {
    double rc = cost_[j];
    for (int i = 0; i < m_; ++i) rc -= sol.duals[i] * cols_[j][i];
    dual_value += rc * sol.x[j];
    magnitude += std::abs(rc * sol.x[j]);
  }
  if (max_resid > 1e3 * options_.feasibility_tol) {
    return absl::InternalError(absl::StrFormat(
        "numerical failure: primal residual %g after solve", max_resid));
  }
  if (std::abs(dual_value - value) >
      1e-7 * std::max({1.0, std::abs(value), 1e-3 * magnitude})) {
    return absl::InternalError(absl::StrFormat(
        "numerical failure: duality gap %g after solve",
        std::abs(dual_value - value)));
  }
  return sol;
}

absl::StatusOr<LpSolution> SolveLp(const LinearProgram& lp,
                                   const LpOptions& options) {
  const int n = lp.num_vars();
  const int m = lp.num_rows();
  if (static_cast<int>(lp.lower.size()) != n ||
      static_cast<int>(lp.upper.size()) != n) {
    return absl::InvalidArgumentError("bounds do not match variable count");
  }
  std::vector<Relation> relations(m);
  std::vector<double> rhs(m);
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(lp.rows[i].coeffs.size()) > n) {
      return absl::InvalidArgumentError("row has more coefficients than variables");
    }
    if (!std::isfinite(lp.rows[i].rhs)) {
      return absl::InvalidArgumentError("row right-hand side is not finite");
    }
    relations[i] = lp.rows[i].relation;
    rhs[i] = lp.rows[i].rhs;
  }
  SimplexModel model(lp.sense, std::move(relations), std::move(rhs), options);
  std::vector<double> column(m);
  for (int j = 0; j < n; ++j) {
    if (lp.lower[j] > lp.upper[j]) {
      LpSolution sol;
      sol.status = LpStatus::kInfeasible;
      return sol;
    }
    for (int i = 0; i < m; ++i) {
      const auto& c = lp.rows[i].coeffs;
      column[i] = j < static_cast<int>(c.size()) ? c[j] : 0.0;
    }
    model.AddColumn(lp.objective[j], lp.lower[j], lp.upper[j], column);
  }
  return model.Solve();
}

}  // namespace rrpo
