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
#include <numeric>
#include <utility>

#include "absl/strings/str_format.h"
#include "rrpo/random.h"

namespace rrpo {
namespace {

// Recompute affine terms from scratch after this many incremental updates.
constexpr int kResetInterval = 4096;

bool Better(double v, double best) {
  return v > best + 1e-12 * std::max(1.0, std::abs(best));
}

bool Worse(double v, double best) {
  return v < best - 1e-12 * std::max(1.0, std::abs(best));
}

// d e_i / d u_k for the coordinate role, given transformed prices x.
inline double Sensitivity(const CoordinateRole& role,
                          absl::Span<const double> x) {
  switch (role.kind) {
    case CoordinateRole::kAlpha:
      return 1.0;
    case CoordinateRole::kBeta:
      return -x[role.product];
    case CoordinateRole::kGamma:
      return x[role.partner];
  }
  return 0.0;
}

}  // namespace

// ---------------------------------------------------------------------------
// ScenarioBank

ScenarioBank::ScenarioBank(const Instance& instance,
                           std::vector<const ParamVector*> scenarios)
    : instance_(instance),
      n_(instance.num_products()),
      scenarios_(std::move(scenarios)) {
  for (const ParamVector* u : scenarios_) {
    families_.push_back(EffectiveFamily(instance, *u));
  }
  levels_.assign(n_, 0);
  prices_.assign(n_, 0.0);
  logs_.assign(n_, 0.0);
  e_.assign(static_cast<size_t>(n_) * scenarios_.size(), 0.0);
  steps_since_reset_.assign(1, 0);
  SetAll(levels_);
}

absl::Span<const double> ScenarioBank::transformed(int s) const {
  return families_[s] == DemandFamily::kLogLog ? absl::MakeConstSpan(logs_)
                                               : absl::MakeConstSpan(prices_);
}

void ScenarioBank::Recompute(int s) {
  const ParamVector& u = *scenarios_[s];
  const absl::Span<const double> x = transformed(s);
  double* e = &e_[static_cast<size_t>(s) * n_];
  for (int i = 0; i < n_; ++i) {
    double v = u.alpha[i] - u.beta[i] * x[i];
    const double* row = &u.gamma[static_cast<size_t>(i) * n_];
    for (int j = 0; j < n_; ++j) {
      if (j != i) v += row[j] * x[j];
    }
    e[i] = v;
  }
}

void ScenarioBank::SetAll(const std::vector<int>& levels) {
  levels_ = levels;
  for (int i = 0; i < n_; ++i) {
    prices_[i] = instance_.grids[i][levels_[i]];
    logs_[i] = std::log(prices_[i]);
  }
  for (int s = 0; s < num_scenarios(); ++s) Recompute(s);
  steps_since_reset_[0] = 0;
}

void ScenarioBank::SetLevel(int product, int level) {
  if (levels_[product] == level) return;
  if (++steps_since_reset_[0] >= kResetInterval) {
    levels_[product] = level;
    SetAll(levels_);
    return;
  }
  const double p = instance_.grids[product][level];
  const double lp = std::log(p);
  const double dp = p - prices_[product];
  const double dl = lp - logs_[product];
  levels_[product] = level;
  prices_[product] = p;
  logs_[product] = lp;
  for (int s = 0; s < num_scenarios(); ++s) {
    const ParamVector& u = *scenarios_[s];
    const double dx = families_[s] == DemandFamily::kLogLog ? dl : dp;
    double* e = &e_[static_cast<size_t>(s) * n_];
    for (int i = 0; i < n_; ++i) {
      e[i] += (i == product ? -u.beta[i] : u.gamma[static_cast<size_t>(i) * n_ + product]) * dx;
    }
  }
}

double ScenarioBank::Revenue(int s) const {
  const double* e = &e_[static_cast<size_t>(s) * n_];
  double r = 0.0;
  if (families_[s] == DemandFamily::kLinear) {
    for (int i = 0; i < n_; ++i) r += prices_[i] * e[i];
  } else {
    for (int i = 0; i < n_; ++i) r += prices_[i] * std::exp(e[i]);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Price search

namespace {

struct Candidate {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<int> levels;
  bool valid = false;
};

void Offer(Candidate& best, double value, const std::vector<int>& levels) {
  if (!best.valid || Better(value, best.value) ||
      (!Worse(value, best.value) && !Better(value, best.value) &&
       levels < best.levels)) {
    best.value = value;
    best.levels = levels;
    best.valid = true;
  }
}

absl::Status EnumerateLists(const std::vector<std::vector<int>>& lists,
                            double cap, ScenarioBank& bank,
                            const PriceScore& score, Candidate& best) {
  double count = 1.0;
  for (const auto& l : lists) count *= static_cast<double>(l.size());
  if (count > cap) {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "price grid has %.0f vectors, above the enumeration cap of %.0f",
        count, cap));
  }
  const int n = static_cast<int>(lists.size());
  std::vector<int> idx(n, 0), levels(n);
  for (int i = 0; i < n; ++i) levels[i] = lists[i][0];
  bank.SetAll(levels);
  while (true) {
    const double v = score(bank);
    // Enumeration is lexicographic, so only strict improvements replace.
    if (!best.valid || Better(v, best.value)) {
      best.value = v;
      best.levels = bank.levels();
      best.valid = true;
    }
    int i = n - 1;
    while (i >= 0 && idx[i] + 1 == static_cast<int>(lists[i].size())) --i;
    if (i < 0) break;
    ++idx[i];
    if (i == n - 1) {
      bank.SetLevel(i, lists[i][idx[i]]);
    } else {
      for (int j = i + 1; j < n; ++j) idx[j] = 0;
      for (int j = 0; j < n; ++j) levels[j] = lists[j][idx[j]];
      bank.SetAll(levels);
    }
  }
  return absl::OkStatus();
}

void LocalSearchPrices(const Instance& instance, ScenarioBank& bank,
                       const PriceScore& score, int restarts, uint64_t seed,
                       Candidate& best) {
  const int n = instance.num_products();
  std::vector<int> levels(n);
  for (int r = 0; r < std::max(1, restarts); ++r) {
    SplitMix64 rng(SplitMix64::StreamSeed(seed, r));
    for (int i = 0; i < n; ++i) {
      levels[i] = rng.UniformInt(static_cast<int>(instance.grids[i].size()));
    }
    bank.SetAll(levels);
    double current = score(bank);
    bool improved = true;
    while (improved) {
      improved = false;
      for (int i = 0; i < n; ++i) {
        const int start = bank.levels()[i];
        int best_t = start;
        double best_v = current;
        const int size = static_cast<int>(instance.grids[i].size());
        for (int t = 0; t < size; ++t) {
          if (t == start) continue;
          bank.SetLevel(i, t);
          const double v = score(bank);
          if (Better(v, best_v)) {
            best_v = v;
            best_t = t;
          }
        }
        bank.SetLevel(i, best_t);
        if (best_t != start) {
          current = best_v;
          improved = true;
        }
      }
    }
    // Re-evaluate from scratch so merged values are not affected by drift.
    bank.SetAll(bank.levels());
    Offer(best, score(bank), bank.levels());
  }
}

}  // namespace

absl::StatusOr<PricingResult> MaximizeOverPrices(
    const Instance& instance, std::vector<const ParamVector*> scenarios,
    const PriceScore& score, const PricingMethod& method) {
  if (absl::Status s = instance.Validate(); !s.ok()) return s;
  if (scenarios.empty()) {
    return absl::InvalidArgumentError("price search needs a scenario");
  }
  for (const ParamVector* u : scenarios) {
    if (absl::Status s = instance.ValidateParams(*u); !s.ok()) return s;
  }
  ScenarioBank bank(instance, scenarios);
  Candidate best;
  const int n = instance.num_products();
  switch (method.mode) {
    case PricingMethod::Mode::kEnumerate: {
      std::vector<std::vector<int>> lists(n);
      for (int i = 0; i < n; ++i) {
        lists[i].resize(instance.grids[i].size());
        std::iota(lists[i].begin(), lists[i].end(), 0);
      }
      if (absl::Status s = EnumerateLists(lists, method.cap, bank, score, best);
          !s.ok()) {
        return s;
      }
      break;
    }
    case PricingMethod::Mode::kExtremeLogLog: {
      for (int s = 0; s < bank.num_scenarios(); ++s) {
        if (bank.family(s) != DemandFamily::kLogLog) {
          return absl::InvalidArgumentError(
              "extreme-price search is only exact for log-log demand");
        }
      }
      std::vector<std::vector<int>> lists(n);
      for (int i = 0; i < n; ++i) {
        const int last = static_cast<int>(instance.grids[i].size()) - 1;
        lists[i] = last == 0 ? std::vector<int>{0} : std::vector<int>{0, last};
      }
      if (absl::Status s = EnumerateLists(lists, method.cap, bank, score, best);
          !s.ok()) {
        return s;
      }
      break;
    }
    case PricingMethod::Mode::kLocalSearch:
      LocalSearchPrices(instance, bank, score, method.restarts, method.seed,
                        best);
      break;
  }
  PricingResult out;
  out.p_star.levels = best.levels;
  bank.SetAll(best.levels);
  out.value = score(bank);
  out.certified = method.exact();
  return out;
}

absl::StatusOr<PricingResult> NominalPriceOpt(const Instance& instance,
                                              const ParamVector& u,
                                              const PricingMethod& method) {
  return MaximizeOverPrices(
      instance, {&u}, [](const ScenarioBank& b) { return b.Revenue(0); },
      method);
}

absl::StatusOr<PricingResult> MixturePriceOpt(
    const Instance& instance, absl::Span<const WeightedScenario> scenarios,
    const PricingMethod& method) {
  if (scenarios.empty()) {
    return absl::InvalidArgumentError("mixture has no scenarios");
  }
  std::vector<const ParamVector*> used;
  std::vector<double> weights;
  for (const WeightedScenario& s : scenarios) {
    if (!(s.weight >= 0.0)) {
      return absl::InvalidArgumentError("mixture weight is negative");
    }
    if (s.weight > 0.0) {
      used.push_back(&s.u);
      weights.push_back(s.weight);
    }
  }
  if (used.empty()) {
    used.push_back(&scenarios.front().u);
    weights.push_back(0.0);
  }
  return MaximizeOverPrices(
      instance, used,
      [&weights](const ScenarioBank& b) {
        double v = 0.0;
        for (int s = 0; s < b.num_scenarios(); ++s) {
          v += weights[s] * b.Revenue(s);
        }
        return v;
      },
      method);
}

// ---------------------------------------------------------------------------
// Log-sum-exp

absl::StatusOr<BiconjugateResult> LogSumExpBiconjugate(
    absl::Span<const double> y) {
  if (y.empty()) return absl::InvalidArgumentError("empty input");
  for (double v : y) {
    if (!std::isfinite(v)) {
      return absl::InvalidArgumentError("input entries must be finite");
    }
  }
  const double shift = *std::max_element(y.begin(), y.end());
  double sum = 0.0;
  BiconjugateResult out;
  out.mu.resize(y.size());
  for (size_t i = 0; i < y.size(); ++i) {
    out.mu[i] = std::exp(y[i] - shift);
    sum += out.mu[i];
  }
  for (double& m : out.mu) m /= sum;
  out.value = shift + std::log(sum);
  return out;
}

double EntropyObjective(absl::Span<const double> y,
                        absl::Span<const double> mu) {
  double v = 0.0;
  for (size_t i = 0; i < y.size(); ++i) {
    if (mu[i] > 0.0) v += mu[i] * (y[i] - std::log(mu[i]));
  }
  return v;
}

// ---------------------------------------------------------------------------
// Closed-form worst cases of a single price vector

double PointMassWorstCaseL1(const ScenarioBank& bank, double theta,
                            ParamVector* u_star) {
  const int n = bank.num_products();
  const ParamVector& u0 = bank.scenario(0);
  const absl::Span<const double> p = bank.prices();
  const absl::Span<const double> x = bank.transformed(0);
  const absl::Span<const double> e = bank.exponents(0);
  if (u_star != nullptr) *u_star = u0;

  if (bank.family(0) == DemandFamily::kLinear) {
    double r0 = 0.0;
    for (int i = 0; i < n; ++i) r0 += p[i] * e[i];
    if (theta == 0.0) return r0;
    // Scaled sensitivities g_k u0_k in flattened order.
    double best = 0.0, best_signed = 0.0;
    int best_k = -1, k = 0;
    auto consider = [&](double s) {
      if (std::abs(s) > best) {
        best = std::abs(s);
        best_signed = s;
        best_k = k;
      }
      ++k;
    };
    for (int i = 0; i < n; ++i) consider(p[i] * u0.alpha[i]);
    for (int i = 0; i < n; ++i) consider(-p[i] * x[i] * u0.beta[i]);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (j != i) consider(p[i] * x[j] * u0.gamma_at(i, j));
      }
    }
    if (best_k < 0) return r0;
    if (u_star != nullptr) {
      const double c = u0.Get(best_k);
      u_star->Set(best_k, c * (1.0 - (best_signed > 0 ? 1.0 : -1.0) * theta));
    }
    return r0 - theta * best;
  }

  // Exponential families: A_i = p_i exp(e_i), m_i = max |S_k| over the block.
  std::vector<double> log_a(n), m(n, 0.0), s_at(n, 0.0);
  std::vector<int> arg(n, -1);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    log_a[i] = std::log(p[i]) + e[i];
    auto consider = [&](double s, int k) {
      if (std::abs(s) > m[i]) {
        m[i] = std::abs(s);
        s_at[i] = s;
        arg[i] = k;
      }
    };
    consider(u0.alpha[i], i);
    consider(-u0.beta[i] * x[i], n + i);
    int k = 2 * n + i * (n - 1);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      consider(u0.gamma_at(i, j) * x[j], k++);
    }
  }
  std::vector<int> order;
  for (int i = 0; i < n; ++i) {
    if (m[i] > 0.0) order.push_back(i);
  }
  if (theta == 0.0 || order.empty()) {
    for (int i = 0; i < n; ++i) total += std::exp(log_a[i]);
    return total;
  }
  // Water-filling on log v_i = log(A_i m_i), largest first.
  std::vector<double> log_v(n);
  for (int i : order) log_v[i] = log_a[i] + std::log(m[i]);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return log_v[a] > log_v[b]; });
  double sum_log = 0.0, sum_inv = 0.0, log_nu = 0.0;
  size_t q = 0;
  while (q < order.size()) {
    const int i = order[q];
    sum_log += log_v[i] / m[i];
    sum_inv += 1.0 / m[i];
    log_nu = (sum_log - theta) / sum_inv;
    ++q;
    if (q == order.size() || log_v[order[q]] <= log_nu) break;
  }
  std::vector<char> active(n, 0);
  for (size_t t = 0; t < q; ++t) active[order[t]] = 1;
  for (int i = 0; i < n; ++i) {
    if (!active[i]) {
      total += std::exp(log_a[i]);
      continue;
    }
    const double share = std::max(0.0, (log_v[i] - log_nu) / m[i]);
    total += std::exp(log_a[i] - share * m[i]);
    if (u_star != nullptr) {
      const double c = u0.Get(arg[i]);
      u_star->Set(arg[i], c * (1.0 - (s_at[i] > 0 ? 1.0 : -1.0) * share));
    }
  }
  return total;
}

double PointMassWorstCaseBudget(const ScenarioBank& bank,
                                const DiscreteBudgetSet& set,
                                ParamVector* u_star) {
  const int n = bank.num_products();
  const ParamVector& u0 = bank.scenario(0);
  const absl::Span<const double> p = bank.prices();
  const absl::Span<const double> x = bank.transformed(0);
  const absl::Span<const double> e = bank.exponents(0);
  const bool linear = bank.family(0) == DemandFamily::kLinear;
  if (u_star != nullptr) *u_star = u0;

  // Best move of each coordinate on product i's affine term.
  struct Move {
    double delta;
    int k;
    bool lower;
  };
  std::vector<std::vector<Move>> moves(n);
  auto consider = [&](int i, int k, double sens, double c, double hi,
                      double lo) {
    const double dh = sens * (hi - c), dl = sens * (lo - c);
    const bool lower = dl < dh;
    const double d = lower ? dl : dh;
    if (d < 0.0) moves[i].push_back({d, k, lower});
  };
  for (int i = 0; i < n; ++i) {
    consider(i, i, 1.0, u0.alpha[i], set.u_hi.alpha[i], set.u_lo.alpha[i]);
    consider(i, n + i, -x[i], u0.beta[i], set.u_hi.beta[i], set.u_lo.beta[i]);
    int k = 2 * n + i * (n - 1);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      consider(i, k++, x[j], u0.gamma_at(i, j), set.u_hi.gamma_at(i, j),
               set.u_lo.gamma_at(i, j));
    }
    std::stable_sort(moves[i].begin(), moves[i].end(),
                     [](const Move& a, const Move& b) { return a.delta < b.delta; });
  }
  std::vector<Move> chosen;
  double total = 0.0;
  if (linear) {
    std::vector<std::pair<double, Move>> all;
    for (int i = 0; i < n; ++i) {
      total += p[i] * e[i];
      for (const Move& mv : moves[i]) all.push_back({p[i] * mv.delta, mv});
    }
    std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
      return a.first < b.first || (a.first == b.first && a.second.k < b.second.k);
    });
    const size_t take = std::min<size_t>(all.size(), set.gamma_budget);
    for (size_t t = 0; t < take; ++t) {
      total += all[t].first;
      chosen.push_back(all[t].second);
    }
  } else {
    // Separable convex allocation: take the largest marginal decrease.
    std::vector<double> log_term(n);
    std::vector<size_t> used(n, 0);
    for (int i = 0; i < n; ++i) log_term[i] = std::log(p[i]) + e[i];
    for (int step = 0; step < set.gamma_budget; ++step) {
      int best_i = -1;
      double best_gain = 0.0;
      for (int i = 0; i < n; ++i) {
        if (used[i] >= moves[i].size()) continue;
        const double gain =
            std::exp(log_term[i]) * -std::expm1(moves[i][used[i]].delta);
        if (gain > best_gain) {
          best_gain = gain;
          best_i = i;
        }
      }
      if (best_i < 0) break;
      const Move& mv = moves[best_i][used[best_i]++];
      log_term[best_i] += mv.delta;
      chosen.push_back(mv);
    }
    for (int i = 0; i < n; ++i) total += std::exp(log_term[i]);
  }
  if (u_star != nullptr) {
    for (const Move& mv : chosen) {
      u_star->Set(mv.k, mv.lower ? set.u_lo.Get(mv.k) : set.u_hi.Get(mv.k));
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Kelley model over the L1 set

L1CutModel::L1CutModel(const L1Set& set, double scale)
    : set_(set),
      scale_(scale),
      center_(set.u0.Flatten()),
      lp_(Sense::kMax,
          [&] {
            int active = 0;
            for (double c : set.u0.Flatten()) active += c != 0.0;
            std::vector<Relation> rel(1 + 2 * active, Relation::kLe);
            rel[0] = Relation::kEq;
            return rel;
          }(),
          [&] {
            int active = 0;
            for (double c : set.u0.Flatten()) active += c != 0.0;
            std::vector<double> rhs(1 + 2 * active, 0.0);
            rhs[0] = 1.0;
            return rhs;
          }()) {
  for (int k = 0; k < static_cast<int>(center_.size()); ++k) {
    if (center_[k] != 0.0) active_.push_back(k);
  }
  const int a = static_cast<int>(active_.size());
  std::vector<double> sigma(1 + 2 * a, -1.0);
  sigma[0] = 0.0;
  lp_.AddColumn(-set.theta, 0.0, kInfinity, sigma);
}

void L1CutModel::AddCut(const ParamVector& at, double value,
                        absl::Span<const double> grad) {
  const int a = static_cast<int>(active_.size());
  const std::vector<double> point = at.Flatten();
  std::vector<double> column(1 + 2 * a);
  column[0] = 1.0;
  double c = value;
  for (int t = 0; t < a; ++t) {
    const int k = active_[t];
    const double g = grad[k] * center_[k] / scale_;
    const double z = point[k] / center_[k] - 1.0;
    c -= grad[k] * center_[k] * z;
    column[1 + t] = g;
    column[1 + a + t] = -g;
  }
  lp_.AddColumn(c / scale_, 0.0, kInfinity, column);
  ++num_cuts_;
}

absl::StatusOr<L1CutModel::Solution> L1CutModel::Solve() {
  absl::StatusOr<LpSolution> lp = lp_.Solve();
  if (!lp.ok()) return lp.status();
  if (lp->status != LpStatus::kOptimal) {
    return absl::InternalError("numerical failure: cutting-plane master is not optimal");
  }
  const int a = static_cast<int>(active_.size());
  Solution out;
  out.lower_bound = lp->value * scale_;
  out.weights.assign(lp->x.begin() + 1, lp->x.end());
  std::vector<double> z(a);
  double norm = 0.0;
  for (int t = 0; t < a; ++t) {
    // The -G row pairs with z+ and the +G row with z-.
    z[t] = lp->duals[1 + a + t] - lp->duals[1 + t];
    norm += std::abs(z[t]);
  }
  if (norm > set_.theta && norm > 0.0) {
    for (double& v : z) v *= set_.theta / norm;
  }
  out.u = set_.u0;
  for (int t = 0; t < a; ++t) {
    const int k = active_[t];
    out.u.Set(k, center_[k] * (1.0 + z[t]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Worst case over the L1 set

namespace {

std::vector<double> PolicyGradient(const Instance& instance,
                                   const RandomizedPolicy& policy,
                                   const ParamVector& u) {
  const DemandFamily family = EffectiveFamily(instance, u);
  std::vector<double> total(u.dimension(), 0.0), g(u.dimension());
  for (const PolicyAtom& a : policy.support) {
    RevenueGradientAt(family, instance.Prices(a.p), u, absl::MakeSpan(g));
    for (size_t k = 0; k < g.size(); ++k) total[k] += a.prob * g[k];
  }
  return total;
}

}  // namespace

absl::StatusOr<WorstCaseResult> WorstCaseConvex(const Instance& instance,
                                                const RandomizedPolicy& policy,
                                                const L1Set& set, double tol,
                                                int max_iter) {
  if (absl::Status s = instance.Validate(); !s.ok()) return s;
  if (absl::Status s = ValidateSet(set, instance.num_products()); !s.ok()) {
    return s;
  }
  if (absl::Status s = policy.Validate(instance); !s.ok()) return s;

  WorstCaseResult out;
  if (set.theta == 0.0) {
    out.u_star = set.u0;
    out.value = ExpectedRevenue(instance, policy, set.u0);
    return out;
  }
  if (instance.family == DemandFamily::kLinear) {
    // Revenue is linear in u, so one linear minimization is exact.
    const std::vector<double> g = PolicyGradient(instance, policy, set.u0);
    absl::StatusOr<L1LinearMin> lin = LinearMinOverL1(set, g);
    if (!lin.ok()) return lin.status();
    out.u_star = lin->u_star;
    out.value = ExpectedRevenue(instance, policy, out.u_star);
    return out;
  }
  if (policy.support.size() == 1) {
    ScenarioBank bank(instance, {&set.u0});
    bank.SetAll(policy.support[0].p.levels);
    PointMassWorstCaseL1(bank, set.theta, &out.u_star);
    out.value = ExpectedRevenue(instance, policy, out.u_star);
    return out;
  }

  const double f0 = ExpectedRevenue(instance, policy, set.u0);
  L1CutModel model(set, std::abs(f0) > 0.0 ? std::abs(f0) : 1.0);
  ParamVector u = set.u0;
  double upper = std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();
  out.converged = false;
  for (int it = 1; it <= max_iter; ++it) {
    const double fu = ExpectedRevenue(instance, policy, u);
    if (fu < upper) {
      upper = fu;
      out.u_star = u;
    }
    model.AddCut(u, fu, PolicyGradient(instance, policy, u));
    absl::StatusOr<L1CutModel::Solution> sol = model.Solve();
    if (!sol.ok()) return sol.status();
    lower = std::max(lower, sol->lower_bound);
    out.iterations = it;
    if (upper - lower <= tol * std::max(1.0, std::abs(upper))) {
      out.converged = true;
      break;
    }
    u = std::move(sol->u);
  }
  out.value = upper;
  out.gap = std::max(0.0, upper - lower);
  out.certified = out.converged;
  return out;
}

// ---------------------------------------------------------------------------
// Worst case over finite sets

namespace {

// Coordinate local search over (xi, eta) under the flip budget. Affine terms
// of every policy atom are tracked so a single-coordinate move costs
// O(|support|).
class BudgetLocalSearch {
 public:
  BudgetLocalSearch(const Instance& instance, const RandomizedPolicy& policy,
                    const DiscreteBudgetSet& set)
      : n_(instance.num_products()),
        d_(set.u0.dimension()),
        linear_(instance.family == DemandFamily::kLinear),
        center_(set.u0.Flatten()),
        hi_(set.u_hi.Flatten()),
        lo_(set.u_lo.Flatten()),
        budget_(std::min(set.gamma_budget, d_)) {
    for (const PolicyAtom& a : policy.support) {
      prob_.push_back(a.prob);
      prices_.push_back(instance.Prices(a.p));
      std::vector<double> x = prices_.back();
      if (instance.family == DemandFamily::kLogLog) {
        for (double& v : x) v = std::log(v);
      }
      // Linear demand evaluated at transformed prices is exactly e_i.
      std::vector<double> e0(n_);
      DemandAt(DemandFamily::kLinear, x, set.u0, absl::MakeSpan(e0));
      base_e_.push_back(e0);
      std::vector<double> sens(d_);
      for (int k = 0; k < d_; ++k) sens[k] = Sensitivity(RoleOf(n_, k), x);
      sens_.push_back(std::move(sens));
    }
    for (int k = 0; k < d_; ++k) product_of_.push_back(RoleOf(n_, k).product);
  }

  double Term(double e) const { return linear_ ? e : std::exp(e); }

  double ValueOf(int k, int side) const {
    return side == 0 ? center_[k] : side == 1 ? hi_[k] : lo_[k];
  }

  void Reset(const std::vector<int>& side) {
    side_ = side;
    e_ = base_e_;
    flips_ = 0;
    for (int k = 0; k < d_; ++k) {
      if (side_[k] == 0) continue;
      ++flips_;
      const double du = ValueOf(k, side_[k]) - center_[k];
      for (size_t a = 0; a < e_.size(); ++a) {
        e_[a][product_of_[k]] += sens_[a][k] * du;
      }
    }
  }

  double Value() const {
    double v = 0.0;
    for (size_t a = 0; a < e_.size(); ++a) {
      double r = 0.0;
      for (int i = 0; i < n_; ++i) r += prices_[a][i] * Term(e_[a][i]);
      v += prob_[a] * r;
    }
    return v;
  }

  // Change in value when coordinates ks move to sides ss (same product or
  // not), without applying it.
  double Delta(const int* ks, const int* ss, int count) const {
    double total = 0.0;
    // Group by product; at most two coordinates.
    if (count == 2 && product_of_[ks[0]] == product_of_[ks[1]]) {
      const int i = product_of_[ks[0]];
      for (size_t a = 0; a < e_.size(); ++a) {
        double shift = 0.0;
        for (int c = 0; c < 2; ++c) {
          shift += sens_[a][ks[c]] *
                   (ValueOf(ks[c], ss[c]) - ValueOf(ks[c], side_[ks[c]]));
        }
        total += prob_[a] * prices_[a][i] *
                 (Term(e_[a][i] + shift) - Term(e_[a][i]));
      }
      return total;
    }
    for (int c = 0; c < count; ++c) {
      const int k = ks[c], i = product_of_[k];
      const double du = ValueOf(k, ss[c]) - ValueOf(k, side_[k]);
      for (size_t a = 0; a < e_.size(); ++a) {
        total += prob_[a] * prices_[a][i] *
                 (Term(e_[a][i] + sens_[a][k] * du) - Term(e_[a][i]));
      }
    }
    return total;
  }

  void Apply(int k, int s) {
    const double du = ValueOf(k, s) - ValueOf(k, side_[k]);
    for (size_t a = 0; a < e_.size(); ++a) {
      e_[a][product_of_[k]] += sens_[a][k] * du;
    }
    flips_ += (s != 0) - (side_[k] != 0);
    side_[k] = s;
  }

  // Best-improvement descent to a local minimum.
  void Descend() {
    double value = Value();
    while (true) {
      const double thresh = 1e-12 * std::max(1.0, std::abs(value));
      double best = -thresh;
      int bk[2] = {-1, -1}, bs[2] = {0, 0}, count = 0;
      for (int k = 0; k < d_; ++k) {
        for (int s = 0; s < 3; ++s) {
          if (s == side_[k]) continue;
          if (side_[k] == 0 && flips_ >= budget_) continue;
          const double dv = Delta(&k, &s, 1);
          if (dv < best) {
            best = dv;
            bk[0] = k;
            bs[0] = s;
            count = 1;
          }
        }
      }
      if (flips_ >= budget_ && budget_ > 0) {
        // Swaps: release one flipped coordinate, flip another.
        for (int k1 = 0; k1 < d_; ++k1) {
          if (side_[k1] == 0) continue;
          for (int k2 = 0; k2 < d_; ++k2) {
            if (side_[k2] != 0) continue;
            for (int s2 = 1; s2 <= 2; ++s2) {
              const int ks[2] = {k1, k2}, ss[2] = {0, s2};
              const double dv = Delta(ks, ss, 2);
              if (dv < best) {
                best = dv;
                bk[0] = k1;
                bk[1] = k2;
                bs[0] = 0;
                bs[1] = s2;
                count = 2;
              }
            }
          }
        }
      }
      if (count == 0) return;
      for (int c = 0; c < count; ++c) Apply(bk[c], bs[c]);
      value = Value();
    }
  }

  const std::vector<int>& side() const { return side_; }
  int dimension() const { return d_; }
  int budget() const { return budget_; }

  ParamVector Build(const ParamVector& u0) const {
    ParamVector u = u0;
    for (int k = 0; k < d_; ++k) {
      if (side_[k] != 0) u.Set(k, ValueOf(k, side_[k]));
    }
    return u;
  }

 private:
  int n_, d_;
  bool linear_;
  std::vector<double> center_, hi_, lo_;
  int budget_;
  std::vector<double> prob_;
  std::vector<std::vector<double>> prices_, base_e_, sens_, e_;
  std::vector<int> product_of_;
  std::vector<int> side_;
  int flips_ = 0;
};

}  // namespace

absl::StatusOr<WorstCaseResult> WorstCaseDiscrete(
    const Instance& instance, const RandomizedPolicy& policy,
    const UncertaintySet& set, const DiscreteMethod& method) {
  if (absl::Status s = instance.Validate(); !s.ok()) return s;
  if (!IsFinite(set)) {
    return absl::InvalidArgumentError(
        "finite worst case needs a budget or explicit set");
  }
  if (absl::Status s = ValidateSet(set, instance.num_products()); !s.ok()) {
    return s;
  }
  if (absl::Status s = policy.Validate(instance); !s.ok()) return s;

  WorstCaseResult out;
  auto scan = [&](const std::vector<ParamVector>& members) {
    bool first = true;
    for (const ParamVector& u : members) {
      const double v = ExpectedRevenue(instance, policy, u);
      if (first || Worse(v, out.value)) {
        out.value = v;
        out.u_star = u;
        first = false;
      }
    }
  };
  if (const auto* explicit_set = std::get_if<ExplicitSet>(&set)) {
    absl::StatusOr<std::vector<ParamVector>> members =
        EnumerateDiscrete(*explicit_set, method.cap);
    if (!members.ok()) return members.status();
    scan(*members);
    return out;
  }
  const auto& budget = std::get<DiscreteBudgetSet>(set);

  if (method.mode == DiscreteMethod::Mode::kEnumerate) {
    if (budget.gamma_budget == 0) {
      out.u_star = budget.u0;
      out.value = ExpectedRevenue(instance, policy, budget.u0);
      return out;
    }
    if (instance.family == DemandFamily::kLinear) {
      // Linear in u: greedy over the most negative single-coordinate moves.
      const std::vector<double> g = PolicyGradient(instance, policy, budget.u0);
      const std::vector<double> c = budget.u0.Flatten();
      const std::vector<double> hi = budget.u_hi.Flatten();
      const std::vector<double> lo = budget.u_lo.Flatten();
      std::vector<std::pair<double, int>> moves;  // (delta, signed index)
      for (int k = 0; k < static_cast<int>(c.size()); ++k) {
        const double dh = g[k] * (hi[k] - c[k]), dl = g[k] * (lo[k] - c[k]);
        if (std::min(dh, dl) < 0.0) {
          moves.push_back({std::min(dh, dl), dl < dh ? -(k + 1) : k + 1});
        }
      }
      std::stable_sort(moves.begin(), moves.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      out.u_star = budget.u0;
      const size_t take = std::min<size_t>(moves.size(), budget.gamma_budget);
      for (size_t t = 0; t < take; ++t) {
        const int k = std::abs(moves[t].second) - 1;
        out.u_star.Set(k, moves[t].second < 0 ? lo[k] : hi[k]);
      }
      out.value = ExpectedRevenue(instance, policy, out.u_star);
      return out;
    }
    if (policy.support.size() == 1) {
      ScenarioBank bank(instance, {&budget.u0});
      bank.SetAll(policy.support[0].p.levels);
      PointMassWorstCaseBudget(bank, budget, &out.u_star);
      out.value = ExpectedRevenue(instance, policy, out.u_star);
      return out;
    }
    absl::StatusOr<std::vector<ParamVector>> members =
        EnumerateDiscrete(budget, method.cap);
    if (!members.ok()) return members.status();
    scan(*members);
    return out;
  }

  // Local search from the nominal point and from random feasible starts.
  BudgetLocalSearch search(instance, policy, budget);
  const int d = search.dimension();
  bool have = false;
  std::vector<int> best_side;
  double best_value = 0.0;
  for (int r = 0; r < std::max(1, method.restarts); ++r) {
    std::vector<int> side(d, 0);
    if (r > 0) {
      SplitMix64 rng(SplitMix64::StreamSeed(method.seed, r));
      const int flips = rng.UniformInt(search.budget() + 1);
      std::vector<int> perm(d);
      std::iota(perm.begin(), perm.end(), 0);
      for (int t = 0; t < flips; ++t) {
        const int pick = t + rng.UniformInt(d - t);
        std::swap(perm[t], perm[pick]);
        side[perm[t]] = 1 + rng.UniformInt(2);
      }
    }
    search.Reset(side);
    search.Descend();
    search.Reset(search.side());
    const double v = search.Value();
    if (!have || Worse(v, best_value) ||
        (!Better(v, best_value) && search.side() < best_side)) {
      have = true;
      best_value = v;
      best_side = search.side();
    }
  }
  search.Reset(best_side);
  out.u_star = search.Build(budget.u0);
  out.value = ExpectedRevenue(instance, policy, out.u_star);
  out.certified = false;
  return out;
}

}  // namespace rrpo
