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

// JSON files for instances, uncertainty sets, policies and solve reports.

#ifndef RRPO_INSTANCE_IO_H_
#define RRPO_INSTANCE_IO_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "rrpo/analysis.h"
#include "rrpo/demand_model.h"
#include "rrpo/oracles.h"
#include "rrpo/policy.h"
#include "rrpo/uncertainty_set.h"

namespace rrpo {

inline constexpr int kSchemaVersion = 1;

struct InstanceFile {
  Instance instance;
  std::optional<UncertaintySet> uncertainty;
};

absl::StatusOr<InstanceFile> ParseInstanceJson(std::string_view text);
std::string InstanceToJson(const Instance& instance,
                           const std::optional<UncertaintySet>& uncertainty);
absl::StatusOr<InstanceFile> ReadInstanceFile(const std::string& path);
absl::Status WriteInstanceFile(const std::string& path, const Instance& instance,
                               const std::optional<UncertaintySet>& uncertainty);

// Uncertainty objects use the instance's u0 as the nominal point.
absl::StatusOr<UncertaintySet> ParseUncertaintyJson(std::string_view text,
                                                    const Instance& instance);
std::string UncertaintyToJson(const UncertaintySet& set);

// Policy atoms may give grid levels or prices; prices must match a grid
// level to 1e-9.
// Probabilities are rescaled only when their sum drifts from 1 by more than
// 1e-12, which is reported through `renormalized`.
absl::StatusOr<RandomizedPolicy> ParsePolicyJson(std::string_view text,
                                                 const Instance& instance,
                                                 bool* renormalized = nullptr);
std::string PolicyToJson(const RandomizedPolicy& policy,
                         const Instance& instance);
absl::StatusOr<RandomizedPolicy> ReadPolicyFile(const std::string& path,
                                                const Instance& instance,
                                                bool* renormalized = nullptr);
absl::Status WritePolicyFile(const std::string& path,
                             const RandomizedPolicy& policy,
                             const Instance& instance);

// Stable 64-bit digest of the canonical instance JSON, as 16 hex digits.
std::string InstanceDigest(const Instance& instance);

struct ReportFile {
  std::string instance_digest;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<MetricsRow> metrics;
  RandomizedPolicy policy;
  // Worst-case value of `policy` as computed at solve time.
  double worst_case = 0.0;
  std::vector<double> lower_trace;
  std::vector<double> upper_trace;
};

std::string ReportToJson(const ReportFile& report, const Instance& instance);
absl::StatusOr<ReportFile> ParseReportJson(std::string_view text,
                                           const Instance& instance);

struct PolicyEvaluation {
  double worst_case = 0.0;
  double gap = 0.0;
  ParamVector u_star;
  double nominal_expected = 0.0;
  bool certified = false;
};

// Worst-case and nominal expected revenue of a policy over the set.
absl::StatusOr<PolicyEvaluation> EvaluatePolicy(
    const Instance& instance, const UncertaintySet& set,
    const RandomizedPolicy& policy,
    const DiscreteMethod& method = DiscreteMethod());

absl::StatusOr<std::string> ReadTextFile(const std::string& path);
absl::Status WriteTextFile(const std::string& path, std::string_view text);

}  // namespace rrpo

#endif  // RRPO_INSTANCE_IO_H_
