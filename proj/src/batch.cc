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

#include "rrpo/batch.h"

#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "nlohmann/json.hpp"
#include "rrpo/instance_io.h"
#include "rrpo/rrpo_convex.h"
#include "rrpo/rrpo_discrete.h"
#include "rrpo/status_macros.h"

namespace rrpo {
namespace {

using Json = nlohmann::json;
using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

absl::StatusOr<int> ParseRestarts(std::string_view text) {
  constexpr std::string_view kPrefix = "local:";
  int restarts = 0;
  const std::string_view digits = text.substr(kPrefix.size());
  if (!absl::SimpleAtoi(absl::string_view(digits.data(), digits.size()),
                        &restarts) ||
      restarts < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("bad restart count in '", std::string(text), "'"));
  }
  return restarts;
}

absl::Status FieldError(const std::string& field, const std::string& what) {
  return absl::InvalidArgumentError(
      absl::StrCat("parse error in field '", field, "': ", what));
}

absl::StatusOr<BlockMultipliers> ParseMultipliers(const Json& j,
                                                  const std::string& field) {
  if (!j.is_object()) return FieldError(field, "expected an object");
  BlockMultipliers m;
  for (auto& [key, target] : {std::pair<const char*, double*>{"alpha", &m.alpha},
                              {"beta", &m.beta},
                              {"gamma", &m.gamma}}) {
    auto it = j.find(key);
    if (it == j.end()) continue;
    if (!it->is_number()) return FieldError(field, "expected numbers");
    *target = it->get<double>();
  }
  return m;
}

std::string CsvField(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string Num(double v) { return absl::StrFormat("%.10g", v); }

std::string MetricsCsv(const MetricsRow& r, const std::string& status) {
  return absl::StrJoin(
      {absl::StrCat(r.num_products), Num(r.budget), Num(r.t_rr), Num(r.z_rr),
       Num(r.e_r_rr_nominal), Num(r.t_dr), Num(r.z_dr), Num(r.ri_percent),
       Num(r.r_dr_nominal), Num(r.t_n), Num(r.z_n), Num(r.z_n_wc),
       std::string(r.certified ? "1" : "0"), CsvField(status)},
      ",");
}

std::string FailureCsv(int num_products, double budget,
                       const std::string& status) {
  return absl::StrCat(num_products, ",", Num(budget), ",,,,,,,,,,,0,",
                      CsvField(status));
}

struct BatchInstance {
  Instance instance;
  std::optional<UncertaintySet> embedded;
  std::string load_error;
  int num_products = 0;
};

absl::StatusOr<UncertaintySet> CellSet(const BatchConfig& config,
                                       const BatchInstance& item,
                                       double budget) {
  switch (config.set_kind) {
    case BatchConfig::SetKind::kL1:
      return L1Set{budget, item.instance.u0};
    case BatchConfig::SetKind::kBudget: {
      const int gamma = static_cast<int>(std::lround(budget));
      if (gamma < 0 || std::abs(budget - gamma) > 1e-9) {
        return absl::InvalidArgumentError(
            "budget set sizes must be nonnegative integers");
      }
      return BudgetFromMultipliers(item.instance.u0, gamma,
                                   config.hi_multipliers, config.lo_multipliers);
    }
    case BatchConfig::SetKind::kFromFile:
      if (!item.embedded.has_value()) {
        return absl::InvalidArgumentError(
            "instance file has no uncertainty section");
      }
      return *item.embedded;
  }
  return absl::InternalError("unknown set kind");
}

absl::StatusOr<SolveOptions> CellOptions(const BatchConfig& config,
                                         const Instance& instance) {
  SolveOptions options = DefaultSolveOptions(instance);
  if (!config.pricing.empty()) {
    ASSIGN_OR_RETURN(options.pricing, ParsePricingMethod(config.pricing));
  }
  if (!config.drpo_pricing.empty()) {
    ASSIGN_OR_RETURN(options.drpo_pricing,
                     ParsePricingMethod(config.drpo_pricing));
  }
  ASSIGN_OR_RETURN(options.worst_case, ParseDiscreteMethod(config.worst_case));
  options.eps = config.eps;
  options.max_iter = config.max_iter;
  return options;
}

}  // namespace

absl::StatusOr<PricingMethod> ParsePricingMethod(std::string_view text,
                                                 uint64_t seed) {
  if (text == "enumerate") return PricingMethod::Enumerate();
  if (text.substr(0, 10) == "enumerate:") {
    const std::string_view digits = text.substr(10);
    double cap = 0.0;
    if (!absl::SimpleAtod(absl::string_view(digits.data(), digits.size()),
                          &cap) ||
        !(cap >= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad cap in '", std::string(text), "'"));
    }
    return PricingMethod::Enumerate(cap);
  }
  if (text == "extreme") return PricingMethod::ExtremeLogLog();
  if (text.substr(0, 6) == "local:") {
    ASSIGN_OR_RETURN(int restarts, ParseRestarts(text));
    return PricingMethod::LocalSearch(restarts, seed);
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown pricing method '", std::string(text),
      "' (expected enumerate, enumerate:CAP, extreme or local:R)"));
}

absl::StatusOr<DiscreteMethod> ParseDiscreteMethod(std::string_view text,
                                                   uint64_t seed) {
  if (text == "enumerate") return DiscreteMethod::Enumerate();
  if (text.substr(0, 6) == "local:") {
    ASSIGN_OR_RETURN(int restarts, ParseRestarts(text));
    return DiscreteMethod::LocalSearch(restarts, seed);
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown worst-case method '", std::string(text),
                   "' (expected enumerate or local:R)"));
}

std::string PricingMethodName(const PricingMethod& method) {
  switch (method.mode) {
    case PricingMethod::Mode::kEnumerate:
      return method.cap == kDefaultPriceCap
                 ? "enumerate"
                 : absl::StrCat("enumerate:", method.cap);
    case PricingMethod::Mode::kExtremeLogLog:
      return "extreme";
    case PricingMethod::Mode::kLocalSearch:
      return absl::StrCat("local:", method.restarts);
  }
  return "unknown";
}

SolveOptions DefaultSolveOptions(const Instance& instance) {
  SolveOptions options;
  if (instance.family == DemandFamily::kLogLog) {
    options.pricing = PricingMethod::ExtremeLogLog();
  }
  return options;
}

double SetBudget(const UncertaintySet& set) {
  if (const auto* l1 = std::get_if<L1Set>(&set)) return l1->theta;
  if (const auto* b = std::get_if<DiscreteBudgetSet>(&set)) {
    return b->gamma_budget;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

absl::StatusOr<CellResult> SolveCell(const Instance& instance,
                                     const UncertaintySet& set, double budget,
                                     const SolveOptions& options) {
  RETURN_IF_ERROR(instance.Validate());
  RETURN_IF_ERROR(ValidateSet(set, instance.num_products()));
  CellResult cell;

  NominalOutcome nominal;
  const Clock::time_point nominal_start = Clock::now();
  ASSIGN_OR_RETURN(nominal.result,
                   NominalPriceOpt(instance, instance.u0, options.pricing));
  nominal.seconds = SecondsSince(nominal_start);

  DrpoResult drpo;
  RrpoOutcome rrpo;
  if (const auto* l1 = std::get_if<L1Set>(&set)) {
    ASSIGN_OR_RETURN(drpo, SolveDrpoConvex(instance, *l1, options.drpo_pricing));
    ASSIGN_OR_RETURN(ConvexSolveReport report,
                     SolveRrpoConvex(instance, *l1, options.eps,
                                     options.max_iter, options.pricing));
    rrpo.z_rr = report.policy_worst_case;
    rrpo.policy = report.policy;
    rrpo.seconds = report.wall_seconds;
    rrpo.certified = report.certified;
    cell.z_rr_lower = report.z_rr_lower;
    cell.z_rr_upper = report.z_rr_upper;
    cell.lower_trace = std::move(report.lower_trace);
    cell.upper_trace = std::move(report.upper_trace);
  } else {
    ASSIGN_OR_RETURN(drpo, SolveDrpoDiscrete(instance, set, options.drpo_pricing,
                                             options.worst_case));
    DoubleCgOptions cg;
    cg.pricing = options.pricing;
    cg.worst_case = options.worst_case;
    ASSIGN_OR_RETURN(DoubleCgReport report,
                     SolveDoubleCg(instance, set, options.eps,
                                   options.max_iter, cg));
    rrpo.z_rr = report.lb;
    rrpo.policy = report.policy;
    rrpo.seconds = report.wall_seconds;
    rrpo.certified = report.certified;
    cell.z_rr_lower = report.lb;
    cell.z_rr_upper = report.ub;
    cell.lower_trace = std::move(report.lb_trace);
    cell.upper_trace = std::move(report.ub_trace);
  }
  ASSIGN_OR_RETURN(cell.metrics,
                   ComputeMetrics(instance, set, budget, nominal, drpo, rrpo));
  cell.p_nominal = nominal.result.p_star;
  cell.p_dr = drpo.p_dr;
  cell.policy = std::move(rrpo.policy);
  return cell;
}

absl::StatusOr<BatchConfig> ParseBatchConfig(std::string_view json_text) {
  Json doc = Json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    return absl::InvalidArgumentError("batch config is not valid JSON");
  }
  if (!doc.is_object()) return FieldError("(root)", "expected an object");
  if (auto v = doc.find("schema_version"); v != doc.end()) {
    if (!v->is_number_integer() || v->get<int>() != kSchemaVersion) {
      return FieldError("schema_version",
                        absl::StrCat("expected ", kSchemaVersion));
    }
  }
  BatchConfig config;
  auto get_string = [&](const char* key, std::string* out) -> absl::Status {
    auto it = doc.find(key);
    if (it == doc.end()) return absl::OkStatus();
    if (!it->is_string()) return FieldError(key, "expected a string");
    *out = it->get<std::string>();
    return absl::OkStatus();
  };
  auto get_number = [&](const char* key, double* out) -> absl::Status {
    auto it = doc.find(key);
    if (it == doc.end()) return absl::OkStatus();
    if (!it->is_number()) return FieldError(key, "expected a number");
    *out = it->get<double>();
    return absl::OkStatus();
  };

  std::string family = "linear";
  RETURN_IF_ERROR(get_string("family", &family));
  absl::StatusOr<DemandFamily> parsed_family = ParseFamily(family);
  if (!parsed_family.ok()) {
    return FieldError("family", std::string(parsed_family.status().message()));
  }
  config.family = *parsed_family;

  std::string preset = "convex";
  RETURN_IF_ERROR(get_string("preset", &preset));
  if (preset == "convex") {
    config.preset = BatchConfig::Preset::kConvex;
  } else if (preset == "discrete") {
    config.preset = BatchConfig::Preset::kDiscrete;
  } else {
    return FieldError("preset", "expected 'convex' or 'discrete'");
  }

  std::string uncertainty = "l1";
  RETURN_IF_ERROR(get_string("uncertainty", &uncertainty));
  if (uncertainty == "l1") {
    config.set_kind = BatchConfig::SetKind::kL1;
  } else if (uncertainty == "budget") {
    config.set_kind = BatchConfig::SetKind::kBudget;
  } else if (uncertainty == "file") {
    config.set_kind = BatchConfig::SetKind::kFromFile;
  } else {
    return FieldError("uncertainty", "expected 'l1', 'budget' or 'file'");
  }

  if (auto it = doc.find("sizes"); it != doc.end()) {
    if (!it->is_array()) return FieldError("sizes", "expected an array");
    for (const Json& v : *it) {
      if (!v.is_number_integer() || v.get<int>() < 1) {
        return FieldError("sizes", "expected positive integers");
      }
      config.sizes.push_back(v.get<int>());
    }
  }
  if (auto it = doc.find("seeds"); it != doc.end()) {
    if (!it->is_array()) return FieldError("seeds", "expected an array");
    for (const Json& v : *it) {
      if (!v.is_number_unsigned()) {
        return FieldError("seeds", "expected nonnegative integers");
      }
      config.seeds.push_back(v.get<uint64_t>());
    }
  }
  if (auto it = doc.find("instances"); it != doc.end()) {
    if (!it->is_array()) return FieldError("instances", "expected an array");
    for (const Json& v : *it) {
      if (!v.is_string()) return FieldError("instances", "expected paths");
      config.instance_paths.push_back(v.get<std::string>());
    }
  }
  if (auto it = doc.find("budgets"); it != doc.end()) {
    if (!it->is_array()) return FieldError("budgets", "expected an array");
    for (const Json& v : *it) {
      if (!v.is_number() || v.get<double>() < 0) {
        return FieldError("budgets", "expected nonnegative numbers");
      }
      config.budgets.push_back(v.get<double>());
    }
  }
  if (config.set_kind == BatchConfig::SetKind::kFromFile) {
    if (config.instance_paths.empty()) {
      return FieldError("uncertainty", "'file' needs an instances list");
    }
    config.budgets.clear();
  } else if (config.budgets.empty()) {
    return FieldError("budgets", "at least one budget is required");
  }
  if (auto it = doc.find("hi_multipliers"); it != doc.end()) {
    ASSIGN_OR_RETURN(config.hi_multipliers,
                     ParseMultipliers(*it, "hi_multipliers"));
  }
  if (auto it = doc.find("lo_multipliers"); it != doc.end()) {
    ASSIGN_OR_RETURN(config.lo_multipliers,
                     ParseMultipliers(*it, "lo_multipliers"));
  }
  RETURN_IF_ERROR(get_string("pricing", &config.pricing));
  RETURN_IF_ERROR(get_string("drpo_pricing", &config.drpo_pricing));
  RETURN_IF_ERROR(get_string("worst_case", &config.worst_case));
  for (const std::string* method : {&config.pricing, &config.drpo_pricing}) {
    if (!method->empty()) {
      if (absl::Status s = ParsePricingMethod(*method).status(); !s.ok()) {
        return FieldError("pricing", std::string(s.message()));
      }
    }
  }
  if (absl::Status s = ParseDiscreteMethod(config.worst_case).status();
      !s.ok()) {
    return FieldError("worst_case", std::string(s.message()));
  }
  RETURN_IF_ERROR(get_number("eps", &config.eps));
  if (!(config.eps > 0)) return FieldError("eps", "must be positive");
  double max_iter = config.max_iter;
  RETURN_IF_ERROR(get_number("max_iter", &max_iter));
  if (max_iter < 1) return FieldError("max_iter", "must be positive");
  config.max_iter = static_cast<int>(max_iter);
  RETURN_IF_ERROR(get_number("time_limit", &config.time_limit));
  return config;
}

absl::StatusOr<std::string> RunBatch(const BatchConfig& config) {
  const Clock::time_point start = Clock::now();
  std::vector<BatchInstance> items;
  if (!config.instance_paths.empty()) {
    for (const std::string& path : config.instance_paths) {
      BatchInstance item;
      absl::StatusOr<InstanceFile> file = ReadInstanceFile(path);
      if (file.ok()) {
        item.instance = std::move(file->instance);
        item.embedded = std::move(file->uncertainty);
        item.num_products = item.instance.num_products();
      } else {
        item.load_error = std::string(file.status().message());
      }
      items.push_back(std::move(item));
    }
  } else {
    for (int size : config.sizes) {
      for (uint64_t seed : config.seeds) {
        const GenerationSpec spec =
            config.preset == BatchConfig::Preset::kConvex
                ? GenerationSpec::ConvexPreset(config.family, size, seed)
                : GenerationSpec::DiscretePreset(config.family, size, seed);
        BatchInstance item;
        item.num_products = size;
        absl::StatusOr<Instance> instance = GenerateInstance(spec);
        if (instance.ok()) {
          item.instance = *std::move(instance);
        } else {
          item.load_error = std::string(instance.status().message());
        }
        items.push_back(std::move(item));
      }
    }
  }

  const std::vector<double> budgets =
      config.set_kind == BatchConfig::SetKind::kFromFile
          ? std::vector<double>{std::numeric_limits<double>::quiet_NaN()}
          : config.budgets;

  // Group key is (I, budget index) so NaN budgets group together.
  std::map<std::pair<int, int>, std::vector<MetricsRow>> groups;
  std::vector<std::string> lines = {kBatchCsvHeader};
  for (const BatchInstance& item : items) {
    for (int b = 0; b < static_cast<int>(budgets.size()); ++b) {
      double budget = budgets[b];
      const auto fail = [&](const std::string& status) {
        lines.push_back(FailureCsv(item.num_products, budget, status));
      };
      if (!item.load_error.empty()) {
        fail(absl::StrCat("error: ", item.load_error));
        continue;
      }
      if (config.time_limit > 0 && SecondsSince(start) > config.time_limit) {
        fail("skipped: time limit exceeded");
        continue;
      }
      absl::StatusOr<UncertaintySet> set = CellSet(config, item, budget);
      if (!set.ok()) {
        fail(absl::StrCat("error: ", set.status().message()));
        continue;
      }
      if (config.set_kind == BatchConfig::SetKind::kFromFile) {
        budget = SetBudget(*set);
      }
      absl::StatusOr<SolveOptions> options = CellOptions(config, item.instance);
      if (!options.ok()) {
        fail(absl::StrCat("error: ", options.status().message()));
        continue;
      }
      absl::StatusOr<CellResult> cell =
          SolveCell(item.instance, *set, budget, *options);
      if (!cell.ok()) {
        fail(absl::StrCat("error: ", cell.status().message()));
        continue;
      }
      lines.push_back(MetricsCsv(cell->metrics, "ok"));
      groups[{item.num_products, b}].push_back(cell->metrics);
    }
  }

  for (const auto& [key, rows] : groups) {
    MetricsRow mean;
    mean.num_products = key.first;
    mean.budget = rows.front().budget;
    mean.certified = true;
    const double n = static_cast<double>(rows.size());
    for (const MetricsRow& r : rows) {
      mean.t_rr += r.t_rr / n;
      mean.z_rr += r.z_rr / n;
      mean.e_r_rr_nominal += r.e_r_rr_nominal / n;
      mean.t_dr += r.t_dr / n;
      mean.z_dr += r.z_dr / n;
      mean.ri_percent += r.ri_percent / n;
      mean.r_dr_nominal += r.r_dr_nominal / n;
      mean.t_n += r.t_n / n;
      mean.z_n += r.z_n / n;
      mean.z_n_wc += r.z_n_wc / n;
      mean.certified = mean.certified && r.certified;
    }
    lines.push_back(MetricsCsv(mean, absl::StrCat("mean of ", rows.size())));
  }
  return absl::StrCat(absl::StrJoin(lines, "\n"), "\n");
}

}  // namespace rrpo
