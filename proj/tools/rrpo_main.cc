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

// Command-line front end: rrpo generate|solve|evaluate|check-proofness|batch.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "rrpo/analysis.h"
#include "rrpo/batch.h"
#include "rrpo/generator.h"
#include "rrpo/instance_io.h"
#include "rrpo/status_macros.h"

namespace rrpo {
namespace {

enum ExitCode { kOk = 0, kConfigError = 2, kLimitExceeded = 3, kNumerical = 4 };

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kOk;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kOutOfRange:
      return kConfigError;
    case absl::StatusCode::kResourceExhausted:
    case absl::StatusCode::kDeadlineExceeded:
      return kLimitExceeded;
    default:
      return kNumerical;
  }
}

struct SetFlags {
  std::string kind;
  std::optional<double> theta;
  std::optional<int> gamma;
  std::vector<double> hi{1.3, 1.3, 1.3};
  std::vector<double> lo{0.7, 0.7, 0.7};
};

struct Flags {
  std::string instance;
  SetFlags set;
  std::string method;
  std::string pricing;
  std::string drpo_pricing;
  std::string worst_case = "enumerate";
  double eps = 1e-6;
  int max_iter = 500;
  uint64_t seed = 1;
  double time_limit = 0.0;
  std::string out;
  std::string policy_out;
  std::string policy;
  std::string config;
  // generate
  std::string family = "linear";
  int products = 2;
  std::string preset = "convex";
};

void AddSetFlags(CLI::App* cmd, Flags* f) {
  cmd->add_option("--uncertainty", f->set.kind,
                  "l1, budget or explicit; defaults to the set in the file")
      ->check(CLI::IsMember({"l1", "budget", "explicit"}));
  cmd->add_option("--theta", f->set.theta, "L1 budget")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--gamma", f->set.gamma, "budget-set size")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--budget-hi", f->set.hi,
                  "upper multipliers for alpha, beta, gamma")
      ->expected(3);
  cmd->add_option("--budget-lo", f->set.lo,
                  "lower multipliers for alpha, beta, gamma")
      ->expected(3);
}

absl::StatusOr<UncertaintySet> ResolveSet(const InstanceFile& file,
                                          const SetFlags& flags) {
  const Instance& instance = file.instance;
  std::string kind = flags.kind;
  if (kind.empty()) {
    if (flags.theta.has_value()) {
      kind = "l1";
    } else if (flags.gamma.has_value()) {
      kind = "budget";
    } else if (file.uncertainty.has_value()) {
      return *file.uncertainty;
    } else {
      return absl::InvalidArgumentError(
          "no uncertainty set: pass --uncertainty or add one to the file");
    }
  }
  const auto* embedded_l1 =
      file.uncertainty ? std::get_if<L1Set>(&*file.uncertainty) : nullptr;
  const auto* embedded_budget =
      file.uncertainty ? std::get_if<DiscreteBudgetSet>(&*file.uncertainty)
                       : nullptr;
  if (kind == "l1") {
    if (flags.theta.has_value()) return L1Set{*flags.theta, instance.u0};
    if (embedded_l1 != nullptr) return *embedded_l1;
    return absl::InvalidArgumentError("--uncertainty l1 needs --theta");
  }
  if (kind == "budget") {
    if (embedded_budget != nullptr) {
      DiscreteBudgetSet set = *embedded_budget;
      if (flags.gamma.has_value()) set.gamma_budget = *flags.gamma;
      return set;
    }
    if (!flags.gamma.has_value()) {
      return absl::InvalidArgumentError("--uncertainty budget needs --gamma");
    }
    return BudgetFromMultipliers(
        instance.u0, *flags.gamma,
        BlockMultipliers{flags.hi[0], flags.hi[1], flags.hi[2]},
        BlockMultipliers{flags.lo[0], flags.lo[1], flags.lo[2]});
  }
  if (file.uncertainty.has_value() &&
      std::holds_alternative<ExplicitSet>(*file.uncertainty)) {
    return *file.uncertainty;
  }
  return absl::InvalidArgumentError(
      "--uncertainty explicit needs an explicit set in the instance file");
}

absl::StatusOr<SolveOptions> ResolveOptions(const Flags& flags,
                                            const Instance& instance) {
  SolveOptions options = DefaultSolveOptions(instance);
  if (!flags.pricing.empty()) {
    ASSIGN_OR_RETURN(options.pricing,
                     ParsePricingMethod(flags.pricing, flags.seed));
  }
  if (!flags.drpo_pricing.empty()) {
    ASSIGN_OR_RETURN(options.drpo_pricing,
                     ParsePricingMethod(flags.drpo_pricing, flags.seed));
  }
  ASSIGN_OR_RETURN(options.worst_case,
                   ParseDiscreteMethod(flags.worst_case, flags.seed));
  options.eps = flags.eps;
  options.max_iter = flags.max_iter;
  return options;
}

absl::Status Emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return absl::OkStatus();
  }
  return WriteTextFile(path, text);
}

std::string Num(double v) { return absl::StrFormat("%.10g", v); }

std::string PriceString(const Instance& instance, const PriceVector& p) {
  return absl::StrCat("(", absl::StrJoin(instance.Prices(p), ", "), ")");
}

absl::Status RunGenerate(const Flags& flags) {
  ASSIGN_OR_RETURN(DemandFamily family, ParseFamily(flags.family));
  GenerationSpec spec;
  if (flags.preset == "convex") {
    spec = GenerationSpec::ConvexPreset(family, flags.products, flags.seed);
  } else if (flags.preset == "discrete") {
    spec = GenerationSpec::DiscretePreset(family, flags.products, flags.seed);
  } else {
    return absl::InvalidArgumentError("--preset must be convex or discrete");
  }
  ASSIGN_OR_RETURN(Instance instance, GenerateInstance(spec));
  std::optional<UncertaintySet> set;
  if (!flags.set.kind.empty() || flags.set.theta || flags.set.gamma) {
    ASSIGN_OR_RETURN(set, ResolveSet(InstanceFile{instance, std::nullopt},
                                     flags.set));
  }
  return Emit(flags.out, InstanceToJson(instance, set));
}

absl::Status RunSolve(const Flags& flags) {
  const auto start = std::chrono::steady_clock::now();
  ASSIGN_OR_RETURN(InstanceFile file, ReadInstanceFile(flags.instance));
  ASSIGN_OR_RETURN(UncertaintySet set, ResolveSet(file, flags.set));
  if (!flags.method.empty()) {
    const bool convex = std::holds_alternative<L1Set>(set);
    if ((flags.method == "convex") != convex) {
      return absl::InvalidArgumentError(
          "--method convex needs an L1 set; --method discrete needs a finite "
          "set");
    }
  }
  ASSIGN_OR_RETURN(SolveOptions options, ResolveOptions(flags, file.instance));
  ASSIGN_OR_RETURN(CellResult cell,
                   SolveCell(file.instance, set, SetBudget(set), options));
  const double elapsed = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  if (flags.time_limit > 0 && elapsed > flags.time_limit) {
    return absl::DeadlineExceededError(
        absl::StrCat("time limit exceeded after ", Num(elapsed), " s"));
  }
  const MetricsRow& m = cell.metrics;
  std::cout << "z_n " << Num(m.z_n) << " at " << PriceString(file.instance, cell.p_nominal)
            << "\n"
            << "z_n_wc " << Num(m.z_n_wc) << "\n"
            << "z_dr " << Num(m.z_dr) << " at " << PriceString(file.instance, cell.p_dr)
            << "\n"
            << "z_rr " << Num(m.z_rr) << " bracket [" << Num(cell.z_rr_lower)
            << ", " << Num(cell.z_rr_upper) << "]\n"
            << "ri_percent " << Num(m.ri_percent) << "\n"
            << "certified " << (m.certified ? "yes" : "no") << "\n"
            << "policy\n";
  for (const PolicyAtom& atom : cell.policy.support) {
    std::cout << "  " << PriceString(file.instance, atom.p) << " w.p. " << Num(atom.prob)
              << "\n";
  }
  if (!flags.policy_out.empty()) {
    RETURN_IF_ERROR(
        WritePolicyFile(flags.policy_out, cell.policy, file.instance));
  }
  if (!flags.out.empty()) {
    ReportFile report;
    report.instance_digest = InstanceDigest(file.instance);
    report.config = {{"uncertainty", UncertaintyToJson(set)},
                     {"pricing", PricingMethodName(options.pricing)},
                     {"drpo_pricing", PricingMethodName(options.drpo_pricing)},
                     {"worst_case", flags.worst_case},
                     {"eps", Num(options.eps)},
                     {"seed", absl::StrCat(flags.seed)}};
    report.metrics = {m};
    report.policy = cell.policy;
    report.worst_case = m.z_rr;
    report.lower_trace = cell.lower_trace;
    report.upper_trace = cell.upper_trace;
    RETURN_IF_ERROR(
        WriteTextFile(flags.out, ReportToJson(report, file.instance)));
  }
  return absl::OkStatus();
}

absl::Status RunEvaluate(const Flags& flags) {
  ASSIGN_OR_RETURN(InstanceFile file, ReadInstanceFile(flags.instance));
  ASSIGN_OR_RETURN(UncertaintySet set, ResolveSet(file, flags.set));
  bool renormalized = false;
  ASSIGN_OR_RETURN(RandomizedPolicy policy,
                   ReadPolicyFile(flags.policy, file.instance, &renormalized));
  ASSIGN_OR_RETURN(DiscreteMethod method,
                   ParseDiscreteMethod(flags.worst_case, flags.seed));
  ASSIGN_OR_RETURN(PolicyEvaluation eval,
                   EvaluatePolicy(file.instance, set, policy, method));
  std::string text = absl::StrCat(
      "worst_case ", Num(eval.worst_case), "\n", "gap ", Num(eval.gap), "\n",
      "u_star ", absl::StrJoin(eval.u_star.Flatten(), " ",
                               [](std::string* out, double v) {
                                 out->append(Num(v));
                               }),
      "\n", "nominal_expected ", Num(eval.nominal_expected), "\n",
      "certified ", eval.certified ? "yes" : "no", "\n");
  if (renormalized) text += "note policy probabilities were renormalized\n";
  return Emit(flags.out, text);
}

std::string ReportText(const std::string& title, const ProofnessReport& r) {
  std::string text =
      absl::StrCat(title, " ", std::string(VerdictName(r.verdict)), "\n");
  for (const Evidence& e : r.evidence) {
    absl::StrAppend(&text, "  ", e.name, " = ", Num(e.value),
                    e.passed ? " (pass)" : " (fail)", "\n");
  }
  if (!r.notes.empty()) absl::StrAppend(&text, "  note: ", r.notes, "\n");
  return text;
}

absl::Status RunCheckProofness(const Flags& flags) {
  ASSIGN_OR_RETURN(InstanceFile file, ReadInstanceFile(flags.instance));
  ASSIGN_OR_RETURN(UncertaintySet set, ResolveSet(file, flags.set));
  ASSIGN_OR_RETURN(ProofnessReport conditions,
                   CheckProofnessConditions(file.instance, set));
  ASSIGN_OR_RETURN(ProofnessReport corollary,
                   CheckCorollary2(file.instance, set));
  return Emit(flags.out, ReportText("conditions", conditions) +
                             ReportText("corollary", corollary));
}

absl::Status RunBatchCommand(const Flags& flags) {
  ASSIGN_OR_RETURN(std::string text, ReadTextFile(flags.config));
  ASSIGN_OR_RETURN(BatchConfig config, ParseBatchConfig(text));
  if (flags.time_limit > 0) config.time_limit = flags.time_limit;
  ASSIGN_OR_RETURN(std::string csv, RunBatch(config));
  return Emit(flags.out, csv);
}

int Main(int argc, char** argv) {
  CLI::App app{"Randomized robust price optimization"};
  app.require_subcommand(1);
  Flags flags;

  CLI::App* generate = app.add_subcommand("generate", "generate an instance");
  generate->add_option("--family", flags.family, "linear, semilog or loglog");
  generate->add_option("--products", flags.products, "number of products")
      ->check(CLI::PositiveNumber);
  generate->add_option("--preset", flags.preset, "convex or discrete");
  generate->add_option("--seed", flags.seed, "generator seed");
  generate->add_option("--out", flags.out, "output path (default stdout)");
  AddSetFlags(generate, &flags);

  auto add_solver_flags = [&](CLI::App* cmd) {
    cmd->add_option("--instance", flags.instance, "instance JSON")->required();
    AddSetFlags(cmd, &flags);
    cmd->add_option("--seed", flags.seed, "seed for local search");
    cmd->add_option("--worst-case", flags.worst_case,
                    "enumerate or local:R for finite sets");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve NPO, DRPO and RRPO");
  add_solver_flags(solve);
  solve->add_option("--method", flags.method, "convex or discrete")
      ->check(CLI::IsMember({"convex", "discrete"}));
  solve->add_option("--pricing", flags.pricing,
                    "enumerate, enumerate:CAP, extreme or local:R");
  solve->add_option("--drpo-pricing", flags.drpo_pricing,
                    "pricing for the deterministic robust problem");
  solve->add_option("--eps", flags.eps, "relative gap tolerance")
      ->check(CLI::PositiveNumber);
  solve->add_option("--max-iter", flags.max_iter, "iteration limit")
      ->check(CLI::PositiveNumber);
  solve->add_option("--time-limit", flags.time_limit, "seconds");
  solve->add_option("--out", flags.out, "report JSON path");
  solve->add_option("--policy-out", flags.policy_out, "policy JSON path");

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "worst case of a policy file");
  add_solver_flags(evaluate);
  evaluate->add_option("--policy", flags.policy, "policy JSON")->required();
  evaluate->add_option("--out", flags.out, "output path (default stdout)");

  CLI::App* proofness = app.add_subcommand(
      "check-proofness", "test the randomization-proofness conditions");
  add_solver_flags(proofness);
  proofness->add_option("--out", flags.out, "output path (default stdout)");

  CLI::App* batch = app.add_subcommand("batch", "run a CSV batch");
  batch->add_option("--config", flags.config, "batch config JSON")->required();
  batch->add_option("--time-limit", flags.time_limit, "seconds");
  batch->add_option("--out", flags.out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  absl::Status status;
  if (generate->parsed()) {
    status = RunGenerate(flags);
  } else if (solve->parsed()) {
    status = RunSolve(flags);
  } else if (evaluate->parsed()) {
    status = RunEvaluate(flags);
  } else if (proofness->parsed()) {
    status = RunCheckProofness(flags);
  } else {
    status = RunBatchCommand(flags);
  }
  if (!status.ok()) std::cerr << "rrpo: " << status.message() << "\n";
  return ExitCodeFor(status);
}

}  // namespace
}  // namespace rrpo

int main(int argc, char** argv) { return rrpo::Main(argc, argv); }
