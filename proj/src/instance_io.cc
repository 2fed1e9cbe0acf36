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

#include "rrpo/instance_io.h"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <variant>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "nlohmann/json.hpp"
#include "rrpo/status_macros.h"

namespace rrpo {
namespace {

using Json = nlohmann::json;

absl::Status FieldError(const std::string& field, const std::string& what) {
  return absl::InvalidArgumentError(
      absl::StrCat("parse error in field '", field, "': ", what));
}

absl::StatusOr<Json> ParseText(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    return absl::InvalidArgumentError(
        absl::StrFormat("parse error at byte %d: %s", e.byte, e.what()));
  }
}

absl::StatusOr<const Json*> Field(const Json& obj, const std::string& name) {
  if (!obj.is_object()) return FieldError(name, "enclosing value is not an object");
  auto it = obj.find(std::string(name));
  if (it == obj.end()) return FieldError(name, "missing");
  return &*it;
}

absl::StatusOr<double> Number(const Json& v, const std::string& name) {
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!v.is_number()) return FieldError(name, "expected a number");
  return v.get<double>();
}

absl::StatusOr<std::vector<double>> Numbers(const Json& v, const std::string& name,
                                            int expected = -1) {
  if (!v.is_array()) return FieldError(name, "expected an array");
  if (expected >= 0 && static_cast<int>(v.size()) != expected) {
    return FieldError(name, absl::StrFormat("expected %d entries, found %d",
                                            expected, static_cast<int>(v.size())));
  }
  std::vector<double> out;
  for (const Json& e : v) {
    if (!e.is_number()) return FieldError(name, "expected numeric entries");
    out.push_back(e.get<double>());
  }
  return out;
}

absl::Status CheckSchema(const Json& obj) {
  auto it = obj.find("schema_version");
  if (it == obj.end()) return absl::OkStatus();
  if (!it->is_number_integer() || it->get<int>() != kSchemaVersion) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "schema version mismatch: expected %d, found %s", kSchemaVersion,
        it->dump()));
  }
  return absl::OkStatus();
}

Json ParamsToJson(const ParamVector& u) {
  const int n = u.num_products();
  Json gamma = Json::array();
  for (int i = 0; i < n; ++i) {
    Json row = Json::array();
    for (int j = 0; j < n; ++j) row.push_back(u.gamma_at(i, j));
    gamma.push_back(std::move(row));
  }
  Json out = {{"alpha", u.alpha}, {"beta", u.beta}, {"gamma", std::move(gamma)}};
  if (u.family_override.has_value()) {
    out["family"] = std::string(FamilyName(*u.family_override));
  }
  return out;
}

absl::StatusOr<ParamVector> ParamsFromJson(const Json& obj, int n,
                                           const std::string& where) {
  if (!obj.is_object()) return FieldError(where, "expected an object");
  ParamVector u = ParamVector::Zero(n);
  ASSIGN_OR_RETURN(const Json* a, Field(obj, "alpha"));
  ASSIGN_OR_RETURN(u.alpha, Numbers(*a, absl::StrCat(where, ".alpha"), n));
  ASSIGN_OR_RETURN(const Json* b, Field(obj, "beta"));
  ASSIGN_OR_RETURN(u.beta, Numbers(*b, absl::StrCat(where, ".beta"), n));
  auto g = obj.find("gamma");
  if (g != obj.end()) {
    const std::string name = absl::StrCat(where, ".gamma");
    if (!g->is_array() || static_cast<int>(g->size()) != n) {
      return FieldError(name, absl::StrFormat("expected %d rows", n));
    }
    for (int i = 0; i < n; ++i) {
      ASSIGN_OR_RETURN(std::vector<double> row, Numbers((*g)[i], name, n));
      if (row[i] != 0.0) return FieldError(name, "diagonal must be zero");
      for (int j = 0; j < n; ++j) u.gamma_at(i, j) = row[j];
    }
  }
  auto f = obj.find("family");
  if (f != obj.end()) {
    if (!f->is_string()) return FieldError(where, "family must be a string");
    ASSIGN_OR_RETURN(u.family_override, ParseFamily(f->get<std::string>()));
  }
  return u;
}

Json UncertaintyJsonValue(const UncertaintySet& set) {
  if (const auto* l1 = std::get_if<L1Set>(&set)) {
    return {{"type", "l1"}, {"theta", l1->theta}};
  }
  if (const auto* b = std::get_if<DiscreteBudgetSet>(&set)) {
    return {{"type", "budget"},
            {"gamma", b->gamma_budget},
            {"u_hi", ParamsToJson(b->u_hi)},
            {"u_lo", ParamsToJson(b->u_lo)}};
  }
  Json members = Json::array();
  for (const ParamVector& u : std::get<ExplicitSet>(set).members) {
    members.push_back(ParamsToJson(u));
  }
  return {{"type", "explicit"}, {"members", std::move(members)}};
}

absl::StatusOr<BlockMultipliers> MultipliersFromJson(const Json& obj,
                                                     const std::string& where) {
  if (!obj.is_object()) return FieldError(where, "expected an object");
  BlockMultipliers m;
  for (auto [key, slot] : {std::pair<const char*, double*>{"alpha", &m.alpha},
                           {"beta", &m.beta},
                           {"gamma", &m.gamma}}) {
    auto it = obj.find(key);
    if (it != obj.end()) {
      ASSIGN_OR_RETURN(*slot, Number(*it, absl::StrCat(where, ".", key)));
    }
  }
  return m;
}

absl::StatusOr<UncertaintySet> UncertaintyFromJson(const Json& obj,
                                                   const Instance& instance) {
  const int n = instance.num_products();
  ASSIGN_OR_RETURN(const Json* type, Field(obj, "type"));
  if (!type->is_string()) return FieldError("uncertainty.type", "expected a string");
  const std::string kind = type->get<std::string>();
  UncertaintySet set;
  if (kind == "l1") {
    ASSIGN_OR_RETURN(const Json* theta, Field(obj, "theta"));
    ASSIGN_OR_RETURN(const double t, Number(*theta, "uncertainty.theta"));
    set = L1Set{t, instance.u0};
  } else if (kind == "budget") {
    ASSIGN_OR_RETURN(const Json* g, Field(obj, "gamma"));
    if (!g->is_number_integer()) {
      return FieldError("uncertainty.gamma", "expected an integer");
    }
    const int budget = g->get<int>();
    if (obj.contains("u_hi") || obj.contains("u_lo")) {
      DiscreteBudgetSet b{budget, instance.u0, {}, {}};
      ASSIGN_OR_RETURN(const Json* hi, Field(obj, "u_hi"));
      ASSIGN_OR_RETURN(b.u_hi, ParamsFromJson(*hi, n, "uncertainty.u_hi"));
      ASSIGN_OR_RETURN(const Json* lo, Field(obj, "u_lo"));
      ASSIGN_OR_RETURN(b.u_lo, ParamsFromJson(*lo, n, "uncertainty.u_lo"));
      set = std::move(b);
    } else {
      ASSIGN_OR_RETURN(const Json* hi, Field(obj, "hi_multipliers"));
      ASSIGN_OR_RETURN(BlockMultipliers mh,
                       MultipliersFromJson(*hi, "uncertainty.hi_multipliers"));
      ASSIGN_OR_RETURN(const Json* lo, Field(obj, "lo_multipliers"));
      ASSIGN_OR_RETURN(BlockMultipliers ml,
                       MultipliersFromJson(*lo, "uncertainty.lo_multipliers"));
      set = BudgetFromMultipliers(instance.u0, budget, mh, ml);
    }
  } else if (kind == "explicit") {
    ASSIGN_OR_RETURN(const Json* members, Field(obj, "members"));
    if (!members->is_array()) {
      return FieldError("uncertainty.members", "expected an array");
    }
    ExplicitSet e;
    for (size_t k = 0; k < members->size(); ++k) {
      ASSIGN_OR_RETURN(
          ParamVector u,
          ParamsFromJson((*members)[k], n,
                         absl::StrFormat("uncertainty.members[%d]", static_cast<int>(k))));
      e.members.push_back(std::move(u));
    }
    set = std::move(e);
  } else {
    return FieldError("uncertainty.type",
                      absl::StrCat("unknown set type '", kind, "'"));
  }
  RETURN_IF_ERROR(ValidateSet(set, n));
  return set;
}

Json PolicyJsonValue(const RandomizedPolicy& policy, const Instance& instance) {
  Json support = Json::array();
  for (const PolicyAtom& a : policy.support) {
    support.push_back({{"levels", a.p.levels},
                       {"prices", instance.Prices(a.p)},
                       {"prob", a.prob}});
  }
  return {{"schema_version", kSchemaVersion}, {"support", std::move(support)}};
}

absl::StatusOr<RandomizedPolicy> PolicyFromJson(const Json& obj,
                                                const Instance& instance,
                                                bool* renormalized) {
  RETURN_IF_ERROR(CheckSchema(obj));
  ASSIGN_OR_RETURN(const Json* support, Field(obj, "support"));
  if (!support->is_array()) return FieldError("support", "expected an array");
  const int n = instance.num_products();
  RandomizedPolicy policy;
  double total = 0.0;
  for (size_t k = 0; k < support->size(); ++k) {
    const Json& atom = (*support)[k];
    const std::string where = absl::StrFormat("support[%d]", static_cast<int>(k));
    PolicyAtom a;
    if (atom.contains("levels")) {
      if (!atom["levels"].is_array() || static_cast<int>(atom["levels"].size()) != n) {
        return FieldError(where, absl::StrFormat("expected %d levels", n));
      }
      for (const Json& l : atom["levels"]) {
        if (!l.is_number_integer()) return FieldError(where, "levels must be integers");
        a.p.levels.push_back(l.get<int>());
      }
    } else {
      ASSIGN_OR_RETURN(const Json* prices, Field(atom, "prices"));
      ASSIGN_OR_RETURN(std::vector<double> pv, Numbers(*prices, where, n));
      for (int i = 0; i < n; ++i) {
        const auto& g = instance.grids[i];
        int found = -1;
        for (size_t t = 0; t < g.size(); ++t) {
          if (std::abs(g[t] - pv[i]) <= 1e-9 * std::max(1.0, std::abs(g[t]))) {
            found = static_cast<int>(t);
          }
        }
        if (found < 0) {
          return absl::InvalidArgumentError(absl::StrFormat(
              "support mismatch: price %g of product %d is not on its grid",
              pv[i], i + 1));
        }
        a.p.levels.push_back(found);
      }
    }
    ASSIGN_OR_RETURN(const Json* prob, Field(atom, "prob"));
    ASSIGN_OR_RETURN(a.prob, Number(*prob, absl::StrCat(where, ".prob")));
    total += a.prob;
    policy.support.push_back(std::move(a));
  }
  if (renormalized != nullptr) *renormalized = false;
  if (std::abs(total - 1.0) > 1e-12 && total > 0.0) {
    for (PolicyAtom& a : policy.support) a.prob /= total;
    if (renormalized != nullptr) *renormalized = true;
  }
  if (absl::Status s = policy.Validate(instance); !s.ok()) {
    return absl::InvalidArgumentError(absl::StrCat("support mismatch: ", s.message()));
  }
  return policy;
}

Json MetricsJsonValue(const MetricsRow& m) {
  return {{"I", m.num_products},        {"budget", m.budget},
          {"t_rr", m.t_rr},             {"z_rr", m.z_rr},
          {"e_r_rr_nominal", m.e_r_rr_nominal},
          {"t_dr", m.t_dr},             {"z_dr", m.z_dr},
          {"ri_percent", m.ri_percent}, {"r_dr_nominal", m.r_dr_nominal},
          {"t_n", m.t_n},               {"z_n", m.z_n},
          {"z_n_wc", m.z_n_wc},         {"certified", m.certified}};
}

absl::StatusOr<MetricsRow> MetricsFromJson(const Json& obj) {
  MetricsRow m;
  ASSIGN_OR_RETURN(const Json* count, Field(obj, "I"));
  if (!count->is_number_integer()) return FieldError("I", "expected an integer");
  m.num_products = count->get<int>();
  for (auto [key, slot] : std::vector<std::pair<const char*, double*>>{
           {"budget", &m.budget},
           {"t_rr", &m.t_rr},
           {"z_rr", &m.z_rr},
           {"e_r_rr_nominal", &m.e_r_rr_nominal},
           {"t_dr", &m.t_dr},
           {"z_dr", &m.z_dr},
           {"ri_percent", &m.ri_percent},
           {"r_dr_nominal", &m.r_dr_nominal},
           {"t_n", &m.t_n},
           {"z_n", &m.z_n},
           {"z_n_wc", &m.z_n_wc}}) {
    ASSIGN_OR_RETURN(const Json* v, Field(obj, key));
    ASSIGN_OR_RETURN(*slot, Number(*v, key));
  }
  ASSIGN_OR_RETURN(const Json* c, Field(obj, "certified"));
  if (!c->is_boolean()) return FieldError("certified", "expected a boolean");
  m.certified = c->get<bool>();
  return m;
}

}  // namespace

absl::StatusOr<InstanceFile> ParseInstanceJson(std::string_view text) {
  ASSIGN_OR_RETURN(Json doc, ParseText(text));
  if (!doc.is_object()) return FieldError("<root>", "expected an object");
  RETURN_IF_ERROR(CheckSchema(doc));
  InstanceFile out;
  ASSIGN_OR_RETURN(const Json* family, Field(doc, "family"));
  if (!family->is_string()) return FieldError("family", "expected a string");
  ASSIGN_OR_RETURN(out.instance.family, ParseFamily(family->get<std::string>()));
  ASSIGN_OR_RETURN(const Json* count, Field(doc, "I"));
  if (!count->is_number_integer() || count->get<int>() < 1) {
    return FieldError("I", "expected a positive integer");
  }
  const int n = count->get<int>();
  ASSIGN_OR_RETURN(const Json* grids, Field(doc, "grids"));
  if (!grids->is_array() || static_cast<int>(grids->size()) != n) {
    return FieldError("grids", absl::StrFormat("expected %d grids", n));
  }
  for (int i = 0; i < n; ++i) {
    ASSIGN_OR_RETURN(std::vector<double> g,
                     Numbers((*grids)[i], absl::StrFormat("grids[%d]", i)));
    out.instance.grids.push_back(std::move(g));
  }
  ASSIGN_OR_RETURN(out.instance.u0, ParamsFromJson(doc, n, "<root>"));
  // The root "family" is the instance family, not an override.
  out.instance.u0.family_override.reset();
  RETURN_IF_ERROR(out.instance.Validate());
  auto unc = doc.find("uncertainty");
  if (unc != doc.end() && !unc->is_null()) {
    ASSIGN_OR_RETURN(out.uncertainty, UncertaintyFromJson(*unc, out.instance));
  }
  return out;
}

std::string InstanceToJson(const Instance& instance,
                           const std::optional<UncertaintySet>& uncertainty) {
  Json doc = ParamsToJson(instance.u0);
  doc["schema_version"] = kSchemaVersion;
  doc["family"] = std::string(FamilyName(instance.family));
  doc["I"] = instance.num_products();
  doc["grids"] = instance.grids;
  if (uncertainty.has_value()) doc["uncertainty"] = UncertaintyJsonValue(*uncertainty);
  return doc.dump(2) + "\n";
}

absl::StatusOr<InstanceFile> ReadInstanceFile(const std::string& path) {
  ASSIGN_OR_RETURN(std::string text, ReadTextFile(path));
  absl::StatusOr<InstanceFile> out = ParseInstanceJson(text);
  if (!out.ok()) {
    return absl::Status(out.status().code(),
                        absl::StrCat(path, ": ", out.status().message()));
  }
  return out;
}

absl::Status WriteInstanceFile(const std::string& path, const Instance& instance,
                               const std::optional<UncertaintySet>& uncertainty) {
  return WriteTextFile(path, InstanceToJson(instance, uncertainty));
}

absl::StatusOr<UncertaintySet> ParseUncertaintyJson(std::string_view text,
                                                    const Instance& instance) {
  ASSIGN_OR_RETURN(Json doc, ParseText(text));
  return UncertaintyFromJson(doc, instance);
}

std::string UncertaintyToJson(const UncertaintySet& set) {
  return UncertaintyJsonValue(set).dump(2) + "\n";
}

absl::StatusOr<RandomizedPolicy> ParsePolicyJson(std::string_view text,
                                                 const Instance& instance,
                                                 bool* renormalized) {
  ASSIGN_OR_RETURN(Json doc, ParseText(text));
  return PolicyFromJson(doc, instance, renormalized);
}

std::string PolicyToJson(const RandomizedPolicy& policy,
                         const Instance& instance) {
  return PolicyJsonValue(policy, instance).dump(2) + "\n";
}

absl::StatusOr<RandomizedPolicy> ReadPolicyFile(const std::string& path,
                                                const Instance& instance,
                                                bool* renormalized) {
  ASSIGN_OR_RETURN(std::string text, ReadTextFile(path));
  return ParsePolicyJson(text, instance, renormalized);
}

absl::Status WritePolicyFile(const std::string& path,
                             const RandomizedPolicy& policy,
                             const Instance& instance) {
  return WriteTextFile(path, PolicyToJson(policy, instance));
}

std::string InstanceDigest(const Instance& instance) {
  // 64-bit FNV-1a over the compact canonical form.
  const std::string canonical =
      Json::parse(InstanceToJson(instance, std::nullopt)).dump();
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return absl::StrFormat("%016x", h);
}

std::string ReportToJson(const ReportFile& report, const Instance& instance) {
  Json config = Json::object();
  for (const auto& [k, v] : report.config) config[k] = v;
  Json metrics = Json::array();
  for (const MetricsRow& m : report.metrics) metrics.push_back(MetricsJsonValue(m));
  Json doc = {{"schema_version", kSchemaVersion},
              {"instance_digest", report.instance_digest},
              {"config", std::move(config)},
              {"metrics", std::move(metrics)},
              {"policy", PolicyJsonValue(report.policy, instance)},
              {"worst_case", report.worst_case},
              {"traces",
               {{"lower", report.lower_trace}, {"upper", report.upper_trace}}}};
  return doc.dump(2) + "\n";
}

absl::StatusOr<ReportFile> ParseReportJson(std::string_view text,
                                           const Instance& instance) {
  ASSIGN_OR_RETURN(Json doc, ParseText(text));
  RETURN_IF_ERROR(CheckSchema(doc));
  ReportFile out;
  ASSIGN_OR_RETURN(const Json* digest, Field(doc, "instance_digest"));
  if (!digest->is_string()) return FieldError("instance_digest", "expected a string");
  out.instance_digest = digest->get<std::string>();
  if (out.instance_digest != InstanceDigest(instance)) {
    return absl::InvalidArgumentError(
        "report was produced for a different instance (digest mismatch)");
  }
  ASSIGN_OR_RETURN(const Json* config, Field(doc, "config"));
  for (auto it = config->begin(); it != config->end(); ++it) {
    out.config.push_back({it.key(), it->is_string() ? it->get<std::string>()
                                                    : it->dump()});
  }
  ASSIGN_OR_RETURN(const Json* metrics, Field(doc, "metrics"));
  for (const Json& m : *metrics) {
    ASSIGN_OR_RETURN(MetricsRow row, MetricsFromJson(m));
    out.metrics.push_back(row);
  }
  ASSIGN_OR_RETURN(const Json* policy, Field(doc, "policy"));
  ASSIGN_OR_RETURN(out.policy, PolicyFromJson(*policy, instance, nullptr));
  ASSIGN_OR_RETURN(const Json* wc, Field(doc, "worst_case"));
  ASSIGN_OR_RETURN(out.worst_case, Number(*wc, "worst_case"));
  ASSIGN_OR_RETURN(const Json* traces, Field(doc, "traces"));
  ASSIGN_OR_RETURN(const Json* lower, Field(*traces, "lower"));
  ASSIGN_OR_RETURN(out.lower_trace, Numbers(*lower, "traces.lower"));
  ASSIGN_OR_RETURN(const Json* upper, Field(*traces, "upper"));
  ASSIGN_OR_RETURN(out.upper_trace, Numbers(*upper, "traces.upper"));
  return out;
}

absl::StatusOr<PolicyEvaluation> EvaluatePolicy(const Instance& instance,
                                                const UncertaintySet& set,
                                                const RandomizedPolicy& policy,
                                                const DiscreteMethod& method) {
  RETURN_IF_ERROR(instance.Validate());
  if (absl::Status s = policy.Validate(instance); !s.ok()) {
    return absl::InvalidArgumentError(absl::StrCat("support mismatch: ", s.message()));
  }
  PolicyEvaluation out;
  WorstCaseResult wc;
  if (const auto* l1 = std::get_if<L1Set>(&set)) {
    ASSIGN_OR_RETURN(wc, WorstCaseConvex(instance, policy, *l1));
  } else {
    ASSIGN_OR_RETURN(wc, WorstCaseDiscrete(instance, policy, set, method));
  }
  out.worst_case = wc.value;
  out.gap = wc.gap;
  out.u_star = std::move(wc.u_star);
  out.certified = wc.certified;
  out.nominal_expected = ExpectedRevenue(instance, policy, instance.u0);
  return out;
}

absl::StatusOr<std::string> ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

absl::Status WriteTextFile(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out << text;
  out.close();
  if (!out) return absl::DataLossError(absl::StrCat("failed writing ", path));
  return absl::OkStatus();
}

}  // namespace rrpo
