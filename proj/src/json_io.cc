// Copyright 2026 The hralloc Authors.
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

#include "hralloc/json_io.h"

#include <optional>

namespace hralloc {

using nlohmann::json;

namespace {

const json* Field(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double RequireNumber(const json& obj, const char* key, const std::string& path) {
  const json* v = Field(obj, key);
  if (v == nullptr) throw SchemaError(path + "." + key + ": missing");
  if (!v->is_number()) throw SchemaError(path + "." + key + ": expected number");
  return v->get<double>();
}

std::optional<double> OptionalNumber(const json& obj, const char* key,
                                     const std::string& path) {
  const json* v = Field(obj, key);
  if (v == nullptr) return std::nullopt;
  if (!v->is_number()) throw SchemaError(path + "." + key + ": expected number");
  return v->get<double>();
}

std::string RequireString(const json& obj, const char* key,
                          const std::string& path) {
  const json* v = Field(obj, key);
  if (v == nullptr) throw SchemaError(path + "." + key + ": missing");
  if (!v->is_string()) throw SchemaError(path + "." + key + ": expected string");
  return v->get<std::string>();
}

std::optional<std::string> OptionalString(const json& obj, const char* key,
                                          const std::string& path) {
  const json* v = Field(obj, key);
  if (v == nullptr) return std::nullopt;
  if (!v->is_string()) throw SchemaError(path + "." + key + ": expected string");
  return v->get<std::string>();
}

std::optional<bool> OptionalBool(const json& obj, const char* key,
                                 const std::string& path) {
  const json* v = Field(obj, key);
  if (v == nullptr) return std::nullopt;
  if (!v->is_boolean()) throw SchemaError(path + "." + key + ": expected boolean");
  return v->get<bool>();
}

json ConfigToJson(const ScenarioConfig& c) {
  return {{"horizon", c.horizon},
          {"level_smoothing", c.level_smoothing},
          {"trend_smoothing", c.trend_smoothing},
          {"redistribution", std::string(ToString(c.redistribution))},
          {"reevaluate_prepass", c.reevaluate_prepass},
          {"constraint_tolerance", c.constraint_tolerance},
          {"oracle_tolerance", c.oracle_tolerance}};
}

ScenarioConfig ConfigFromJson(const json& doc, const std::string& path) {
  if (!doc.is_object()) throw SchemaError(path + ": expected object");
  ScenarioConfig c;
  if (auto v = OptionalNumber(doc, "horizon", path)) {
    if (*v != static_cast<int>(*v)) {
      throw SchemaError(path + ".horizon: expected integer");
    }
    c.horizon = static_cast<int>(*v);
  }
  if (auto v = OptionalNumber(doc, "level_smoothing", path)) c.level_smoothing = *v;
  if (auto v = OptionalNumber(doc, "trend_smoothing", path)) c.trend_smoothing = *v;
  if (auto v = OptionalString(doc, "redistribution", path)) {
    auto policy = ParseRedistributionPolicy(*v);
    if (!policy) {
      throw SchemaError(path + ".redistribution: expected equal|proportional");
    }
    c.redistribution = *policy;
  }
  if (auto v = OptionalBool(doc, "reevaluate_prepass", path)) {
    c.reevaluate_prepass = *v;
  }
  if (auto v = OptionalNumber(doc, "constraint_tolerance", path)) {
    c.constraint_tolerance = *v;
  }
  if (auto v = OptionalNumber(doc, "oracle_tolerance", path)) {
    c.oracle_tolerance = *v;
  }
  return c;
}

json Names(const AllocationPlan& plan, const std::vector<std::size_t>& indices) {
  json out = json::array();
  for (std::size_t i : indices) out.push_back(plan.regions[i]);
  return out;
}

}  // namespace

json ScenarioToJson(const Scenario& s) {
  json regions = json::array();
  for (const auto& r : s.regions) {
    json history = json::array();
    for (const auto& obs : r.history) {
      history.push_back({{"date", FormatIsoDate(obs.date)}, {"active", obs.active}});
    }
    json region = {{"name", r.name},
                   {"demand", r.demand},
                   {"severity", r.severity},
                   {"history", std::move(history)}};
    if (r.predicted_max) region["predicted_max"] = *r.predicted_max;
    if (r.ideal_override) region["ideal_override"] = *r.ideal_override;
    regions.push_back(std::move(region));
  }
  json out = {{"name", s.name},
              {"resource_name", s.resource_name},
              {"unit", s.unit},
              {"supply", s.supply},
              {"regions", std::move(regions)},
              {"config", ConfigToJson(s.config)},
              {"revision", s.revision}};
  if (!s.id.empty()) out["id"] = s.id;
  return out;
}

Scenario ScenarioFromJson(const json& doc) {
  if (!doc.is_object()) throw SchemaError("scenario: expected object");
  const std::string root = "scenario";
  Scenario s;
  s.id = OptionalString(doc, "id", root).value_or("");
  s.name = OptionalString(doc, "name", root).value_or("");
  s.resource_name = OptionalString(doc, "resource_name", root).value_or("oxygen");
  s.unit = OptionalString(doc, "unit", root).value_or("MT");
  s.supply = RequireNumber(doc, "supply", root);
  if (auto rev = OptionalNumber(doc, "revision", root)) {
    s.revision = static_cast<std::int64_t>(*rev);
  }
  if (const json* cfg = Field(doc, "config")) {
    s.config = ConfigFromJson(*cfg, root + ".config");
  }
  const json* regions = Field(doc, "regions");
  if (regions == nullptr || !regions->is_array()) {
    throw SchemaError(root + ".regions: expected array");
  }
  for (std::size_t i = 0; i < regions->size(); ++i) {
    const json& rj = (*regions)[i];
    const std::string path = root + ".regions[" + std::to_string(i) + "]";
    if (!rj.is_object()) throw SchemaError(path + ": expected object");
    RegionRecord r;
    r.name = RequireString(rj, "name", path);
    r.demand = RequireNumber(rj, "demand", path);
    r.severity = OptionalNumber(rj, "severity", path).value_or(1.0);
    r.predicted_max = OptionalNumber(rj, "predicted_max", path);
    r.ideal_override = OptionalNumber(rj, "ideal_override", path);
    if (const json* history = Field(rj, "history")) {
      if (!history->is_array()) throw SchemaError(path + ".history: expected array");
      for (std::size_t k = 0; k < history->size(); ++k) {
        const json& hj = (*history)[k];
        const std::string hpath = path + ".history[" + std::to_string(k) + "]";
        if (!hj.is_object()) throw SchemaError(hpath + ": expected object");
        const auto date = ParseIsoDate(RequireString(hj, "date", hpath));
        if (!date) throw SchemaError(hpath + ".date: expected YYYY-MM-DD");
        r.history.push_back({*date, RequireNumber(hj, "active", hpath)});
      }
    }
    s.regions.push_back(std::move(r));
  }
  return s;
}

json ForecastToJson(const ForecastResult& f) {
  return {{"region", f.region},
          {"fitted_level", f.fitted_level},
          {"fitted_trend", f.fitted_trend},
          {"predicted", f.predicted},
          {"horizon_max", f.horizon_max},
          {"gaps_filled", f.gaps_filled}};
}

json PlanToJson(const AllocationPlan& plan) {
  json ideal = json::array();
  for (std::size_t i = 0; i < plan.stage_ideal.size(); ++i) {
    ideal.push_back({{"region", plan.regions[i]},
                     {"demand", plan.demands[i]},
                     {"predicted_max", plan.predicted[i]},
                     {"weight", plan.weights[i]},
                     {"ideal", plan.stage_ideal[i]}});
  }

  json satisfied = json::array();
  for (std::size_t i : plan.stage_prepass.satisfied) {
    satisfied.push_back({{"region", plan.regions[i]}, {"amount", plan.demands[i]}});
  }
  json prepass = {{"satisfied", std::move(satisfied)},
                  {"remaining", Names(plan, plan.stage_prepass.remaining)},
                  {"remaining_supply", plan.stage_prepass.remaining_supply},
                  {"balance_demand", plan.stage_prepass.balance_demand}};

  const SolverResult& opt = plan.stage_optimized;
  json optimized_rows = json::array();
  std::vector<std::size_t> active_names;
  for (std::size_t k = 0; k < plan.optimized_regions.size(); ++k) {
    const std::size_t i = plan.optimized_regions[k];
    json row = {{"region", plan.regions[i]},
                {"demand", plan.demands[i]},
                {"ideal", k < plan.optimized_ideals.size()
                              ? json(plan.optimized_ideals[k])
                              : json(nullptr)},
                {"fraction", opt.fractions[k]},
                {"amount", opt.amounts[k]}};
    optimized_rows.push_back(std::move(row));
  }
  for (std::size_t k : opt.active_set) active_names.push_back(plan.optimized_regions[k]);
  json optimized = {{"regions", std::move(optimized_rows)},
                    {"lambda", opt.multiplier},
                    {"active_set", Names(plan, active_names)},
                    {"kkt_residual", plan.kkt_residual}};

  json final_rows = json::array();
  double allocated = 0.0;
  for (std::size_t i = 0; i < plan.regions.size(); ++i) {
    final_rows.push_back({{"region", plan.regions[i]},
                          {"demand", plan.demands[i]},
                          {"amount", plan.stage_final[i]},
                          {"capped", static_cast<bool>(plan.capped[i])}});
    allocated += plan.stage_final[i];
  }

  return {{"schema", kPlanSchema},
          {"resource", plan.resource_name},
          {"unit", plan.unit},
          {"level", std::string(ToString(plan.level))},
          {"redistribution", std::string(ToString(plan.redistribution))},
          {"supply", plan.conservation_total},
          {"stage_ideal", std::move(ideal)},
          {"stage_prepass", std::move(prepass)},
          {"stage_optimized", std::move(optimized)},
          {"stage_final", std::move(final_rows)},
          {"allocated", allocated},
          {"surplus", plan.surplus},
          {"excluded", Names(plan, plan.excluded)}};
}

void ValidatePlanJson(const json& doc) {
  if (!doc.is_object()) throw SchemaError("plan: expected object");
  const json* schema = Field(doc, "schema");
  if (schema == nullptr || *schema != kPlanSchema) {
    throw SchemaError(std::string("plan.schema: expected \"") + kPlanSchema + "\"");
  }
  for (const char* key : {"stage_ideal", "stage_final"}) {
    const json* v = Field(doc, key);
    if (v == nullptr) throw SchemaError(std::string("plan.") + key + ": missing");
    if (!v->is_array()) throw SchemaError(std::string("plan.") + key + ": expected array");
  }
  for (const char* key : {"stage_prepass", "stage_optimized"}) {
    const json* v = Field(doc, key);
    if (v == nullptr) throw SchemaError(std::string("plan.") + key + ": missing");
    if (!v->is_object()) throw SchemaError(std::string("plan.") + key + ": expected object");
  }
  RequireNumber(doc, "supply", "plan");
  RequireNumber(doc, "surplus", "plan");
  RequireString(doc, "level", "plan");
  const json& final_rows = doc["stage_final"];
  for (std::size_t i = 0; i < final_rows.size(); ++i) {
    const std::string path = "plan.stage_final[" + std::to_string(i) + "]";
    if (!final_rows[i].is_object()) throw SchemaError(path + ": expected object");
    RequireString(final_rows[i], "region", path);
    RequireNumber(final_rows[i], "demand", path);
    RequireNumber(final_rows[i], "amount", path);
  }
  const json& prepass = doc["stage_prepass"];
  RequireNumber(prepass, "remaining_supply", "plan.stage_prepass");
  RequireNumber(prepass, "balance_demand", "plan.stage_prepass");
  const json* satisfied = Field(prepass, "satisfied");
  if (satisfied == nullptr || !satisfied->is_array()) {
    throw SchemaError("plan.stage_prepass.satisfied: expected array");
  }
  const json* rows = Field(doc["stage_optimized"], "regions");
  if (rows == nullptr || !rows->is_array()) {
    throw SchemaError("plan.stage_optimized.regions: expected array");
  }
}

json OptionsToJson(const PipelineOptions& o) {
  return {{"level", std::string(ToString(o.level))},
          {"redistribution", std::string(ToString(o.redistribution))},
          {"use_fixture_predicted", o.use_fixture_predicted},
          {"use_ideal_override", o.use_ideal_override},
          {"reevaluate_prepass", o.reevaluate_prepass}};
}

PipelineOptions OptionsFromJson(const json& doc, const PipelineOptions& defaults) {
  PipelineOptions o = defaults;
  if (doc.is_null()) return o;
  if (!doc.is_object()) throw SchemaError("options: expected object");
  const std::string path = "options";
  if (auto v = OptionalString(doc, "level", path)) {
    auto level = ParseAllocationLevel(*v);
    if (!level) throw SchemaError("options.level: expected center|district|proportional");
    o.level = *level;
  }
  if (auto v = OptionalString(doc, "redistribution", path)) {
    auto policy = ParseRedistributionPolicy(*v);
    if (!policy) throw SchemaError("options.redistribution: expected equal|proportional");
    o.redistribution = *policy;
  }
  if (auto v = OptionalBool(doc, "use_fixture_predicted", path)) o.use_fixture_predicted = *v;
  if (auto v = OptionalBool(doc, "use_ideal_override", path)) o.use_ideal_override = *v;
  if (auto v = OptionalBool(doc, "reevaluate_prepass", path)) o.reevaluate_prepass = *v;
  return o;
}

}  // namespace hralloc
