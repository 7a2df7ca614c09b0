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

#include "hralloc/service.h"

#include <charconv>
#include <cstdio>
#include <fstream>

#include "hralloc/fetch.h"
#include "hralloc/forecast.h"
#include "hralloc/json_io.h"
#include "hralloc/pipeline.h"
#include "httplib.h"

namespace hralloc {

using nlohmann::json;

namespace {

json ViolationsToJson(const std::vector<Violation>& violations) {
  json out = json::array();
  for (const auto& v : violations) {
    out.push_back({{"region", v.region}, {"field", v.field}, {"message", v.message}});
  }
  return out;
}

ApiResponse Error(int status, const std::string& message, json extra = json::object()) {
  ApiResponse r;
  r.status = status;
  r.body = {{"error", message}};
  for (auto& [k, v] : extra.items()) r.body[k] = v;
  return r;
}

ApiResponse InvalidScenario(const std::vector<Violation>& violations) {
  std::string message;
  for (const auto& v : violations) {
    if (!message.empty()) message += "; ";
    message += (v.region.empty() ? "" : v.region + ": ") + v.message;
  }
  return Error(400, message, {{"violations", ViolationsToJson(violations)}});
}

ApiResponse WithScenario(int status, const Scenario& s) {
  ApiResponse r;
  r.status = status;
  r.body = ScenarioToJson(s);
  r.headers["ETag"] = "\"" + std::to_string(s.revision) + "\"";
  return r;
}

std::optional<json> ParseBody(const std::string& body, ApiResponse& error) {
  if (body.empty()) return json(nullptr);
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    error = Error(400, std::string("malformed JSON body: ") + e.what());
    return std::nullopt;
  }
}

// Accepts 7, "7", W/"7".
std::optional<std::int64_t> ParseRevisionTag(std::string tag) {
  if (tag.starts_with("W/")) tag.erase(0, 2);
  if (tag.size() >= 2 && tag.front() == '"' && tag.back() == '"') {
    tag = tag.substr(1, tag.size() - 2);
  }
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(tag.data(), tag.data() + tag.size(), value);
  if (ec != std::errc() || ptr != tag.data() + tag.size()) return std::nullopt;
  return value;
}

class PatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void ApplyPatch(const json& patch, Scenario& s) {
  for (const auto& [key, value] : patch.items()) {
    if (key == "supply") {
      if (!value.is_number()) throw PatchError("supply: expected number");
      s.supply = value.get<double>();
    } else if (key == "name") {
      if (!value.is_string()) throw PatchError("name: expected string");
      s.name = value.get<std::string>();
    } else if (key == "regions") {
      if (!value.is_array()) throw PatchError("regions: expected array");
      for (const auto& entry : value) {
        if (!entry.is_object() || !entry.contains("name") || !entry["name"].is_string()) {
          throw PatchError("regions[]: each entry needs a string name");
        }
        const std::string name = entry["name"].get<std::string>();
        RegionRecord* region = s.FindRegion(name);
        if (region == nullptr) throw PatchError("unknown region \"" + name + "\"");
        for (const auto& [field, v] : entry.items()) {
          if (field == "name") continue;
          if (field != "demand" && field != "severity") {
            throw PatchError("regions[" + name + "]." + field + ": not patchable");
          }
          if (!v.is_number()) {
            throw PatchError("regions[" + name + "]." + field + ": expected number");
          }
          (field == "demand" ? region->demand : region->severity) = v.get<double>();
        }
      }
    } else {
      throw PatchError(key + ": not patchable");
    }
  }
}

void Send(httplib::Response& res, const ApiResponse& api) {
  res.status = api.status;
  for (const auto& [k, v] : api.headers) res.set_header(k, v);
  res.set_content(api.body.dump(2) + "\n", "application/json");
}

}  // namespace

ScenarioStore::ScenarioStore(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.empty() || !std::filesystem::exists(path_)) return;
  std::ifstream in(path_);
  const json doc = json::parse(in);
  next_id_ = doc.value("next_id", std::int64_t{1});
  for (const auto& sj : doc.value("scenarios", json::array())) {
    Scenario s = ScenarioFromJson(sj);
    scenarios_[s.id] = std::move(s);
  }
}

void ScenarioStore::PersistLocked() const {
  if (path_.empty()) return;
  json doc = {{"next_id", next_id_}, {"scenarios", json::array()}};
  for (const auto& [id, s] : scenarios_) doc["scenarios"].push_back(ScenarioToJson(s));
  WriteFileAtomically(path_, doc.dump(1) + "\n");
}

Scenario ScenarioStore::Create(Scenario scenario) {
  std::lock_guard<std::mutex> lock(mu_);
  char id[32];
  std::snprintf(id, sizeof(id), "scn-%06lld", static_cast<long long>(next_id_++));
  scenario.id = id;
  scenario.revision = 1;
  scenarios_[scenario.id] = scenario;
  PersistLocked();
  return scenario;
}

std::optional<Scenario> ScenarioStore::Get(const std::string& id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = scenarios_.find(id);
  if (it == scenarios_.end()) return std::nullopt;
  return it->second;
}

std::vector<Scenario> ScenarioStore::List() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<Scenario> out;
  for (const auto& [id, s] : scenarios_) out.push_back(s);
  return out;
}

ScenarioStore::UpdateResult ScenarioStore::Update(
    const std::string& id, std::optional<std::int64_t> expected_revision,
    const std::function<void(Scenario&)>& mutate) {
  std::lock_guard<std::mutex> lock(mu_);
  UpdateResult result;
  auto it = scenarios_.find(id);
  if (it == scenarios_.end()) {
    result.status = UpdateStatus::kNotFound;
    return result;
  }
  result.current_revision = it->second.revision;
  if (expected_revision && *expected_revision != it->second.revision) {
    result.status = UpdateStatus::kConflict;
    result.scenario = it->second;
    return result;
  }
  Scenario candidate = it->second;
  mutate(candidate);
  candidate.id = id;
  result.violations = ValidateScenario(candidate);
  if (!result.violations.empty()) {
    result.status = UpdateStatus::kInvalid;
    return result;
  }
  candidate.revision = it->second.revision + 1;
  it->second = candidate;
  PersistLocked();
  result.scenario = std::move(candidate);
  return result;
}

ApiResponse AllocationService::ListScenarios() const {
  ApiResponse r;
  r.body = json::array();
  for (const auto& s : store_.List()) {
    r.body.push_back({{"id", s.id},
                      {"name", s.name},
                      {"revision", s.revision},
                      {"supply", s.supply},
                      {"regions", s.regions.size()}});
  }
  return r;
}

ApiResponse AllocationService::CreateScenario(const std::string& body) {
  ApiResponse error;
  auto doc = ParseBody(body, error);
  if (!doc) return error;
  Scenario scenario;
  try {
    scenario = ScenarioFromJson(*doc);
  } catch (const SchemaError& e) {
    return Error(400, e.what());
  }
  const auto violations = ValidateScenario(scenario);
  if (!violations.empty()) return InvalidScenario(violations);
  return WithScenario(201, store_.Create(std::move(scenario)));
}

ApiResponse AllocationService::GetScenario(const std::string& id) const {
  auto s = store_.Get(id);
  if (!s) return Error(404, "unknown scenario " + id);
  return WithScenario(200, *s);
}

ApiResponse AllocationService::PatchScenario(const std::string& id,
                                             const std::string& body,
                                             const std::string& if_match) {
  ApiResponse error;
  auto doc = ParseBody(body, error);
  if (!doc) return error;
  if (!doc->is_object()) return Error(400, "patch body must be a JSON object");
  std::optional<std::int64_t> expected;
  if (!if_match.empty() && if_match != "*") {
    expected = ParseRevisionTag(if_match);
    if (!expected) return Error(400, "malformed If-Match header");
  }
  ScenarioStore::UpdateResult result;
  try {
    result = store_.Update(id, expected, [&](Scenario& s) { ApplyPatch(*doc, s); });
  } catch (const PatchError& e) {
    return Error(400, e.what());
  }
  switch (result.status) {
    case ScenarioStore::UpdateStatus::kNotFound:
      return Error(404, "unknown scenario " + id);
    case ScenarioStore::UpdateStatus::kConflict:
      return Error(409, "revision mismatch",
                   {{"current_revision", result.current_revision}});
    case ScenarioStore::UpdateStatus::kInvalid:
      return InvalidScenario(result.violations);
    case ScenarioStore::UpdateStatus::kOk:
      break;
  }
  return WithScenario(200, result.scenario);
}

ApiResponse AllocationService::SolveScenario(const std::string& id,
                                             const std::string& body) const {
  auto s = store_.Get(id);
  if (!s) return Error(404, "unknown scenario " + id);
  ApiResponse error;
  auto doc = ParseBody(body, error);
  if (!doc) return error;
  PipelineOptions options;
  try {
    options = OptionsFromJson(*doc, DefaultOptions(*s));
  } catch (const SchemaError& e) {
    return Error(400, e.what());
  }
  try {
    ApiResponse r;
    r.body = PlanToJson(RunAllocation(*s, options));
    r.headers["ETag"] = "\"" + std::to_string(s->revision) + "\"";
    return r;
  } catch (const StageError& e) {
    return Error(422, e.what(), {{"stage", e.stage()}});
  }
}

ApiResponse AllocationService::GetForecast(const std::string& id,
                                           std::optional<int> horizon) const {
  auto s = store_.Get(id);
  if (!s) return Error(404, "unknown scenario " + id);
  const int h = horizon.value_or(s->config.horizon);
  if (h < 1) return Error(400, "horizon must be >= 1");
  const SmoothingParams params{s->config.level_smoothing, s->config.trend_smoothing};
  json rows = json::array();
  json short_history = json::array();
  for (const auto& region : s->regions) {
    if (region.history.size() < 2) {
      short_history.push_back(region.name);
      continue;
    }
    ForecastResult f = FitForecast(region.history, h, params);
    f.region = region.name;
    rows.push_back(ForecastToJson(f));
  }
  if (!short_history.empty()) {
    return Error(422, "insufficient history", {{"regions", short_history}});
  }
  ApiResponse r;
  r.body = std::move(rows);
  return r;
}

void AllocationService::Mount(httplib::Server& server, const std::string& cors_origin) {
  server.set_default_headers({{"Access-Control-Allow-Origin", cors_origin},
                              {"Access-Control-Expose-Headers", "ETag"}});
  server.Options(R"(/api/v1/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, PATCH, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type, If-Match");
    res.status = 204;
  });
  server.Get("/api/v1/scenarios", [this](const httplib::Request&, httplib::Response& res) {
    Send(res, ListScenarios());
  });
  server.Post("/api/v1/scenarios", [this](const httplib::Request& req, httplib::Response& res) {
    Send(res, CreateScenario(req.body));
  });
  server.Get(R"(/api/v1/scenarios/([^/]+))",
             [this](const httplib::Request& req, httplib::Response& res) {
               Send(res, GetScenario(req.matches[1]));
             });
  server.Patch(R"(/api/v1/scenarios/([^/]+))",
               [this](const httplib::Request& req, httplib::Response& res) {
                 Send(res, PatchScenario(req.matches[1], req.body,
                                         req.get_header_value("If-Match")));
               });
  server.Post(R"(/api/v1/scenarios/([^/]+)/solve)",
              [this](const httplib::Request& req, httplib::Response& res) {
                Send(res, SolveScenario(req.matches[1], req.body));
              });
  server.Get(R"(/api/v1/scenarios/([^/]+)/forecast)",
             [this](const httplib::Request& req, httplib::Response& res) {
               std::optional<int> horizon;
               if (req.has_param("horizon")) {
                 const std::string text = req.get_param_value("horizon");
                 int value = 0;
                 auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
                 if (ec != std::errc() || ptr != text.data() + text.size()) {
                   Send(res, Error(400, "horizon must be an integer"));
                   return;
                 }
                 horizon = value;
               }
               Send(res, GetForecast(req.matches[1], horizon));
             });
}

}  // namespace hralloc
