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

// HTTP API for scenario what-if sessions.
//
//   GET    /api/v1/scenarios                 list
//   POST   /api/v1/scenarios                 create (201)
//   GET    /api/v1/scenarios/{id}            fetch
//   PATCH  /api/v1/scenarios/{id}            partial update, If-Match revision
//   POST   /api/v1/scenarios/{id}/solve      run the allocation (read-only)
//   GET    /api/v1/scenarios/{id}/forecast   per-region forecasts
//
// Scenario responses carry `ETag: "<revision>"`. Solve responses are the
// same alloc-plan/1 document the CLI prints for `allocate --output json`.

#ifndef HRALLOC_SERVICE_H_
#define HRALLOC_SERVICE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hralloc/model.h"
#include "json.hpp"

namespace httplib {
class Server;
}

namespace hralloc {

/// Single-file JSON store. Every write rewrites the file through a temporary
/// and rename. Ids are sequential and survive restarts.
class ScenarioStore {
 public:
  /// An empty path keeps everything in memory.
  explicit ScenarioStore(std::filesystem::path path = {});

  Scenario Create(Scenario scenario);
  std::optional<Scenario> Get(const std::string& id) const;
  std::vector<Scenario> List() const;

  enum class UpdateStatus { kOk, kNotFound, kConflict, kInvalid };
  struct UpdateResult {
    UpdateStatus status = UpdateStatus::kOk;
    Scenario scenario;
    std::vector<Violation> violations;
    std::int64_t current_revision = 0;
  };

  /// Applies `mutate` to a copy and commits it with revision + 1 when the
  /// result validates and `expected_revision` (if given) is current.
  /// Exceptions thrown by `mutate` propagate and leave the store unchanged.
  UpdateResult Update(const std::string& id,
                      std::optional<std::int64_t> expected_revision,
                      const std::function<void(Scenario&)>& mutate);

 private:
  void PersistLocked() const;

  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::map<std::string, Scenario> scenarios_;
  std::int64_t next_id_ = 1;
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
  std::map<std::string, std::string> headers;
};

class AllocationService {
 public:
  explicit AllocationService(ScenarioStore& store) : store_(store) {}

  ApiResponse ListScenarios() const;
  ApiResponse CreateScenario(const std::string& body);
  ApiResponse GetScenario(const std::string& id) const;
  ApiResponse PatchScenario(const std::string& id, const std::string& body,
                            const std::string& if_match);
  ApiResponse SolveScenario(const std::string& id, const std::string& body) const;
  ApiResponse GetForecast(const std::string& id,
                          std::optional<int> horizon) const;

  /// Registers the routes plus CORS headers for `cors_origin`.
  void Mount(httplib::Server& server, const std::string& cors_origin = "*");

 private:
  ScenarioStore& store_;
};

}  // namespace hralloc

#endif  // HRALLOC_SERVICE_H_
