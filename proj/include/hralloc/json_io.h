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

// JSON documents shared by the CLI and the HTTP service: scenarios, forecast
// rows, and the versioned plan schema "alloc-plan/1".

#ifndef HRALLOC_JSON_IO_H_
#define HRALLOC_JSON_IO_H_

#include <stdexcept>
#include <string>
#include <vector>

#include "hralloc/forecast.h"
#include "hralloc/model.h"
#include "hralloc/pipeline.h"
#include "json.hpp"

namespace hralloc {

inline constexpr const char* kPlanSchema = "alloc-plan/1";

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json ScenarioToJson(const Scenario& scenario);
/// `id` and `revision` are optional; everything else except `config` and
/// per-region `severity`, `history`, `predicted_max`, `ideal_override` is
/// required. Errors name the offending JSON path.
Scenario ScenarioFromJson(const nlohmann::json& doc);

nlohmann::json ForecastToJson(const ForecastResult& forecast);

nlohmann::json PlanToJson(const AllocationPlan& plan);
/// Throws SchemaError unless `doc` carries the plan schema tag and every
/// stage key.
void ValidatePlanJson(const nlohmann::json& doc);

/// Solve options as carried in a service request body or CLI flags.
nlohmann::json OptionsToJson(const PipelineOptions& options);
PipelineOptions OptionsFromJson(const nlohmann::json& doc,
                                const PipelineOptions& defaults);

}  // namespace hralloc

#endif  // HRALLOC_JSON_IO_H_
