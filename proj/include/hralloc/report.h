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

#ifndef HRALLOC_REPORT_H_
#define HRALLOC_REPORT_H_

#include <string>
#include <vector>

#include "hralloc/forecast.h"
#include "json.hpp"

namespace hralloc {

/// Two decimals, half away from zero on the shortest decimal form of the
/// value, so 1.005 renders as "1.01".
std::string FormatFixed2(double value);

// Plan renderers take a document that passed ValidatePlanJson.
std::string RenderPlanText(const nlohmann::json& plan);
std::string RenderPlanMarkdown(const nlohmann::json& plan);
std::string RenderPlanCsv(const nlohmann::json& plan);

std::string RenderForecastText(const std::vector<ForecastResult>& rows);
std::string RenderForecastCsv(const std::vector<ForecastResult>& rows);

}  // namespace hralloc

#endif  // HRALLOC_REPORT_H_
