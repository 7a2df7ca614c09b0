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

#include "hralloc/model.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <utility>

namespace hralloc {

namespace {

bool ParseDigits(std::string_view text, int& out) {
  if (text.empty()) return false;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

void RequirePositive(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(what) +
                                  " entries must be finite and > 0");
    }
  }
}

}  // namespace

std::optional<Date> ParseIsoDate(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    return std::nullopt;
  }
  int y = 0, m = 0, d = 0;
  if (!ParseDigits(text.substr(0, 4), y) || !ParseDigits(text.substr(5, 2), m) ||
      !ParseDigits(text.substr(8, 2), d)) {
    return std::nullopt;
  }
  std::chrono::year_month_day ymd{std::chrono::year{y},
                                  std::chrono::month{static_cast<unsigned>(m)},
                                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date{ymd};
}

std::string FormatIsoDate(Date date) {
  std::chrono::year_month_day ymd{date};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

std::string_view ToString(RedistributionPolicy policy) {
  return policy == RedistributionPolicy::kEqual ? "equal" : "proportional";
}

std::string_view ToString(AllocationLevel level) {
  switch (level) {
    case AllocationLevel::kCenter:
      return "center";
    case AllocationLevel::kDistrict:
      return "district";
    case AllocationLevel::kProportional:
      return "proportional";
  }
  return "center";
}

std::optional<RedistributionPolicy> ParseRedistributionPolicy(
    std::string_view text) {
  if (text == "equal") return RedistributionPolicy::kEqual;
  if (text == "proportional") return RedistributionPolicy::kProportional;
  return std::nullopt;
}

std::optional<AllocationLevel> ParseAllocationLevel(std::string_view text) {
  if (text == "center") return AllocationLevel::kCenter;
  if (text == "district") return AllocationLevel::kDistrict;
  if (text == "proportional") return AllocationLevel::kProportional;
  return std::nullopt;
}

const RegionRecord* Scenario::FindRegion(std::string_view region_name) const {
  for (const auto& r : regions) {
    if (r.name == region_name) return &r;
  }
  return nullptr;
}

RegionRecord* Scenario::FindRegion(std::string_view region_name) {
  for (auto& r : regions) {
    if (r.name == region_name) return &r;
  }
  return nullptr;
}

std::vector<Violation> ValidateScenario(const Scenario& scenario) {
  std::vector<Violation> report;
  auto add = [&report](std::string region, std::string field,
                       std::string message) {
    report.push_back({std::move(region), std::move(field), std::move(message)});
  };

  if (!(scenario.supply > 0.0) || !std::isfinite(scenario.supply)) {
    add("", "supply", "supply must be > 0");
  }
  if (scenario.regions.empty()) add("", "regions", "at least one region is required");
  const ScenarioConfig& cfg = scenario.config;
  if (cfg.horizon < 1) add("", "config.horizon", "horizon must be >= 1");
  if (!(cfg.level_smoothing > 0.0 && cfg.level_smoothing <= 1.0)) {
    add("", "config.level_smoothing", "level smoothing must be in (0, 1]");
  }
  if (!(cfg.trend_smoothing > 0.0 && cfg.trend_smoothing <= 1.0)) {
    add("", "config.trend_smoothing", "trend smoothing must be in (0, 1]");
  }

  std::set<std::string> seen;
  std::set<std::string> reported_dupes;
  for (const auto& r : scenario.regions) {
    if (r.name.empty()) add(r.name, "name", "region name must not be empty");
    if (!seen.insert(r.name).second && reported_dupes.insert(r.name).second) {
      add(r.name, "name", "duplicate region name \"" + r.name + "\"");
    }
    if (!(r.demand >= 0.0) || !std::isfinite(r.demand)) {
      add(r.name, "demand", "demand must be >= 0");
    }
    if (!(r.severity > 0.0) || !std::isfinite(r.severity)) {
      add(r.name, "severity", "severity must be > 0");
    }
    if (r.predicted_max && !(*r.predicted_max >= 0.0)) {
      add(r.name, "predicted_max", "predicted maximum must be >= 0");
    }
    if (r.ideal_override && !(*r.ideal_override >= 0.0)) {
      add(r.name, "ideal_override", "ideal override must be >= 0");
    }
    for (std::size_t i = 0; i < r.history.size(); ++i) {
      if (!(r.history[i].active >= 0.0)) {
        add(r.name, "history",
            "active count must be >= 0 on " + FormatIsoDate(r.history[i].date));
      }
      if (i > 0 && !(r.history[i - 1].date < r.history[i].date)) {
        add(r.name, "history", "history dates must be strictly increasing");
        break;
      }
    }
  }
  return report;
}

AllocationProblem::AllocationProblem(std::vector<double> demands,
                                     std::vector<double> ideals,
                                     std::vector<double> severities,
                                     double total)
    : demands_(std::move(demands)),
      ideals_(std::move(ideals)),
      severities_(std::move(severities)),
      total_(total) {
  if (demands_.empty()) throw std::invalid_argument("empty problem");
  if (ideals_.size() != demands_.size() ||
      severities_.size() != demands_.size()) {
    throw std::invalid_argument(
        "demands, ideals and severities must have the same length");
  }
  RequirePositive(demands_, "demand");
  RequirePositive(ideals_, "ideal");
  RequirePositive(severities_, "severity");
  if (!(total_ > 0.0) || !std::isfinite(total_)) {
    throw std::invalid_argument("total must be finite and > 0");
  }
}

DistrictProblem::DistrictProblem(std::vector<double> demands,
                                 std::vector<double> severities, double total)
    : demands_(std::move(demands)),
      severities_(std::move(severities)),
      total_(total) {
  if (demands_.empty()) throw std::invalid_argument("empty problem");
  if (severities_.size() != demands_.size()) {
    throw std::invalid_argument(
        "demands and severities must have the same length");
  }
  RequirePositive(demands_, "demand");
  RequirePositive(severities_, "severity");
  if (!(total_ > 0.0) || !std::isfinite(total_)) {
    throw std::invalid_argument("total must be finite and > 0");
  }
}

}  // namespace hralloc
