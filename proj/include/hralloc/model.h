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

// Domain types shared by the forecasting, solver, and pipeline layers.
//
// All quantities are real-valued amounts of a single declared resource unit
// (metric tonnes in the oxygen case study). Nothing in the engine rounds;
// rounding to two decimals happens only when rendering.

#ifndef HRALLOC_MODEL_H_
#define HRALLOC_MODEL_H_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hralloc {

using Date = std::chrono::sys_days;

// Parses "YYYY-MM-DD". Returns nullopt for anything else, including
// calendar-invalid dates such as 2021-02-30.
std::optional<Date> ParseIsoDate(std::string_view text);
std::string FormatIsoDate(Date date);

struct CaseObservation {
  Date date;
  double active = 0.0;

  bool operator==(const CaseObservation&) const = default;
};

// Time-ordered active-case counts for one region.
using CaseHistory = std::vector<CaseObservation>;

struct RegionRecord {
  std::string name;
  double demand = 0.0;
  double severity = 1.0;
  CaseHistory history;
  // Externally supplied horizon maximum. Used instead of the forecaster when
  // a solve asks for fixture predictions.
  std::optional<double> predicted_max;
  // Externally supplied ideal amount for the re-optimization stage.
  std::optional<double> ideal_override;

  bool operator==(const RegionRecord&) const = default;
};

enum class RedistributionPolicy { kEqual, kProportional };
enum class AllocationLevel { kCenter, kDistrict, kProportional };

std::string_view ToString(RedistributionPolicy policy);
std::string_view ToString(AllocationLevel level);
std::optional<RedistributionPolicy> ParseRedistributionPolicy(std::string_view);
std::optional<AllocationLevel> ParseAllocationLevel(std::string_view);

struct ScenarioConfig {
  int horizon = 7;
  double level_smoothing = 0.8;
  double trend_smoothing = 0.2;
  RedistributionPolicy redistribution = RedistributionPolicy::kProportional;
  // Re-check pre-pass membership against renormalized ideals until stable.
  bool reevaluate_prepass = false;
  double constraint_tolerance = 1e-9;
  double oracle_tolerance = 1e-6;

  bool operator==(const ScenarioConfig&) const = default;
};

struct Scenario {
  std::string id;
  std::string name;
  std::string resource_name = "oxygen";
  std::string unit = "MT";
  double supply = 0.0;
  std::vector<RegionRecord> regions;
  ScenarioConfig config;
  std::int64_t revision = 0;

  const RegionRecord* FindRegion(std::string_view region_name) const;
  RegionRecord* FindRegion(std::string_view region_name);

  bool operator==(const Scenario&) const = default;
};

struct Violation {
  std::string region;  // empty for scenario-level fields
  std::string field;
  std::string message;

  bool operator==(const Violation&) const = default;
};

// Checks every type invariant. The report is empty iff the scenario is valid.
std::vector<Violation> ValidateScenario(const Scenario& scenario);

// A center-level solver instance. Construction enforces equal lengths and
// strictly positive entries, so a live object is always solvable.
class AllocationProblem {
 public:
  AllocationProblem(std::vector<double> demands, std::vector<double> ideals,
                    std::vector<double> severities, double total);

  std::size_t size() const { return demands_.size(); }
  std::span<const double> demands() const { return demands_; }
  std::span<const double> ideals() const { return ideals_; }
  std::span<const double> severities() const { return severities_; }
  double total() const { return total_; }

 private:
  std::vector<double> demands_;
  std::vector<double> ideals_;
  std::vector<double> severities_;
  double total_;
};

// District-to-facility instance: demand term only.
class DistrictProblem {
 public:
  DistrictProblem(std::vector<double> demands, std::vector<double> severities,
                  double total);

  std::size_t size() const { return demands_.size(); }
  std::span<const double> demands() const { return demands_; }
  std::span<const double> severities() const { return severities_; }
  double total() const { return total_; }

 private:
  std::vector<double> demands_;
  std::vector<double> severities_;
  double total_;
};

struct SolverResult {
  std::vector<double> fractions;
  double multiplier = 0.0;
  std::vector<double> amounts;
  // Indices clamped to zero by the nonnegativity loop, ascending.
  std::vector<std::size_t> active_set;
};

struct PrepassResult {
  std::vector<std::size_t> satisfied;  // indices granted full demand
  std::vector<std::size_t> remaining;
  double remaining_supply = 0.0;
  double balance_demand = 0.0;
};

// Staged result of one allocation run. Every per-region vector is indexed
// like `regions`; the optimized stage is indexed like `optimized_regions`.
struct AllocationPlan {
  std::string resource_name;
  std::string unit;
  AllocationLevel level = AllocationLevel::kCenter;
  RedistributionPolicy redistribution = RedistributionPolicy::kProportional;
  double conservation_total = 0.0;

  std::vector<std::string> regions;
  std::vector<double> demands;

  // Empty at district level, which has no forecast-driven share.
  std::vector<double> predicted;
  std::vector<double> weights;
  std::vector<double> stage_ideal;

  PrepassResult stage_prepass;

  std::vector<std::size_t> optimized_regions;
  std::vector<double> optimized_ideals;
  SolverResult stage_optimized;
  double kkt_residual = 0.0;

  std::vector<double> stage_final;
  std::vector<bool> capped;
  double surplus = 0.0;
  // Regions left out of the optimizer: zero demand or zero ideal share.
  std::vector<std::size_t> excluded;
};

// Base for errors raised by a named pipeline stage ("forecast", "ideal",
// "prepass", "optimize", "redistribute").
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message)
      : std::runtime_error(message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace hralloc

#endif  // HRALLOC_MODEL_H_
