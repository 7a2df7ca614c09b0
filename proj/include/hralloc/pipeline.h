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

// End-to-end allocation waterfall.
//
// Center level runs five stages:
//   1. ideal     horizon maxima -> weights -> ideal amounts A_i = w_i T
//   2. prepass   regions with D_i <= A_i receive their full demand
//   3. optimize  the remaining supply T' is split by the center solver with
//                ideals renormalized over the remaining regions
//   4. cap       amounts above demand are clamped and the excess water-filled
//                over the uncapped regions
//   5. fallback  regions with zero ideal share take leftover supply in
//                proportion to demand, up to demand
// District level solves the demand-only problem and caps. Proportional level
// splits supply by horizon maxima and caps.

#ifndef HRALLOC_PIPELINE_H_
#define HRALLOC_PIPELINE_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hralloc/model.h"

namespace hralloc {

inline constexpr double kConservationTolerance = 1e-6;

PrepassResult PrepassFullAllocation(std::span<const double> demands,
                                    std::span<const double> ideals,
                                    double total);

/// Recomputes ideals over the remaining regions as T' p_i / sum(p) and calls
/// the center solver. When `ideal_override` is given it is used verbatim.
SolverResult ReoptimizeRemaining(
    std::span<const double> demands, std::span<const double> predicted,
    std::span<const double> severities, double remaining_supply,
    std::optional<std::span<const double>> ideal_override = std::nullopt);

struct CapResult {
  std::vector<double> amounts;
  std::vector<bool> capped;
  double surplus = 0.0;
  std::size_t passes = 0;
};

CapResult CapAndRedistribute(std::span<const double> amounts,
                             std::span<const double> demands,
                             RedistributionPolicy policy);

/// T p_i / sum(p).
std::vector<double> ProportionalAllocation(std::span<const double> predicted,
                                           double total);

struct PipelineOptions {
  AllocationLevel level = AllocationLevel::kCenter;
  RedistributionPolicy redistribution = RedistributionPolicy::kProportional;
  // Take horizon maxima from RegionRecord::predicted_max instead of fitting.
  bool use_fixture_predicted = false;
  // Feed RegionRecord::ideal_override to the re-optimization stage.
  bool use_ideal_override = false;
  bool reevaluate_prepass = false;
};

/// Options derived from a scenario's own config.
PipelineOptions DefaultOptions(const Scenario& scenario);

/// Center-level waterfall. Errors are StageError tagged with the stage.
AllocationPlan RunCenterPipeline(const Scenario& scenario,
                                 const PipelineOptions& options);

/// Dispatches on options.level.
AllocationPlan RunAllocation(const Scenario& scenario,
                             const PipelineOptions& options);

/// Horizon maxima for every region, from fixtures or the forecaster.
std::vector<double> PredictedMaxima(const Scenario& scenario,
                                    bool use_fixture_predicted);

}  // namespace hralloc

#endif  // HRALLOC_PIPELINE_H_
