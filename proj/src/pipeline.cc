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

#include "hralloc/pipeline.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hralloc/forecast.h"
#include "hralloc/solver.h"

namespace hralloc {

namespace {

double Sum(std::span<const double> values) {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

template <typename T>
std::vector<T> Gather(std::span<const T> values,
                      const std::vector<std::size_t>& indices) {
  std::vector<T> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(values[i]);
  return out;
}

// Runs `fn`, rethrowing anything that is not already a StageError as one
// tagged with `stage`.
template <typename Fn>
auto InStage(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

std::vector<double> RemainingIdeals(std::span<const double> predicted,
                                    double remaining_supply) {
  return IdealAllocation(IdealWeights(predicted), remaining_supply);
}

AllocationPlan EmptyPlan(const Scenario& scenario,
                         const PipelineOptions& options) {
  AllocationPlan plan;
  plan.resource_name = scenario.resource_name;
  plan.unit = scenario.unit;
  plan.level = options.level;
  plan.redistribution = options.redistribution;
  plan.conservation_total = scenario.supply;
  for (const auto& r : scenario.regions) {
    plan.regions.push_back(r.name);
    plan.demands.push_back(r.demand);
  }
  plan.stage_final.assign(scenario.regions.size(), 0.0);
  plan.capped.assign(scenario.regions.size(), false);
  return plan;
}

void RequireValid(const Scenario& scenario) {
  const auto violations = ValidateScenario(scenario);
  if (violations.empty()) return;
  std::string message = "invalid scenario:";
  for (const auto& v : violations) {
    message += " ";
    if (!v.region.empty()) message += v.region + ".";
    message += v.field + ": " + v.message + ";";
  }
  throw StageError("validate", message);
}

void CheckConservation(const AllocationPlan& plan) {
  const double allocated = Sum(plan.stage_final) + plan.surplus;
  const double total = plan.conservation_total;
  if (std::abs(allocated - total) > kConservationTolerance * std::max(1.0, total)) {
    throw StageError("redistribute",
                     "conservation violated: allocated " +
                         std::to_string(allocated) + " of " +
                         std::to_string(total));
  }
}

// Writes capped amounts for `indices` back into the plan.
void ApplyCap(AllocationPlan& plan, const std::vector<std::size_t>& indices,
              const CapResult& cap) {
  for (std::size_t k = 0; k < indices.size(); ++k) {
    plan.stage_final[indices[k]] = cap.amounts[k];
    plan.capped[indices[k]] = cap.capped[k];
  }
}

AllocationPlan RunDistrict(const Scenario& scenario,
                           const PipelineOptions& options) {
  AllocationPlan plan = EmptyPlan(scenario, options);
  const double total = scenario.supply;
  std::vector<std::size_t> positive;
  for (std::size_t i = 0; i < scenario.regions.size(); ++i) {
    if (scenario.regions[i].demand > 0.0) {
      positive.push_back(i);
    } else {
      plan.excluded.push_back(i);
    }
  }
  plan.stage_prepass.remaining = positive;
  plan.stage_prepass.remaining_supply = total;
  for (std::size_t i : positive) {
    plan.stage_prepass.balance_demand += scenario.regions[i].demand;
  }
  if (positive.empty()) {
    plan.surplus = total;
    CheckConservation(plan);
    return plan;
  }

  std::vector<double> demands, severities;
  for (std::size_t i : positive) {
    demands.push_back(scenario.regions[i].demand);
    severities.push_back(scenario.regions[i].severity);
  }
  InStage("optimize", [&] {
    DistrictProblem problem(demands, severities, total);
    plan.stage_optimized = SolveDistrictAllocation(problem);
    plan.kkt_residual = LagrangianResidual(problem, plan.stage_optimized);
    return 0;
  });
  plan.optimized_regions = positive;

  const CapResult cap = InStage("redistribute", [&] {
    return CapAndRedistribute(plan.stage_optimized.amounts, demands,
                              options.redistribution);
  });
  ApplyCap(plan, positive, cap);
  plan.surplus = cap.surplus;
  CheckConservation(plan);
  return plan;
}

AllocationPlan RunProportional(const Scenario& scenario,
                               const PipelineOptions& options) {
  AllocationPlan plan = EmptyPlan(scenario, options);
  const double total = scenario.supply;
  plan.predicted = PredictedMaxima(scenario, options.use_fixture_predicted);
  InStage("ideal", [&] {
    plan.weights = IdealWeights(plan.predicted);
    plan.stage_ideal = IdealAllocation(plan.weights, total);
    return 0;
  });
  std::vector<std::size_t> all(scenario.regions.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  plan.stage_prepass.remaining = all;
  plan.stage_prepass.remaining_supply = total;
  plan.stage_prepass.balance_demand = Sum(plan.demands);
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (plan.demands[i] == 0.0) plan.excluded.push_back(i);
  }

  const CapResult cap = InStage("redistribute", [&] {
    return CapAndRedistribute(plan.stage_ideal, plan.demands,
                              options.redistribution);
  });
  ApplyCap(plan, all, cap);
  plan.surplus = cap.surplus;
  CheckConservation(plan);
  return plan;
}

}  // namespace

PrepassResult PrepassFullAllocation(std::span<const double> demands,
                                    std::span<const double> ideals,
                                    double total) {
  if (demands.size() != ideals.size()) {
    throw std::invalid_argument("demands and ideals must have the same length");
  }
  PrepassResult out;
  double granted = 0.0;
  for (std::size_t i = 0; i < demands.size(); ++i) {
    if (demands[i] <= ideals[i]) {
      out.satisfied.push_back(i);
      granted += demands[i];
    } else {
      out.remaining.push_back(i);
      out.balance_demand += demands[i];
    }
  }
  // Satisfied demands are bounded by their ideals, which sum to the total;
  // only externally supplied ideals can break this.
  if (granted > total * (1.0 + 1e-12)) {
    throw std::invalid_argument("supply exhausted by pre-pass");
  }
  out.remaining_supply = std::max(0.0, total - granted);
  return out;
}

SolverResult ReoptimizeRemaining(
    std::span<const double> demands, std::span<const double> predicted,
    std::span<const double> severities, double remaining_supply,
    std::optional<std::span<const double>> ideal_override) {
  if (!(remaining_supply > 0.0)) {
    throw std::invalid_argument("remaining supply must be > 0");
  }
  if (demands.empty()) throw std::invalid_argument("empty problem");
  std::vector<double> ideals =
      ideal_override ? std::vector<double>(ideal_override->begin(),
                                           ideal_override->end())
                     : RemainingIdeals(predicted, remaining_supply);
  AllocationProblem problem({demands.begin(), demands.end()}, std::move(ideals),
                            {severities.begin(), severities.end()},
                            remaining_supply);
  return SolveCenterAllocation(problem);
}

CapResult CapAndRedistribute(std::span<const double> amounts,
                             std::span<const double> demands,
                             RedistributionPolicy policy) {
  if (amounts.size() != demands.size()) {
    throw std::invalid_argument("amounts and demands must have the same length");
  }
  const std::size_t n = amounts.size();
  CapResult out;
  out.amounts.assign(amounts.begin(), amounts.end());
  out.capped.assign(n, false);

  // Each pass caps at least one new region, so at most n passes run.
  while (true) {
    double pool = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!out.capped[i] && out.amounts[i] > demands[i]) {
        pool += out.amounts[i] - demands[i];
        out.amounts[i] = demands[i];
        out.capped[i] = true;
      }
    }
    if (pool == 0.0) break;
    ++out.passes;

    std::size_t open = 0;
    double open_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (out.capped[i]) continue;
      ++open;
      open_total += out.amounts[i];
    }
    if (open == 0) {
      out.surplus += pool;
      break;
    }
    const bool equal_split =
        policy == RedistributionPolicy::kEqual || !(open_total > 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (out.capped[i]) continue;
      out.amounts[i] += equal_split
                            ? pool / static_cast<double>(open)
                            : pool * (out.amounts[i] / open_total);
    }
  }
  return out;
}

std::vector<double> ProportionalAllocation(std::span<const double> predicted,
                                           double total) {
  return IdealAllocation(IdealWeights(predicted), total);
}

PipelineOptions DefaultOptions(const Scenario& scenario) {
  PipelineOptions options;
  options.redistribution = scenario.config.redistribution;
  options.reevaluate_prepass = scenario.config.reevaluate_prepass;
  return options;
}

std::vector<double> PredictedMaxima(const Scenario& scenario,
                                    bool use_fixture_predicted) {
  std::vector<double> out;
  out.reserve(scenario.regions.size());
  if (use_fixture_predicted) {
    for (const auto& r : scenario.regions) {
      if (!r.predicted_max) {
        throw StageError("forecast",
                         "no fixture predicted value for region " + r.name);
      }
      out.push_back(*r.predicted_max);
    }
    return out;
  }

  const SmoothingParams params{scenario.config.level_smoothing,
                               scenario.config.trend_smoothing};
  std::vector<std::string> short_history;
  for (const auto& r : scenario.regions) {
    if (r.history.size() < 2) {
      short_history.push_back(r.name);
      out.push_back(0.0);
      continue;
    }
    out.push_back(InStage("forecast", [&] {
      return FitForecast(r.history, scenario.config.horizon, params).horizon_max;
    }));
  }
  if (!short_history.empty()) {
    std::string message = "insufficient history:";
    for (std::size_t i = 0; i < short_history.size(); ++i) {
      message += (i == 0 ? " " : ", ") + short_history[i];
    }
    throw StageError("forecast", message);
  }
  return out;
}

AllocationPlan RunCenterPipeline(const Scenario& scenario,
                                 const PipelineOptions& options) {
  RequireValid(scenario);
  AllocationPlan plan = EmptyPlan(scenario, options);
  plan.level = AllocationLevel::kCenter;
  const double total = scenario.supply;

  plan.predicted = PredictedMaxima(scenario, options.use_fixture_predicted);
  InStage("ideal", [&] {
    plan.weights = IdealWeights(plan.predicted);
    plan.stage_ideal = IdealAllocation(plan.weights, total);
    return 0;
  });

  plan.stage_prepass = InStage("prepass", [&] {
    PrepassResult pre =
        PrepassFullAllocation(plan.demands, plan.stage_ideal, total);
    while (options.reevaluate_prepass && !pre.remaining.empty() &&
           pre.remaining_supply > 0.0) {
      const auto rem_pred = Gather<double>(plan.predicted, pre.remaining);
      if (!(Sum(rem_pred) > 0.0)) break;
      const auto rem_ideal = RemainingIdeals(rem_pred, pre.remaining_supply);
      std::vector<std::size_t> still_remaining;
      bool changed = false;
      for (std::size_t k = 0; k < pre.remaining.size(); ++k) {
        const std::size_t i = pre.remaining[k];
        if (plan.demands[i] <= rem_ideal[k]) {
          pre.satisfied.push_back(i);
          pre.remaining_supply -= plan.demands[i];
          pre.balance_demand -= plan.demands[i];
          changed = true;
        } else {
          still_remaining.push_back(i);
        }
      }
      pre.remaining = std::move(still_remaining);
      pre.remaining_supply = std::max(0.0, pre.remaining_supply);
      if (!changed) break;
    }
    std::sort(pre.satisfied.begin(), pre.satisfied.end());
    return pre;
  });

  for (std::size_t i : plan.stage_prepass.satisfied) {
    plan.stage_final[i] = plan.demands[i];
    if (plan.demands[i] == 0.0) plan.excluded.push_back(i);
  }

  std::vector<std::size_t> optimizable, zero_ideal;
  for (std::size_t i : plan.stage_prepass.remaining) {
    (plan.predicted[i] > 0.0 ? optimizable : zero_ideal).push_back(i);
  }
  double leftover = plan.stage_prepass.remaining_supply;

  if (!optimizable.empty() && leftover > 0.0) {
    const auto demands = Gather<double>(plan.demands, optimizable);
    const auto predicted = Gather<double>(plan.predicted, optimizable);
    std::vector<double> severities;
    std::vector<double> override_ideals;
    for (std::size_t i : optimizable) {
      const RegionRecord& r = scenario.regions[i];
      severities.push_back(r.severity);
      if (options.use_ideal_override) {
        if (!r.ideal_override || !(*r.ideal_override > 0.0)) {
          throw StageError("optimize", "no ideal override for region " + r.name);
        }
        override_ideals.push_back(*r.ideal_override);
      }
    }
    InStage("optimize", [&] {
      plan.optimized_ideals = options.use_ideal_override
                                  ? override_ideals
                                  : RemainingIdeals(predicted, leftover);
      AllocationProblem problem(demands, plan.optimized_ideals, severities,
                                leftover);
      plan.stage_optimized = ReoptimizeRemaining(
          demands, predicted, severities, leftover,
          options.use_ideal_override
              ? std::optional<std::span<const double>>(override_ideals)
              : std::nullopt);
      plan.kkt_residual = LagrangianResidual(problem, plan.stage_optimized);
      return 0;
    });
    plan.optimized_regions = optimizable;

    const CapResult cap = InStage("redistribute", [&] {
      return CapAndRedistribute(plan.stage_optimized.amounts, demands,
                                options.redistribution);
    });
    ApplyCap(plan, optimizable, cap);
    leftover = cap.surplus;
  }

  // Zero-ideal fallback: leftover supply in proportion to demand, capped.
  if (!zero_ideal.empty()) {
    double demand_sum = 0.0;
    for (std::size_t i : zero_ideal) demand_sum += plan.demands[i];
    const double share = std::min(1.0, leftover / demand_sum);
    double granted = 0.0;
    for (std::size_t i : zero_ideal) {
      plan.stage_final[i] = plan.demands[i] * share;
      plan.capped[i] = share >= 1.0;
      granted += plan.stage_final[i];
      plan.excluded.push_back(i);
    }
    leftover = std::max(0.0, leftover - granted);
  }
  std::sort(plan.excluded.begin(), plan.excluded.end());
  plan.surplus = leftover;
  CheckConservation(plan);
  return plan;
}

AllocationPlan RunAllocation(const Scenario& scenario,
                             const PipelineOptions& options) {
  switch (options.level) {
    case AllocationLevel::kCenter:
      return RunCenterPipeline(scenario, options);
    case AllocationLevel::kDistrict:
      RequireValid(scenario);
      return RunDistrict(scenario, options);
    case AllocationLevel::kProportional:
      RequireValid(scenario);
      return RunProportional(scenario, options);
  }
  return RunCenterPipeline(scenario, options);
}

}  // namespace hralloc
