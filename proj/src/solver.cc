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

#include "hralloc/solver.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

namespace hralloc {

namespace {

// Separable form k_i T^2 a_i^2 - 2 g_i T a_i of either objective.
struct SeparableQuadratic {
  std::vector<double> curvature;  // k_i
  std::vector<double> linear;     // g_i
  double total = 0.0;
};

SeparableQuadratic CenterQuadratic(const AllocationProblem& p) {
  SeparableQuadratic q;
  q.total = p.total();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p.demands()[i];
    const double a = p.ideals()[i];
    const double s = p.severities()[i];
    q.curvature.push_back(s * (1.0 / (d * d) + 1.0 / (a * a)));
    q.linear.push_back(s * (1.0 / d + 1.0 / a));
  }
  return q;
}

SeparableQuadratic DistrictQuadratic(const DistrictProblem& p) {
  SeparableQuadratic q;
  q.total = p.total();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p.demands()[i];
    const double s = p.severities()[i];
    q.curvature.push_back(s / (d * d));
    q.linear.push_back(s / d);
  }
  return q;
}

SolverResult SolveWithClamping(const SeparableQuadratic& q) {
  const std::size_t n = q.curvature.size();
  const double t = q.total;
  // Unconstrained optimum and the fraction's sensitivity to lambda / 2.
  std::vector<double> unconstrained(n), sensitivity(n);
  for (std::size_t i = 0; i < n; ++i) {
    unconstrained[i] = q.linear[i] / (q.curvature[i] * t);
    sensitivity[i] = 1.0 / (q.curvature[i] * t * t);
  }

  std::vector<bool> clamped(n, false);
  std::vector<double> fractions(n, 0.0);
  double half_lambda = 0.0;
  for (std::size_t pass = 0; pass <= n; ++pass) {
    double sum_unconstrained = 0.0;
    double sum_sensitivity = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (clamped[i]) continue;
      sum_unconstrained += unconstrained[i];
      sum_sensitivity += sensitivity[i];
    }
    half_lambda = (sum_unconstrained - 1.0) / sum_sensitivity;

    bool any_negative = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (clamped[i]) {
        fractions[i] = 0.0;
        continue;
      }
      fractions[i] = unconstrained[i] - half_lambda * sensitivity[i];
      if (fractions[i] < 0.0) any_negative = true;
    }
    if (!any_negative) break;
    for (std::size_t i = 0; i < n; ++i) {
      if (!clamped[i] && fractions[i] < 0.0) clamped[i] = true;
    }
  }

  SolverResult result;
  result.fractions = std::move(fractions);
  result.multiplier = 2.0 * half_lambda;
  result.amounts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    result.amounts.push_back(result.fractions[i] * t);
    if (clamped[i]) result.active_set.push_back(i);
  }
  return result;
}

double ResidualFromGradient(const std::vector<double>& gradient,
                            const SolverResult& result) {
  std::vector<bool> clamped(gradient.size(), false);
  for (std::size_t i : result.active_set) {
    if (i < clamped.size()) clamped[i] = true;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < gradient.size(); ++i) {
    if (!clamped[i]) worst = std::max(worst, std::abs(gradient[i]));
  }
  const double sum =
      std::accumulate(result.fractions.begin(), result.fractions.end(), 0.0);
  return worst + std::abs(sum - 1.0);
}

// Objective gradient dJ/da_i as a function of the whole iterate.
using GradientFn = std::function<void(std::span<const double>, std::span<double>)>;

SolverResult AcceleratedProjectedGradient(const GradientFn& gradient,
                                          std::span<const double> curvature,
                                          double total,
                                          const OracleOptions& options) {
  const std::size_t n = curvature.size();
  const double lipschitz = *std::max_element(curvature.begin(), curvature.end());
  const double strong = *std::min_element(curvature.begin(), curvature.end());
  const double step = 1.0 / lipschitz;

  std::vector<double> x(n, 1.0 / static_cast<double>(n));
  std::vector<double> y = x, x_next(n), grad(n), trial(n);
  double momentum = 1.0;
  double certificate = 0.0;

  for (std::size_t k = 0; k < options.max_steps; ++k) {
    gradient(y, grad);
    for (std::size_t i = 0; i < n; ++i) trial[i] = y[i] - step * grad[i];
    x_next = ProjectOntoSimplex(trial);

    double mapping_sq = 0.0;
    double restart_test = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double g = lipschitz * (y[i] - x_next[i]);
      mapping_sq += g * g;
      restart_test += (y[i] - x_next[i]) * (x_next[i] - x[i]);
    }
    certificate = 2.0 * std::sqrt(mapping_sq) / strong;
    if (certificate <= options.tolerance) {
      x = x_next;
      SolverResult result;
      result.fractions = x;
      // Multiplier estimate from the free coordinates: dJ/da_i = -lambda.
      gradient(x, grad);
      double lambda_sum = 0.0;
      std::size_t free_count = 0;
      for (std::size_t i = 0; i < n; ++i) {
        result.amounts.push_back(x[i] * total);
        if (x[i] > 0.0) {
          lambda_sum -= grad[i];
          ++free_count;
        } else {
          result.active_set.push_back(i);
        }
      }
      result.multiplier =
          free_count > 0 ? lambda_sum / static_cast<double>(free_count) : 0.0;
      return result;
    }

    if (restart_test > 0.0) {
      // Momentum is pointing uphill; restart from the projected point.
      momentum = 1.0;
      y = x_next;
    } else {
      const double next_momentum =
          0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
      const double beta = (momentum - 1.0) / next_momentum;
      for (std::size_t i = 0; i < n; ++i) {
        y[i] = x_next[i] + beta * (x_next[i] - x[i]);
      }
      momentum = next_momentum;
    }
    x = x_next;
  }
  throw OracleNonConvergence(x, certificate);
}

}  // namespace

OracleNonConvergence::OracleNonConvergence(std::vector<double> last_iterate,
                                           double residual)
    : std::runtime_error("oracle did not converge: residual " +
                         std::to_string(residual)),
      last_iterate_(std::move(last_iterate)),
      residual_(residual) {}

SolverResult SolveCenterAllocation(const AllocationProblem& problem) {
  return SolveWithClamping(CenterQuadratic(problem));
}

SolverResult SolveDistrictAllocation(const DistrictProblem& problem) {
  return SolveWithClamping(DistrictQuadratic(problem));
}

SolverResult SolveDistrictAllocation(std::span<const double> demands,
                                     std::span<const double> severities,
                                     double total) {
  return SolveDistrictAllocation(DistrictProblem(
      {demands.begin(), demands.end()}, {severities.begin(), severities.end()},
      total));
}

std::vector<double> LagrangianGradient(const AllocationProblem& problem,
                                       const SolverResult& result) {
  const double t = problem.total();
  std::vector<double> out;
  out.reserve(problem.size());
  for (std::size_t i = 0; i < problem.size(); ++i) {
    const double d = problem.demands()[i];
    const double a = problem.ideals()[i];
    const double s = problem.severities()[i];
    const double x = result.fractions[i] * t;
    out.push_back(-2.0 * s / (d * d) * (d - x) * t -
                  2.0 * s / (a * a) * (a - x) * t + result.multiplier);
  }
  return out;
}

std::vector<double> LagrangianGradient(const DistrictProblem& problem,
                                       const SolverResult& result) {
  const double t = problem.total();
  std::vector<double> out;
  out.reserve(problem.size());
  for (std::size_t i = 0; i < problem.size(); ++i) {
    const double d = problem.demands()[i];
    const double s = problem.severities()[i];
    const double x = result.fractions[i] * t;
    out.push_back(-2.0 * s / (d * d) * (d - x) * t + result.multiplier);
  }
  return out;
}

double LagrangianResidual(const AllocationProblem& problem,
                          const SolverResult& result) {
  return ResidualFromGradient(LagrangianGradient(problem, result), result);
}

double LagrangianResidual(const DistrictProblem& problem,
                          const SolverResult& result) {
  return ResidualFromGradient(LagrangianGradient(problem, result), result);
}

std::vector<double> ProjectOntoSimplex(std::span<const double> point) {
  const std::size_t n = point.size();
  if (n == 0) throw std::invalid_argument("cannot project an empty vector");
  std::vector<double> sorted(point.begin(), point.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double running = 0.0;
  double shift = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    running += sorted[j];
    const double candidate = (running - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) shift = candidate;
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::max(point[i] - shift, 0.0);
  return out;
}

SolverResult OracleSolve(const AllocationProblem& problem,
                         const OracleOptions& options) {
  const double t = problem.total();
  const auto demands = problem.demands();
  const auto ideals = problem.ideals();
  const auto severities = problem.severities();
  std::vector<double> curvature;
  for (std::size_t i = 0; i < problem.size(); ++i) {
    const double d = demands[i], a = ideals[i], s = severities[i];
    curvature.push_back(2.0 * s * t * t / (d * d) + 2.0 * s * t * t / (a * a));
  }
  auto gradient = [&](std::span<const double> x, std::span<double> g) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = demands[i], a = ideals[i], s = severities[i];
      g[i] = -2.0 * s * t * (d - x[i] * t) / (d * d) -
             2.0 * s * t * (a - x[i] * t) / (a * a);
    }
  };
  return AcceleratedProjectedGradient(gradient, curvature, t, options);
}

SolverResult OracleSolve(const DistrictProblem& problem,
                         const OracleOptions& options) {
  const double t = problem.total();
  const auto demands = problem.demands();
  const auto severities = problem.severities();
  std::vector<double> curvature;
  for (std::size_t i = 0; i < problem.size(); ++i) {
    curvature.push_back(2.0 * severities[i] * t * t /
                        (demands[i] * demands[i]));
  }
  auto gradient = [&](std::span<const double> x, std::span<double> g) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = demands[i];
      g[i] = -2.0 * severities[i] * t * (d - x[i] * t) / (d * d);
    }
  };
  return AcceleratedProjectedGradient(gradient, curvature, t, options);
}

}  // namespace hralloc
