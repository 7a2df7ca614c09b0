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

// Closed-form solvers for the two allocation problems.
//
// Center level. Choose fractions a_i of the total T minimizing
//
//   J = sum_i d_i ((D_i - a_i T) / D_i)^2 + sum_i d_i ((A_i - a_i T) / A_i)^2
//
// subject to sum_i a_i = 1, where D is declared demand, A the ideal
// forecast-driven amount and d the severity weight. Both terms carry d_i.
//
// District level. Same constraint, demand term only:
//
//   J = sum_l d_l ((D_l - g_l T) / D_l)^2
//
// Both objectives are separable quadratics k_i T^2 a_i^2 - 2 g_i T a_i + c,
// so stationarity of J + lambda (sum a - 1) gives
//
//   a_i    = (g_i T - lambda / 2) / (k_i T^2)
//   lambda = 2 (sum_i g_i / (k_i T) - 1) / sum_i 1 / (k_i T^2).
//
// Negative fractions are clamped to zero and the remaining entries re-solved
// until none is negative. Each pass raises lambda, so clamped entries stay
// at a valid bound and the loop ends in at most n passes.

#ifndef HRALLOC_SOLVER_H_
#define HRALLOC_SOLVER_H_

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "hralloc/model.h"

namespace hralloc {

inline constexpr double kConstraintTolerance = 1e-9;
inline constexpr double kOracleAgreementTolerance = 1e-6;

SolverResult SolveCenterAllocation(const AllocationProblem& problem);
SolverResult SolveDistrictAllocation(const DistrictProblem& problem);

/// Convenience overload validating the raw inputs.
SolverResult SolveDistrictAllocation(std::span<const double> demands,
                                     std::span<const double> severities,
                                     double total);

/// dJ~/da_i = dJ/da_i + lambda, evaluated term by term from the objective.
std::vector<double> LagrangianGradient(const AllocationProblem& problem,
                                       const SolverResult& result);
std::vector<double> LagrangianGradient(const DistrictProblem& problem,
                                       const SolverResult& result);

/// max over free indices of |dJ~/da_i|, plus |sum a - 1|. Zero at a KKT point.
double LagrangianResidual(const AllocationProblem& problem,
                          const SolverResult& result);
double LagrangianResidual(const DistrictProblem& problem,
                          const SolverResult& result);

struct OracleOptions {
  std::size_t max_steps = 1'000'000;
  // Certified bound on the distance |a - a*|_2 at termination.
  double tolerance = 1e-8;
};

class OracleNonConvergence : public std::runtime_error {
 public:
  OracleNonConvergence(std::vector<double> last_iterate, double residual);
  const std::vector<double>& last_iterate() const { return last_iterate_; }
  double residual() const { return residual_; }

 private:
  std::vector<double> last_iterate_;
  double residual_;
};

/// Verification oracle: accelerated projected gradient on the probability
/// simplex, using only the objective's gradient. Independent of the closed
/// form. Terminates once 2 |G| / mu <= tolerance, where G is the gradient
/// mapping and mu the smallest curvature.
SolverResult OracleSolve(const AllocationProblem& problem,
                         const OracleOptions& options = {});
SolverResult OracleSolve(const DistrictProblem& problem,
                         const OracleOptions& options = {});

/// Euclidean projection onto {x : sum x = 1, x >= 0}.
std::vector<double> ProjectOntoSimplex(std::span<const double> point);

}  // namespace hralloc

#endif  // HRALLOC_SOLVER_H_
