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

#ifndef HRALLOC_FORECAST_H_
#define HRALLOC_FORECAST_H_

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hralloc/model.h"

namespace hralloc {

/// Smoothing weights of the level + additive trend recursion.
struct SmoothingParams {
  double level = 0.8;
  double trend = 0.2;
};

struct ForecastResult {
  std::string region;
  double fitted_level = 0.0;
  double fitted_trend = 0.0;
  std::vector<double> predicted;
  double horizon_max = 0.0;
  // Calendar days inserted by forward-filling gaps in a dated history.
  std::size_t gaps_filled = 0;
};

class InsufficientHistory : public std::invalid_argument {
 public:
  InsufficientHistory() : std::invalid_argument("insufficient history") {}
};

/// Double exponential smoothing started from level = y0, trend = y1 - y0.
/// predicted[k] = level + (k + 1) * trend; horizon_max is the maximum of the
/// predictions after flooring negatives at zero.
ForecastResult FitForecast(std::span<const double> history, int horizon,
                           SmoothingParams params = {});

/// Same recursion over a dated history. Missing calendar days are filled with
/// the previous observation before fitting.
ForecastResult FitForecast(const CaseHistory& history, int horizon,
                           SmoothingParams params = {});

/// Expands a dated history to one value per calendar day, carrying the last
/// observation across gaps. `filled` receives the number of inserted days.
std::vector<double> ForwardFill(const CaseHistory& history,
                                std::size_t* filled = nullptr);

/// w_i = p_i / sum(p). Throws std::invalid_argument("no predicted demand")
/// when every entry is zero, and on negative entries.
std::vector<double> IdealWeights(std::span<const double> horizon_maxima);

/// A_i = w_i * total.
std::vector<double> IdealAllocation(std::span<const double> weights,
                                    double total);

}  // namespace hralloc

#endif  // HRALLOC_FORECAST_H_
