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

#include "hralloc/forecast.h"

#include <algorithm>
#include <cmath>

namespace hralloc {

ForecastResult FitForecast(std::span<const double> history, int horizon,
                           SmoothingParams params) {
  if (history.size() < 2) throw InsufficientHistory();
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (!(params.level > 0.0 && params.level <= 1.0) ||
      !(params.trend > 0.0 && params.trend <= 1.0)) {
    throw std::invalid_argument("smoothing parameters must be in (0, 1]");
  }
  for (double y : history) {
    if (!(y >= 0.0)) throw std::invalid_argument("active counts must be >= 0");
  }

  double level = history[0];
  double trend = history[1] - history[0];
  for (std::size_t t = 1; t < history.size(); ++t) {
    const double previous_level = level;
    level = params.level * history[t] +
            (1.0 - params.level) * (previous_level + trend);
    trend = params.trend * (level - previous_level) +
            (1.0 - params.trend) * trend;
  }

  ForecastResult out;
  out.fitted_level = level;
  out.fitted_trend = trend;
  out.predicted.reserve(static_cast<std::size_t>(horizon));
  double peak = 0.0;
  for (int k = 0; k < horizon; ++k) {
    const double y = level + static_cast<double>(k + 1) * trend;
    out.predicted.push_back(y);
    peak = std::max(peak, y);
  }
  out.horizon_max = peak;
  return out;
}

std::vector<double> ForwardFill(const CaseHistory& history,
                                std::size_t* filled) {
  std::vector<double> values;
  std::size_t inserted = 0;
  for (std::size_t i = 0; i < history.size(); ++i) {
    if (i > 0) {
      const auto gap = (history[i].date - history[i - 1].date).count();
      if (gap < 1) {
        throw std::invalid_argument("history dates must be strictly increasing");
      }
      for (auto d = 1; d < gap; ++d) {
        values.push_back(history[i - 1].active);
        ++inserted;
      }
    }
    values.push_back(history[i].active);
  }
  if (filled != nullptr) *filled = inserted;
  return values;
}

ForecastResult FitForecast(const CaseHistory& history, int horizon,
                           SmoothingParams params) {
  std::size_t filled = 0;
  const std::vector<double> values = ForwardFill(history, &filled);
  ForecastResult out = FitForecast(values, horizon, params);
  out.gaps_filled = filled;
  return out;
}

std::vector<double> IdealWeights(std::span<const double> horizon_maxima) {
  double sum = 0.0;
  for (double p : horizon_maxima) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument("predicted maxima must be finite and >= 0");
    }
    sum += p;
  }
  if (!(sum > 0.0)) throw std::invalid_argument("no predicted demand");
  std::vector<double> weights;
  weights.reserve(horizon_maxima.size());
  for (double p : horizon_maxima) weights.push_back(p / sum);
  return weights;
}

std::vector<double> IdealAllocation(std::span<const double> weights,
                                    double total) {
  std::vector<double> amounts;
  amounts.reserve(weights.size());
  for (double w : weights) amounts.push_back(w * total);
  return amounts;
}

}  // namespace hralloc
