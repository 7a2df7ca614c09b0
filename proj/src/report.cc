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

#include "hralloc/report.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace hralloc {

using nlohmann::json;

std::string FormatFixed2(double value) {
  if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  const bool negative = value < 0.0;
  char buf[512];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), std::abs(value),
                                 std::chars_format::fixed);
  std::string digits(buf, ptr);
  std::string whole = digits, frac;
  if (auto dot = digits.find('.'); dot != std::string::npos) {
    whole = digits.substr(0, dot);
    frac = digits.substr(dot + 1);
  }
  const bool round_up = frac.size() > 2 && frac[2] >= '5';
  frac.resize(2, '0');
  std::string number = whole + frac;  // implied two decimals
  if (round_up) {
    int i = static_cast<int>(number.size()) - 1;
    while (i >= 0 && number[i] == '9') number[i--] = '0';
    if (i < 0) {
      number.insert(number.begin(), '1');
    } else {
      ++number[i];
    }
  }
  std::string out = number.substr(0, number.size() - 2) + "." +
                    number.substr(number.size() - 2);
  const bool is_zero = out.find_first_not_of("0.") == std::string::npos;
  return (negative && !is_zero) ? "-" + out : out;
}

namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string Text() const {
    std::vector<std::size_t> width(header.size(), 0);
    auto measure = [&width](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        width[i] = std::max(width[i], cells[i].size());
      }
    };
    measure(header);
    for (const auto& r : rows) measure(r);
    std::ostringstream out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) out << "  ";
        // First column left-aligned, numbers right-aligned.
        if (i == 0) {
          out << cells[i] << std::string(width[i] - cells[i].size(), ' ');
        } else {
          out << std::string(width[i] - cells[i].size(), ' ') << cells[i];
        }
      }
      out << '\n';
    };
    line(header);
    std::size_t total = 0;
    for (std::size_t w : width) total += w;
    out << std::string(total + 2 * (width.size() - 1), '-') << '\n';
    for (const auto& r : rows) line(r);
    return out.str();
  }

  std::string Markdown() const {
    std::ostringstream out;
    auto line = [&out](const std::vector<std::string>& cells) {
      out << '|';
      for (const auto& c : cells) out << ' ' << c << " |";
      out << '\n';
    };
    line(header);
    out << '|';
    for (std::size_t i = 0; i < header.size(); ++i) out << (i == 0 ? " --- |" : " ---: |");
    out << '\n';
    for (const auto& r : rows) line(r);
    return out.str();
  }
};

std::string Pct(double fraction) { return FormatFixed2(100.0 * fraction); }

std::string Str(const json& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

std::string Num(const json& v) {
  return v.is_number() ? FormatFixed2(v.get<double>()) : "";
}

struct PlanTables {
  Table ideal{{"Region", "Demand", "Predicted max", "Weight (%)", "Ideal"}, {}};
  Table prepass{{"Region", "Allocation"}, {}};
  Table optimized{{"Region", "Demand", "Ideal", "Fraction (%)", "Allocation"}, {}};
  Table final{{"Region", "Demand", "Allocation", "Capped"}, {}};
};

PlanTables BuildTables(const json& plan) {
  PlanTables t;
  for (const auto& r : plan["stage_ideal"]) {
    t.ideal.rows.push_back({Str(r["region"]), Num(r["demand"]),
                            Num(r["predicted_max"]), Pct(r["weight"].get<double>()),
                            Num(r["ideal"])});
  }
  for (const auto& r : plan["stage_prepass"]["satisfied"]) {
    t.prepass.rows.push_back({Str(r["region"]), Num(r["amount"])});
  }
  for (const auto& r : plan["stage_optimized"]["regions"]) {
    t.optimized.rows.push_back({Str(r["region"]), Num(r["demand"]),
                                r["ideal"].is_number() ? Num(r["ideal"]) : "-",
                                Pct(r["fraction"].get<double>()), Num(r["amount"])});
  }
  for (const auto& r : plan["stage_final"]) {
    const bool capped = r.value("capped", false);
    t.final.rows.push_back({Str(r["region"]), Num(r["demand"]), Num(r["amount"]),
                            capped ? "yes" : ""});
  }
  return t;
}

double FinalTotal(const json& plan) {
  double sum = 0.0;
  for (const auto& r : plan["stage_final"]) sum += r["amount"].get<double>();
  return sum;
}

std::string PrepassSummary(const json& plan) {
  const json& pre = plan["stage_prepass"];
  return "remaining supply " + Num(pre["remaining_supply"]) + ", balance demand " +
         Num(pre["balance_demand"]);
}

std::string SolverSummary(const json& plan) {
  const json& opt = plan["stage_optimized"];
  std::string out = "lambda " + (opt.contains("lambda") ? opt["lambda"].dump() : "-") +
                    ", KKT residual " +
                    (opt.contains("kkt_residual") ? opt["kkt_residual"].dump() : "-");
  std::string active;
  for (const auto& name : opt.value("active_set", json::array())) {
    active += (active.empty() ? "" : ", ") + Str(name);
  }
  out += ", clamped: " + (active.empty() ? std::string("none") : active);
  return out;
}

std::string FinalSummary(const json& plan) {
  return "allocated " + FormatFixed2(FinalTotal(plan)) + " of " + Num(plan["supply"]) +
         ", surplus " + Num(plan["surplus"]);
}

}  // namespace

std::string RenderPlanText(const json& plan) {
  const PlanTables t = BuildTables(plan);
  const std::string unit = plan.value("unit", "");
  std::ostringstream out;
  out << plan.value("resource", "") << " allocation, level " << Str(plan["level"])
      << ", supply " << Num(plan["supply"]) << ' ' << unit << "\n\n";
  out << "Ideal allocation\n";
  out << (t.ideal.rows.empty() ? std::string("(not applicable)\n") : t.ideal.Text());
  out << "\nPre-pass (full demand)\n" << t.prepass.Text();
  out << PrepassSummary(plan) << "\n";
  out << "\nOptimized\n" << t.optimized.Text() << SolverSummary(plan) << "\n";
  out << "\nFinal allocation\n" << t.final.Text() << FinalSummary(plan) << "\n";
  return out.str();
}

std::string RenderPlanMarkdown(const json& plan) {
  const PlanTables t = BuildTables(plan);
  std::ostringstream out;
  out << "# " << plan.value("resource", "Resource") << " allocation plan\n\n";
  out << "Level: " << Str(plan["level"]) << ", redistribution: "
      << plan.value("redistribution", "") << ", supply: " << Num(plan["supply"])
      << ' ' << plan.value("unit", "") << "\n\n";
  out << "## Ideal allocation\n\n";
  out << (t.ideal.rows.empty() ? std::string("Not applicable at this level.\n")
                               : t.ideal.Markdown());
  out << "\n## Pre-pass\n\n" << t.prepass.Markdown() << '\n'
      << PrepassSummary(plan) << "\n";
  out << "\n## Optimized\n\n" << t.optimized.Markdown() << '\n'
      << SolverSummary(plan) << "\n";
  out << "\n## Final allocation\n\n" << t.final.Markdown() << '\n'
      << FinalSummary(plan) << "\n";
  return out.str();
}

std::string RenderPlanCsv(const json& plan) {
  std::ostringstream out;
  out << "stage,region,demand,predicted_max,weight,ideal,fraction,amount,capped\n";
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  for (const auto& r : plan["stage_ideal"]) {
    out << "ideal," << quote(Str(r["region"])) << ',' << Num(r["demand"]) << ','
        << Num(r["predicted_max"]) << ',' << Pct(r["weight"].get<double>()) << ','
        << Num(r["ideal"]) << ",,,\n";
  }
  for (const auto& r : plan["stage_prepass"]["satisfied"]) {
    out << "prepass," << quote(Str(r["region"])) << ",,,,,," << Num(r["amount"])
        << ",\n";
  }
  for (const auto& r : plan["stage_optimized"]["regions"]) {
    out << "optimized," << quote(Str(r["region"])) << ',' << Num(r["demand"])
        << ",,," << Num(r["ideal"]) << ',' << Pct(r["fraction"].get<double>()) << ','
        << Num(r["amount"]) << ",\n";
  }
  for (const auto& r : plan["stage_final"]) {
    out << "final," << quote(Str(r["region"])) << ',' << Num(r["demand"])
        << ",,,,," << Num(r["amount"]) << ','
        << (r.value("capped", false) ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string RenderForecastText(const std::vector<ForecastResult>& rows) {
  Table t;
  t.header = {"Region", "Level", "Trend", "Horizon max"};
  const std::size_t horizon = rows.empty() ? 0 : rows.front().predicted.size();
  for (std::size_t k = 0; k < horizon; ++k) t.header.push_back("+" + std::to_string(k + 1));
  for (const auto& f : rows) {
    std::vector<std::string> cells = {f.region, FormatFixed2(f.fitted_level),
                                      FormatFixed2(f.fitted_trend),
                                      FormatFixed2(f.horizon_max)};
    for (double y : f.predicted) cells.push_back(FormatFixed2(y));
    t.rows.push_back(std::move(cells));
  }
  return t.Text();
}

std::string RenderForecastCsv(const std::vector<ForecastResult>& rows) {
  std::ostringstream out;
  out << "region,fitted_level,fitted_trend,horizon_max";
  const std::size_t horizon = rows.empty() ? 0 : rows.front().predicted.size();
  for (std::size_t k = 0; k < horizon; ++k) out << ",day_" << (k + 1);
  out << '\n';
  for (const auto& f : rows) {
    out << f.region << ',' << FormatFixed2(f.fitted_level) << ','
        << FormatFixed2(f.fitted_trend) << ',' << FormatFixed2(f.horizon_max);
    for (double y : f.predicted) out << ',' << FormatFixed2(y);
    out << '\n';
  }
  return out.str();
}

}  // namespace hralloc
