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

#include "hralloc/cli.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "hralloc/fetch.h"
#include "hralloc/forecast.h"
#include "hralloc/ingest.h"
#include "hralloc/json_io.h"
#include "hralloc/pipeline.h"
#include "hralloc/report.h"

namespace hralloc::cli {

namespace {

// Raised for bad flag combinations; maps to the input exit code.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SmoothingFlags {
  int horizon = 7;
  double alpha = 0.8;
  double beta = 0.2;

  void Attach(CLI::App* cmd) {
    cmd->add_option("--horizon", horizon, "Forecast horizon in days")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--alpha", alpha, "Level smoothing in (0, 1]");
    cmd->add_option("--beta", beta, "Trend smoothing in (0, 1]");
  }
};

struct AllocateFlags {
  std::string demands;
  std::string history;
  std::string predicted;
  std::string ideals;
  double supply = 0.0;
  std::string level = "center";
  std::string redistribution = "proportional";
  bool reevaluate_prepass = false;
  std::string resource = "oxygen";
  std::string name = "scenario";
  std::string output = "table";
  SmoothingFlags smoothing;

  void Attach(CLI::App* cmd, bool with_output) {
    cmd->add_option("--demands", demands, "Demand CSV (region,demand_mt,severity)")
        ->required();
    cmd->add_option("--history", history, "Case history CSV or JSON");
    cmd->add_option("--predicted", predicted,
                    "Horizon maxima CSV (region,predicted_max); bypasses the forecaster");
    cmd->add_option("--ideals", ideals,
                    "Ideal amounts CSV (region,ideal_mt) fed to the re-optimization stage");
    cmd->add_option("--supply", supply, "Total supply to allocate")->required();
    cmd->add_option("--level", level, "center|district|proportional")
        ->check(CLI::IsMember({"center", "district", "proportional"}));
    cmd->add_option("--redistribution", redistribution, "equal|proportional")
        ->check(CLI::IsMember({"equal", "proportional"}));
    cmd->add_flag("--reevaluate-prepass", reevaluate_prepass,
                  "Re-check full-demand membership after renormalizing ideals");
    cmd->add_option("--resource", resource, "Resource name");
    cmd->add_option("--name", name, "Scenario name");
    if (with_output) {
      cmd->add_option("--output", output, "table|csv|json")
          ->check(CLI::IsMember({"table", "csv", "json"}));
    }
    smoothing.Attach(cmd);
  }

  Scenario BuildScenario() const {
    ScenarioInputs in;
    in.name = name;
    in.resource_name = resource;
    in.supply = supply;
    in.demands = LoadDemandsFile(demands);
    if (!history.empty()) in.histories = LoadCaseHistoryFile(history);
    if (!predicted.empty()) in.predicted = LoadRegionValuesFile(predicted, "predicted_max");
    if (!ideals.empty()) in.ideals = LoadRegionValuesFile(ideals, "ideal_mt");
    in.config.horizon = smoothing.horizon;
    in.config.level_smoothing = smoothing.alpha;
    in.config.trend_smoothing = smoothing.beta;
    in.config.redistribution = *ParseRedistributionPolicy(redistribution);
    in.config.reevaluate_prepass = reevaluate_prepass;
    return hralloc::BuildScenario(in);
  }

  PipelineOptions Options() const {
    PipelineOptions o;
    o.level = *ParseAllocationLevel(level);
    o.redistribution = *ParseRedistributionPolicy(redistribution);
    o.use_fixture_predicted = !predicted.empty();
    o.use_ideal_override = !ideals.empty();
    o.reevaluate_prepass = reevaluate_prepass;
    if (o.level != AllocationLevel::kDistrict && history.empty() &&
        predicted.empty()) {
      throw UsageError("--history or --predicted is required for level " + level);
    }
    return o;
  }
};

void RequireValidScenario(const Scenario& scenario) {
  const auto violations = ValidateScenario(scenario);
  if (violations.empty()) return;
  std::string message;
  for (const auto& v : violations) {
    if (!message.empty()) message += "; ";
    message += (v.region.empty() ? "" : v.region + ": ") + v.message;
  }
  throw UsageError(message);
}

int CmdForecast(const std::string& history_path, const SmoothingFlags& flags,
                const std::string& output, std::ostream& out) {
  const HistoryMap histories = LoadCaseHistoryFile(history_path);
  std::vector<ForecastResult> rows;
  std::vector<std::string> short_history;
  for (const auto& [name, series] : histories) {
    if (series.size() < 2) {
      short_history.push_back(name);
      continue;
    }
    ForecastResult f = FitForecast(series, flags.horizon, {flags.alpha, flags.beta});
    f.region = name;
    rows.push_back(std::move(f));
  }
  if (!short_history.empty()) {
    std::string message = "insufficient history:";
    for (const auto& n : short_history) message += " " + n;
    throw IngestError(message);
  }
  if (output == "json") {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& f : rows) doc.push_back(ForecastToJson(f));
    out << doc.dump(2) << '\n';
  } else if (output == "csv") {
    out << RenderForecastCsv(rows);
  } else {
    out << RenderForecastText(rows);
  }
  return kExitOk;
}

int CmdAllocate(const AllocateFlags& flags, std::ostream& out) {
  const PipelineOptions options = flags.Options();
  const Scenario scenario = flags.BuildScenario();
  RequireValidScenario(scenario);
  const AllocationPlan plan = RunAllocation(scenario, options);
  const nlohmann::json doc = PlanToJson(plan);
  if (flags.output == "json") {
    out << doc.dump(2) << '\n';
  } else if (flags.output == "csv") {
    out << RenderPlanCsv(doc);
  } else {
    out << RenderPlanText(doc);
  }
  return kExitOk;
}

int CmdReport(const std::string& plan_path, const std::string& format,
              std::ostream& out) {
  std::ifstream in(plan_path);
  if (!in) throw IngestError("cannot open " + plan_path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("plan is not valid JSON: ") + e.what());
  }
  ValidatePlanJson(doc);
  out << (format == "csv" ? RenderPlanCsv(doc) : RenderPlanMarkdown(doc));
  return kExitOk;
}

int CmdFetch(FetchOptions options, const std::string& output_path,
             std::ostream& out) {
  if (options.endpoint.empty()) {
    if (const char* env = std::getenv(kEndpointEnvVar)) options.endpoint = env;
  }
  if (options.endpoint.empty()) {
    throw UsageError(std::string("--endpoint or ") + kEndpointEnvVar + " is required");
  }
  const FetchResult result = FetchRemoteHistory(options);
  if (output_path.empty()) {
    out << HistoryToJson(result.histories).dump(2) << '\n';
  } else if (std::filesystem::path(output_path).extension() == ".json") {
    WriteFileAtomically(output_path, HistoryToJson(result.histories).dump(2) + "\n");
  } else {
    std::ostringstream csv;
    WriteHistoryCsv(csv, result.histories);
    WriteFileAtomically(output_path, csv.str());
  }
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Hierarchical scarce-resource allocation engine", "hralloc"};
  app.require_subcommand(1);

  auto* forecast = app.add_subcommand("forecast", "Forecast active cases per region");
  std::string history_path;
  std::string forecast_output = "table";
  SmoothingFlags forecast_flags;
  forecast->add_option("--history", history_path, "Case history CSV or JSON")->required();
  forecast->add_option("--output", forecast_output, "table|csv|json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  forecast_flags.Attach(forecast);

  auto* allocate = app.add_subcommand("allocate", "Run the staged allocation");
  AllocateFlags allocate_flags;
  allocate_flags.Attach(allocate, true);

  auto* scenario_cmd =
      app.add_subcommand("scenario", "Print the scenario JSON built from input files");
  AllocateFlags scenario_flags;
  scenario_flags.Attach(scenario_cmd, false);

  auto* report = app.add_subcommand("report", "Render a plan JSON as a report");
  std::string plan_path;
  std::string report_format = "md";
  report->add_option("--plan", plan_path, "Plan JSON from allocate --output json")
      ->required();
  report->add_option("--format", report_format, "md|csv")
      ->check(CLI::IsMember({"md", "csv"}));

  auto* fetch = app.add_subcommand("fetch", "Download case history from an endpoint");
  FetchOptions fetch_options;
  std::string cache_path;
  std::string fetch_output;
  fetch->add_option("--endpoint", fetch_options.endpoint,
                    std::string("History endpoint URL (default $") + kEndpointEnvVar + ")");
  fetch->add_option("--region", fetch_options.regions, "Keep only these regions");
  fetch->add_option("--cache", cache_path, "Cache file for the raw response");
  fetch->add_option("--token", fetch_options.bearer_token, "Bearer token");
  fetch->add_option("--out", fetch_output, "Write history to FILE (.json or .csv)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*forecast) {
      return CmdForecast(history_path, forecast_flags, forecast_output, out);
    }
    if (*allocate) return CmdAllocate(allocate_flags, out);
    if (*scenario_cmd) {
      scenario_flags.Options();
      const Scenario s = scenario_flags.BuildScenario();
      RequireValidScenario(s);
      out << ScenarioToJson(s).dump(2) << '\n';
      return kExitOk;
    }
    if (*report) return CmdReport(plan_path, report_format, out);
    if (*fetch) {
      fetch_options.cache_path = cache_path;
      return CmdFetch(fetch_options, fetch_output, out);
    }
  } catch (const StageError& e) {
    err << "error [" << e.stage() << "]: " << e.what() << '\n';
    return e.stage() == "validate" ? kExitInput : kExitSolver;
  } catch (const FetchError& e) {
    err << "error: " << e.what() << (e.retryable() ? " (retryable)" : "") << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    // Ingest, schema, usage and validation failures.
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace hralloc::cli
