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

#include "hralloc/ingest.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <utility>

namespace hralloc {

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// RFC 4180 style split of one line; quotes may wrap fields containing commas.
std::vector<std::string> SplitCsvLine(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back(Trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.emplace_back(Trim(current));
  return fields;
}

std::optional<double> ParseNumber(std::string_view text) {
  text = Trim(text);
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() ||
      !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::string RowSuffix(std::size_t row) {
  return " (row " + std::to_string(row) + ")";
}

// Reads the header line and returns its column names. An empty stream yields
// no columns.
struct CsvTable {
  std::vector<std::string> header;
  // (row number, fields) for every non-blank data line.
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;

  std::optional<std::size_t> Column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  }
};

CsvTable ReadCsv(std::istream& in) {
  CsvTable table;
  std::string line;
  std::size_t row = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++row;
    std::string_view view = line;
    if (row == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (Trim(view).empty()) continue;
    if (!have_header) {
      table.header = SplitCsvLine(view);
      have_header = true;
      continue;
    }
    table.rows.emplace_back(row, SplitCsvLine(view));
  }
  return table;
}

std::size_t RequireColumn(const CsvTable& table, std::string_view name) {
  auto column = table.Column(name);
  if (!column) {
    throw IngestError("missing column \"" + std::string(name) + "\" in header",
                      1, std::string(name));
  }
  return *column;
}

template <typename Record>
std::vector<Record> Strict(LoadReport<Record> report) {
  if (!report.errors.empty()) {
    const RowError& e = report.errors.front();
    throw IngestError(e.message, e.row, e.column);
  }
  return std::move(report.records);
}

std::ifstream OpenOrThrow(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + path.string());
  return in;
}

void InsertObservation(HistoryMap& out, std::set<std::pair<std::string, Date>>& keys,
                       std::string region, Date date, double active,
                       std::size_t row) {
  if (!keys.emplace(region, date).second) {
    throw IngestError("duplicate entry for " + region + " on " +
                          FormatIsoDate(date) + RowSuffix(row),
                      row, "date");
  }
  out[std::move(region)].push_back({date, active});
}

void SortHistories(HistoryMap& histories) {
  for (auto& [name, series] : histories) {
    std::sort(series.begin(), series.end(),
              [](const CaseObservation& a, const CaseObservation& b) {
                return a.date < b.date;
              });
  }
}

}  // namespace

LoadReport<DemandRecord> ParseDemands(std::istream& in) {
  const CsvTable table = ReadCsv(in);
  LoadReport<DemandRecord> report;
  if (table.header.empty()) return report;
  const std::size_t region_col = RequireColumn(table, "region");
  const std::size_t demand_col = RequireColumn(table, "demand_mt");
  const auto severity_col = table.Column("severity");

  std::set<std::string> seen;
  for (const auto& [row, fields] : table.rows) {
    ++report.data_rows;
    auto fail = [&, row = row](std::string column, std::string message) {
      report.errors.push_back({row, std::move(column), message + RowSuffix(row)});
    };
    if (fields.size() != table.header.size()) {
      fail("", "expected " + std::to_string(table.header.size()) +
                   " columns, found " + std::to_string(fields.size()));
      continue;
    }
    DemandRecord record;
    record.region = fields[region_col];
    if (record.region.empty()) {
      fail("region", "region must not be empty");
      continue;
    }
    const auto demand = ParseNumber(fields[demand_col]);
    if (!demand) {
      fail("demand_mt", "invalid number \"" + fields[demand_col] +
                            "\" in column demand_mt");
      continue;
    }
    if (*demand < 0.0) {
      fail("demand_mt", "demand must be ≥ 0");
      continue;
    }
    record.demand = *demand;
    if (severity_col && !fields[*severity_col].empty()) {
      const auto severity = ParseNumber(fields[*severity_col]);
      if (!severity) {
        fail("severity", "invalid number \"" + fields[*severity_col] +
                             "\" in column severity");
        continue;
      }
      if (!(*severity > 0.0)) {
        fail("severity", "severity must be > 0");
        continue;
      }
      record.severity = *severity;
    }
    if (!seen.insert(record.region).second) {
      fail("region", "duplicate region \"" + record.region + "\"");
      continue;
    }
    report.records.push_back(std::move(record));
  }
  return report;
}

std::vector<DemandRecord> LoadDemands(std::istream& in) {
  return Strict(ParseDemands(in));
}

std::vector<DemandRecord> LoadDemandsFile(const std::filesystem::path& path) {
  auto in = OpenOrThrow(path);
  return LoadDemands(in);
}

HistoryMap HistoryFromJson(const nlohmann::json& records) {
  if (!records.is_array()) {
    throw IngestError("history JSON must be an array of records");
  }
  HistoryMap out;
  std::set<std::pair<std::string, Date>> keys;
  std::size_t index = 0;
  for (const auto& rec : records) {
    ++index;
    const std::string where = "record " + std::to_string(index);
    if (!rec.is_object()) throw IngestError(where + ": expected an object", index);
    auto region = rec.find("region");
    if (region == rec.end() || !region->is_string() ||
        region->get<std::string>().empty()) {
      throw IngestError(where + ": field 'region' must be a non-empty string",
                        index, "region");
    }
    auto date_field = rec.find("date");
    std::optional<Date> date;
    if (date_field != rec.end() && date_field->is_string()) {
      date = ParseIsoDate(date_field->get<std::string>());
    }
    if (!date) {
      throw IngestError(where + ": field 'date' must be YYYY-MM-DD", index,
                        "date");
    }
    auto active = rec.find("active");
    if (active == rec.end() || !active->is_number()) {
      throw IngestError(where + ": field 'active' must be a number", index,
                        "active");
    }
    const double value = active->get<double>();
    if (!(value >= 0.0)) {
      throw IngestError(where + ": field 'active' must be >= 0", index,
                        "active");
    }
    InsertObservation(out, keys, region->get<std::string>(), *date, value, index);
  }
  SortHistories(out);
  return out;
}

HistoryMap LoadCaseHistory(std::istream& in, HistoryFormat format) {
  if (format == HistoryFormat::kJson) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw IngestError(std::string("malformed history JSON: ") + e.what());
    }
    return HistoryFromJson(doc);
  }

  const CsvTable table = ReadCsv(in);
  HistoryMap out;
  if (table.header.empty()) return out;
  const std::size_t region_col = RequireColumn(table, "region");
  const std::size_t date_col = RequireColumn(table, "date");
  const std::size_t active_col = RequireColumn(table, "active");
  std::set<std::pair<std::string, Date>> keys;
  for (const auto& [row, fields] : table.rows) {
    if (fields.size() != table.header.size()) {
      throw IngestError("expected " + std::to_string(table.header.size()) +
                            " columns, found " + std::to_string(fields.size()) +
                            RowSuffix(row),
                        row);
    }
    if (fields[region_col].empty()) {
      throw IngestError("region must not be empty" + RowSuffix(row), row,
                        "region");
    }
    const auto date = ParseIsoDate(fields[date_col]);
    if (!date) {
      throw IngestError("invalid date \"" + fields[date_col] + "\"" +
                            RowSuffix(row),
                        row, "date");
    }
    const auto active = ParseNumber(fields[active_col]);
    if (!active) {
      throw IngestError("invalid number \"" + fields[active_col] +
                            "\" in column active" + RowSuffix(row),
                        row, "active");
    }
    if (*active < 0.0) {
      throw IngestError("active count must be ≥ 0" + RowSuffix(row), row,
                        "active");
    }
    InsertObservation(out, keys, fields[region_col], *date, *active, row);
  }
  SortHistories(out);
  return out;
}

HistoryMap LoadCaseHistoryFile(const std::filesystem::path& path) {
  auto in = OpenOrThrow(path);
  const auto format = path.extension() == ".json" ? HistoryFormat::kJson
                                                  : HistoryFormat::kCsv;
  return LoadCaseHistory(in, format);
}

std::map<std::string, double> LoadRegionValues(std::istream& in,
                                               std::string_view value_column) {
  const CsvTable table = ReadCsv(in);
  std::map<std::string, double> out;
  if (table.header.empty()) return out;
  const std::size_t region_col = RequireColumn(table, "region");
  const std::size_t value_col = RequireColumn(table, value_column);
  for (const auto& [row, fields] : table.rows) {
    if (fields.size() != table.header.size()) {
      throw IngestError("expected " + std::to_string(table.header.size()) +
                            " columns, found " + std::to_string(fields.size()) +
                            RowSuffix(row),
                        row);
    }
    const auto value = ParseNumber(fields[value_col]);
    if (!value || *value < 0.0) {
      throw IngestError("invalid value \"" + fields[value_col] +
                            "\" in column " + std::string(value_column) +
                            RowSuffix(row),
                        row, std::string(value_column));
    }
    if (!out.emplace(fields[region_col], *value).second) {
      throw IngestError("duplicate region \"" + fields[region_col] + "\"" +
                            RowSuffix(row),
                        row, "region");
    }
  }
  return out;
}

std::map<std::string, double> LoadRegionValuesFile(
    const std::filesystem::path& path, std::string_view value_column) {
  auto in = OpenOrThrow(path);
  return LoadRegionValues(in, value_column);
}

namespace {

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string ShortestNumber(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

void WriteDemandsCsv(std::ostream& out, const std::vector<DemandRecord>& rows) {
  out << "region,demand_mt,severity\n";
  for (const auto& r : rows) {
    out << CsvField(r.region) << ',' << ShortestNumber(r.demand) << ','
        << ShortestNumber(r.severity) << '\n';
  }
}

void WriteHistoryCsv(std::ostream& out, const HistoryMap& histories) {
  out << "region,date,active\n";
  for (const auto& [name, series] : histories) {
    for (const auto& obs : series) {
      out << CsvField(name) << ',' << FormatIsoDate(obs.date) << ','
          << ShortestNumber(obs.active) << '\n';
    }
  }
}

nlohmann::json HistoryToJson(const HistoryMap& histories) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [name, series] : histories) {
    for (const auto& obs : series) {
      out.push_back(
          {{"region", name}, {"date", FormatIsoDate(obs.date)}, {"active", obs.active}});
    }
  }
  return out;
}

Scenario BuildScenario(const ScenarioInputs& inputs) {
  Scenario scenario;
  scenario.name = inputs.name;
  scenario.resource_name = inputs.resource_name;
  scenario.supply = inputs.supply;
  scenario.config = inputs.config;
  std::set<std::string> known;
  for (const auto& d : inputs.demands) {
    RegionRecord r;
    r.name = d.region;
    r.demand = d.demand;
    r.severity = d.severity;
    if (auto it = inputs.histories.find(d.region); it != inputs.histories.end()) {
      r.history = it->second;
    }
    if (auto it = inputs.predicted.find(d.region); it != inputs.predicted.end()) {
      r.predicted_max = it->second;
    }
    if (auto it = inputs.ideals.find(d.region); it != inputs.ideals.end()) {
      r.ideal_override = it->second;
    }
    known.insert(d.region);
    scenario.regions.push_back(std::move(r));
  }
  auto check = [&known](const auto& table, const char* what) {
    for (const auto& [name, value] : table) {
      if (!known.contains(name)) {
        throw IngestError(std::string(what) + " names unknown region \"" +
                          name + "\"");
      }
    }
  };
  check(inputs.histories, "history");
  check(inputs.predicted, "predicted table");
  check(inputs.ideals, "ideal table");
  return scenario;
}

std::vector<DemandRecord> DemandsOf(const Scenario& scenario) {
  std::vector<DemandRecord> out;
  for (const auto& r : scenario.regions) out.push_back({r.name, r.demand, r.severity});
  return out;
}

HistoryMap HistoriesOf(const Scenario& scenario) {
  HistoryMap out;
  for (const auto& r : scenario.regions) {
    if (!r.history.empty()) out[r.name] = r.history;
  }
  return out;
}

}  // namespace hralloc
