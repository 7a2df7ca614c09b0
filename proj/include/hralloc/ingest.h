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

// File loaders for demand tables and active-case histories.
//
// Formats (UTF-8, decimal point, no thousands separators):
//   demands CSV   region,demand_mt,severity     severity optional, default 1
//   history CSV   region,date,active            date is YYYY-MM-DD
//   history JSON  [{"region": str, "date": "YYYY-MM-DD", "active": int}, ...]
//   values CSV    region,<column>               e.g. predicted_max, ideal_mt
//
// Row numbers in errors are physical line numbers; the header is row 1.

#ifndef HRALLOC_INGEST_H_
#define HRALLOC_INGEST_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hralloc/model.h"
#include "json.hpp"

namespace hralloc {

class IngestError : public std::runtime_error {
 public:
  IngestError(const std::string& message, std::size_t row = 0,
              std::string column = {})
      : std::runtime_error(message), row_(row), column_(std::move(column)) {}
  std::size_t row() const { return row_; }
  const std::string& column() const { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

struct RowError {
  std::size_t row = 0;
  std::string column;
  std::string message;
};

// Lenient parse result: every data row lands in exactly one of the two lists.
template <typename Record>
struct LoadReport {
  std::vector<Record> records;
  std::vector<RowError> errors;
  std::size_t data_rows = 0;
};

struct DemandRecord {
  std::string region;
  double demand = 0.0;
  double severity = 1.0;

  bool operator==(const DemandRecord&) const = default;
};

using HistoryMap = std::map<std::string, CaseHistory>;

enum class HistoryFormat { kCsv, kJson };

LoadReport<DemandRecord> ParseDemands(std::istream& in);
// Strict variants throw the first row error as IngestError.
std::vector<DemandRecord> LoadDemands(std::istream& in);
std::vector<DemandRecord> LoadDemandsFile(const std::filesystem::path& path);

HistoryMap LoadCaseHistory(std::istream& in, HistoryFormat format);
// Format chosen by extension: .json is JSON, anything else CSV.
HistoryMap LoadCaseHistoryFile(const std::filesystem::path& path);
HistoryMap HistoryFromJson(const nlohmann::json& records);

// Two-column region,<value_column> table of nonnegative numbers.
std::map<std::string, double> LoadRegionValues(std::istream& in,
                                               std::string_view value_column);
std::map<std::string, double> LoadRegionValuesFile(
    const std::filesystem::path& path, std::string_view value_column);

void WriteDemandsCsv(std::ostream& out, const std::vector<DemandRecord>& rows);
void WriteHistoryCsv(std::ostream& out, const HistoryMap& histories);
nlohmann::json HistoryToJson(const HistoryMap& histories);

struct ScenarioInputs {
  std::string name = "scenario";
  std::string resource_name = "oxygen";
  double supply = 0.0;
  std::vector<DemandRecord> demands;
  HistoryMap histories;
  std::map<std::string, double> predicted;
  std::map<std::string, double> ideals;
  ScenarioConfig config;
};

/// Regions follow the demand table order. Histories, predicted maxima and
/// ideal overrides naming a region absent from the demand table are errors.
Scenario BuildScenario(const ScenarioInputs& inputs);

/// Inverse of BuildScenario for the demand and history tables.
std::vector<DemandRecord> DemandsOf(const Scenario& scenario);
HistoryMap HistoriesOf(const Scenario& scenario);

}  // namespace hralloc

#endif  // HRALLOC_INGEST_H_
