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

// Reference values of the 2021-04-20 oxygen case study shared by the unit
// and acceptance suites.

#ifndef HRALLOC_TESTS_FIXTURES_H_
#define HRALLOC_TESTS_FIXTURES_H_

#include <array>
#include <filesystem>
#include <string>
#include <system_error>

#include <unistd.h>

#include "hralloc/ingest.h"
#include "hralloc/model.h"

namespace hralloc::testing {

inline std::filesystem::path DataDir() { return HRALLOC_TEST_DATA_DIR; }
inline std::filesystem::path DataFile(const std::string& name) {
  return DataDir() / name;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("hralloc-test-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline constexpr double kCaseSupply = 5000.0;
inline constexpr double kCaseTotalDemand = 6595.0;

inline const std::array<std::string, 18> kStates = {
    "Maharashtra", "Gujarat",        "Karnataka",   "Madhya Pradesh",
    "Delhi",       "Haryana",        "Uttar Pradesh", "Tamil Nadu",
    "Kerala",      "Chhattisgarh",   "Rajasthan",   "Telangana",
    "Andhra Pradesh", "Uttarakhand", "Jammu and Kashmir", "Goa",
    "Chandigarh",  "Himachal Pradesh"};

inline constexpr std::array<double, 18> kDemand = {
    1500, 1000, 300, 445, 700, 180, 800, 200, 89,
    215,  205,  360, 440, 103, 12,  11,  20,  15};

inline constexpr std::array<double, 18> kActiveOnApril20 = {
    683856, 76500, 159158, 78271, 85571, 49772, 223544, 79804, 118669,
    125688, 85571, 42853,  53889, 21014, 13470, 8241,   3959,  10029};

// Horizon maxima of the ideal-allocation table.
inline constexpr std::array<double, 18> kPredicted = {
    709082, 148436, 285307, 136516, 157031, 92531, 479879, 127336, 221811,
    147839, 158795, 75187,  99834,  44727,  18414, 13428,  4259,   15676};

// Printed weights (%) and allocations (MT) of the same table.
inline constexpr std::array<double, 18> kWeightPercent = {
    24.15, 5.06, 9.71, 4.65, 5.35, 3.15, 16.34, 4.34, 7.55,
    5.03,  5.41, 2.56, 3.4,  1.52, 0.63, 0.48,  0.14, 0.53};
inline constexpr std::array<double, 18> kIdealAllocation = {
    1207.5, 253, 485.5, 232.5, 267.5, 157.5, 817, 217, 377.5,
    251.5,  270.5, 128, 170,   76,    31.5,  24,  7,   26.5};

// States granted full demand before optimization.
inline const std::array<std::string, 9> kPrepassSatisfied = {
    "Karnataka",    "Uttar Pradesh", "Tamil Nadu",
    "Kerala",       "Chhattisgarh",  "Rajasthan",
    "Jammu and Kashmir", "Goa",      "Himachal Pradesh"};
inline constexpr double kRemainingSupply = 3153.0;
inline constexpr double kBalanceDemand = 4748.0;

// Re-optimization instance over the nine remaining states.
inline const std::array<std::string, 9> kReoptStates = {
    "Maharashtra", "Gujarat",        "Madhya Pradesh",
    "Delhi",       "Haryana",        "Telangana",
    "Andhra Pradesh", "Uttarakhand", "Chandigarh"};
inline constexpr std::array<double, 9> kReoptDemand = {
    1500, 1000, 445, 700, 180, 360, 440, 103, 20};
inline constexpr std::array<double, 9> kReoptIdeal = {
    1511.55, 316.56, 291.02, 334.85, 197.38, 160.17, 212.82, 95.22, 33.42};
inline constexpr std::array<double, 9> kReoptAllocation = {
    1326, 364.38, 327.74, 388.39, 185.09, 189.8, 250.08, 98.03, 23.49};

// Final allocation, in kStates order.
inline constexpr std::array<double, 18> kFinalAllocation = {
    1330.44, 365.23, 300, 328.59, 389.37, 180, 800, 200, 89,
    215,     205,    190.27, 250.70, 98.30, 12, 11, 20, 15};

inline ScenarioInputs CaseStudyInputs(bool with_ideals) {
  ScenarioInputs in;
  in.name = "oxygen 2021-04-20";
  in.supply = kCaseSupply;
  in.demands = LoadDemandsFile(DataFile("oxygen_demand_2021-04-20.csv"));
  in.histories = LoadCaseHistoryFile(DataFile("case_history_2021-04-20.csv"));
  in.predicted =
      LoadRegionValuesFile(DataFile("predicted_max_2021-04-20.csv"), "predicted_max");
  if (with_ideals) {
    in.ideals = LoadRegionValuesFile(DataFile("reoptimization_ideals_2021-04-20.csv"),
                                     "ideal_mt");
  }
  return in;
}

inline Scenario CaseStudyScenario(bool with_ideals = true) {
  return BuildScenario(CaseStudyInputs(with_ideals));
}

}  // namespace hralloc::testing

#endif  // HRALLOC_TESTS_FIXTURES_H_
