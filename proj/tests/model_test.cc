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

#include "hralloc/model.h"

#include <gtest/gtest.h>

#include <algorithm>

namespace hralloc {
namespace {

using std::chrono::days;

Scenario TwoRegionScenario() {
  Scenario s;
  s.name = "two";
  s.supply = 100;
  s.regions = {{"Delhi", 60, 1, {}, 50.0, {}}, {"Goa", 40, 1, {}, 50.0, {}}};
  return s;
}

bool HasViolation(const std::vector<Violation>& report, const std::string& field,
                  const std::string& needle) {
  return std::any_of(report.begin(), report.end(), [&](const Violation& v) {
    return v.field == field && v.message.find(needle) != std::string::npos;
  });
}

TEST(DateTest, RoundTrip) {
  auto d = ParseIsoDate("2021-04-20");
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(FormatIsoDate(*d), "2021-04-20");
  EXPECT_EQ(FormatIsoDate(*d + days{11}), "2021-05-01");
}

TEST(DateTest, RejectsMalformed) {
  EXPECT_FALSE(ParseIsoDate("2021-02-30"));
  EXPECT_FALSE(ParseIsoDate("2021-4-20"));
  EXPECT_FALSE(ParseIsoDate("20/04/2021"));
  EXPECT_FALSE(ParseIsoDate(""));
  EXPECT_FALSE(ParseIsoDate("2021-04-20x"));
}

TEST(EnumTest, ParseAndPrint) {
  for (auto level : {AllocationLevel::kCenter, AllocationLevel::kDistrict,
                     AllocationLevel::kProportional}) {
    EXPECT_EQ(ParseAllocationLevel(ToString(level)), level);
  }
  for (auto policy : {RedistributionPolicy::kEqual, RedistributionPolicy::kProportional}) {
    EXPECT_EQ(ParseRedistributionPolicy(ToString(policy)), policy);
  }
  EXPECT_FALSE(ParseAllocationLevel("state"));
  EXPECT_FALSE(ParseRedistributionPolicy("random"));
}

TEST(ValidateScenarioTest, WellFormedScenarioWithThirtyDayHistory) {
  Scenario s = TwoRegionScenario();
  const Date start = *ParseIsoDate("2021-03-22");
  for (int i = 0; i < 30; ++i) {
    s.regions[0].history.push_back({start + days{i}, 1000.0 + 10 * i});
  }
  EXPECT_TRUE(ValidateScenario(s).empty());
}

TEST(ValidateScenarioTest, DuplicateRegionName) {
  Scenario s = TwoRegionScenario();
  s.regions[1].name = "Delhi";
  const auto report = ValidateScenario(s);
  ASSERT_FALSE(report.empty());
  EXPECT_TRUE(HasViolation(report, "name", "duplicate region name \"Delhi\""));
}

TEST(ValidateScenarioTest, ZeroSeverity) {
  Scenario s = TwoRegionScenario();
  s.regions[0].severity = 0;
  const auto report = ValidateScenario(s);
  ASSERT_EQ(report.size(), 1u);
  EXPECT_EQ(report[0].region, "Delhi");
  EXPECT_EQ(report[0].field, "severity");
  EXPECT_NE(report[0].message.find("severity must be > 0"), std::string::npos);
}

TEST(ValidateScenarioTest, NonPositiveSupplyAndNegativeDemand) {
  Scenario s = TwoRegionScenario();
  s.supply = 0;
  s.regions[1].demand = -1;
  const auto report = ValidateScenario(s);
  EXPECT_TRUE(HasViolation(report, "supply", "supply must be > 0"));
  EXPECT_TRUE(HasViolation(report, "demand", "demand must be >= 0"));
}

TEST(ValidateScenarioTest, UnorderedHistoryIsReported) {
  Scenario s = TwoRegionScenario();
  const Date d = *ParseIsoDate("2021-04-20");
  s.regions[0].history = {{d, 5}, {d - days{1}, 4}};
  EXPECT_FALSE(ValidateScenario(s).empty());
}

TEST(ValidateScenarioTest, EmptyRegionListIsInvalid) {
  Scenario s = TwoRegionScenario();
  s.regions.clear();
  EXPECT_FALSE(ValidateScenario(s).empty());
}

TEST(ScenarioTest, FindRegion) {
  Scenario s = TwoRegionScenario();
  ASSERT_NE(s.FindRegion("Goa"), nullptr);
  EXPECT_EQ(s.FindRegion("Goa")->demand, 40);
  EXPECT_EQ(s.FindRegion("Kerala"), nullptr);
}

TEST(AllocationProblemTest, RejectsBadInstances) {
  EXPECT_THROW(AllocationProblem({}, {}, {}, 1), std::invalid_argument);
  EXPECT_THROW(AllocationProblem({1, 2}, {1}, {1, 1}, 1), std::invalid_argument);
  EXPECT_THROW(AllocationProblem({1, 0}, {1, 1}, {1, 1}, 1), std::invalid_argument);
  EXPECT_THROW(AllocationProblem({1, 1}, {1, -1}, {1, 1}, 1), std::invalid_argument);
  EXPECT_THROW(AllocationProblem({1, 1}, {1, 1}, {1, 0}, 1), std::invalid_argument);
  EXPECT_THROW(AllocationProblem({1, 1}, {1, 1}, {1, 1}, 0), std::invalid_argument);
  EXPECT_NO_THROW(AllocationProblem({1, 1}, {1, 1}, {1, 1}, 2));
}

TEST(DistrictProblemTest, RejectsBadInstances) {
  EXPECT_THROW(DistrictProblem({}, {}, 1), std::invalid_argument);
  EXPECT_THROW(DistrictProblem({1}, {1, 1}, 1), std::invalid_argument);
  EXPECT_THROW(DistrictProblem({1, 0}, {1, 1}, 1), std::invalid_argument);
  EXPECT_THROW(DistrictProblem({1, 1}, {1, 1}, -5), std::invalid_argument);
}

}  // namespace
}  // namespace hralloc
