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

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "fixtures.h"

namespace hralloc {
namespace {

using std::chrono::days;

TEST(LoadDemandsTest, CaseStudyFixture) {
  const auto rows = LoadDemandsFile(testing::DataFile("oxygen_demand_2021-04-20.csv"));
  ASSERT_EQ(rows.size(), 18u);
  EXPECT_EQ(rows.front().region, "Maharashtra");
  EXPECT_EQ(rows.front().demand, 1500);
  EXPECT_EQ(rows.back().region, "Himachal Pradesh");
  EXPECT_EQ(rows.back().demand, 15);
  double total = 0;
  for (const auto& r : rows) {
    total += r.demand;
    EXPECT_EQ(r.severity, 1.0);
  }
  EXPECT_EQ(total, testing::kCaseTotalDemand);
}

TEST(LoadDemandsTest, HeaderOnlyIsEmpty) {
  std::istringstream in("region,demand_mt,severity\n");
  EXPECT_TRUE(LoadDemands(in).empty());
}

TEST(LoadDemandsTest, NegativeDemandNamesRow) {
  std::istringstream in("region,demand_mt,severity\nA,10,1\nB,-5,1\n");
  try {
    LoadDemands(in);
    FAIL() << "expected IngestError";
  } catch (const IngestError& e) {
    EXPECT_STREQ(e.what(), "demand must be ≥ 0 (row 3)");
    EXPECT_EQ(e.row(), 3u);
    EXPECT_EQ(e.column(), "demand_mt");
  }
}

TEST(LoadDemandsTest, SeverityOptional) {
  std::istringstream in("region,demand_mt\nA,10\nB,2.5\n");
  const auto rows = LoadDemands(in);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].demand, 2.5);
  EXPECT_EQ(rows[1].severity, 1.0);
}

TEST(LoadDemandsTest, QuotedRegionAndBom) {
  std::istringstream in("\xEF\xBB\xBFregion,demand_mt,severity\n\"Dadra, Nagar\",4,2\n");
  const auto rows = LoadDemands(in);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].region, "Dadra, Nagar");
  EXPECT_EQ(rows[0].severity, 2);
}

TEST(LoadDemandsTest, Errors) {
  auto fails = [](const std::string& text, const std::string& needle) {
    std::istringstream in(text);
    try {
      LoadDemands(in);
    } catch (const IngestError& e) {
      return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
  };
  EXPECT_TRUE(fails("region,demand_mt\nA,10\nA,3\n", "duplicate region \"A\" (row 3)"));
  EXPECT_TRUE(fails("region,demand_mt\nA,ten\n", "invalid number \"ten\" in column demand_mt"));
  EXPECT_TRUE(fails("region,demand_mt\nA,1,2\n", "expected 2 columns"));
  EXPECT_TRUE(fails("region,demand\nA,1\n", "missing column \"demand_mt\""));
  EXPECT_TRUE(fails("region,demand_mt,severity\nA,1,0\n", "severity must be > 0 (row 2)"));
  EXPECT_TRUE(fails("region,demand_mt\n,1\n", "region must not be empty"));
  EXPECT_THROW(LoadDemandsFile("/nonexistent/demands.csv"), IngestError);
}

TEST(ParseDemandsTest, NeverDropsRows) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> kind(0, 5);
  std::uniform_int_distribution<int> rows(0, 40);
  for (int trial = 0; trial < 100; ++trial) {
    std::ostringstream text;
    text << "region,demand_mt,severity\n";
    const int n = rows(rng);
    for (int i = 0; i < n; ++i) {
      switch (kind(rng)) {
        case 0: text << "R" << i << ",-1,1\n"; break;
        case 1: text << "R" << i << ",abc,1\n"; break;
        case 2: text << "R0,5,1\n"; break;  // duplicate once R0 exists
        case 3: text << "R" << i << ",5\n"; break;
        default: text << "R" << i << "," << i << ".5,2\n"; break;
      }
    }
    std::istringstream in(text.str());
    const auto report = ParseDemands(in);
    EXPECT_EQ(report.data_rows, static_cast<std::size_t>(n));
    EXPECT_EQ(report.records.size() + report.errors.size(), report.data_rows);
  }
}

TEST(LoadCaseHistoryTest, CaseStudyFixture) {
  const HistoryMap h = LoadCaseHistoryFile(testing::DataFile("case_history_2021-04-20.csv"));
  EXPECT_EQ(h.size(), 18u);
  for (std::size_t i = 0; i < 18; ++i) {
    const CaseHistory& series = h.at(testing::kStates[i]);
    EXPECT_EQ(series.size(), 60u);
    EXPECT_EQ(FormatIsoDate(series.back().date), "2021-04-20");
    EXPECT_EQ(series.back().active, testing::kActiveOnApril20[i]) << testing::kStates[i];
  }
}

TEST(LoadCaseHistoryTest, TwoDates) {
  std::istringstream in("region,date,active\nGoa,2021-04-19,8000\nGoa,2021-04-20,8241\n");
  const HistoryMap h = LoadCaseHistory(in, HistoryFormat::kCsv);
  ASSERT_EQ(h.at("Goa").size(), 2u);
  EXPECT_EQ(h.at("Goa")[1].active, 8241);
}

TEST(LoadCaseHistoryTest, OrderInsensitive) {
  std::istringstream sorted(
      "region,date,active\nA,2021-04-01,1\nA,2021-04-02,2\nA,2021-04-03,3\nB,2021-04-01,9\n");
  std::istringstream shuffled(
      "region,date,active\nA,2021-04-03,3\nB,2021-04-01,9\nA,2021-04-01,1\nA,2021-04-02,2\n");
  EXPECT_EQ(LoadCaseHistory(sorted, HistoryFormat::kCsv),
            LoadCaseHistory(shuffled, HistoryFormat::kCsv));
}

TEST(LoadCaseHistoryTest, Errors) {
  auto fails = [](const std::string& text, HistoryFormat format, const std::string& needle) {
    std::istringstream in(text);
    try {
      LoadCaseHistory(in, format);
    } catch (const IngestError& e) {
      return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
  };
  const auto csv = HistoryFormat::kCsv;
  const auto js = HistoryFormat::kJson;
  EXPECT_TRUE(fails("region,date,active\nA,2021-13-01,1\n", csv, "invalid date"));
  EXPECT_TRUE(fails("region,date,active\nA,2021-04-01,-1\n", csv, "active count must be ≥ 0"));
  EXPECT_TRUE(fails("region,date,active\nA,2021-04-01,1\nA,2021-04-01,2\n", csv,
                    "duplicate entry for A on 2021-04-01 (row 3)"));
  EXPECT_TRUE(fails(R"([{"region":"A","date":"2021-04-01","active":-1}])", js,
                    "field 'active' must be >= 0"));
  EXPECT_TRUE(fails(R"([{"region":"A","date":"04/01/2021","active":1}])", js,
                    "field 'date' must be YYYY-MM-DD"));
  EXPECT_TRUE(fails(R"({"region":"A"})", js, "must be an array"));
  EXPECT_TRUE(fails("[", js, "malformed history JSON"));
}

TEST(LoadCaseHistoryTest, JsonMatchesCsv) {
  std::istringstream csv("region,date,active\nA,2021-04-01,1\nA,2021-04-02,5\n");
  std::istringstream js(
      R"([{"region":"A","date":"2021-04-02","active":5},{"region":"A","date":"2021-04-01","active":1}])");
  EXPECT_EQ(LoadCaseHistory(csv, HistoryFormat::kCsv),
            LoadCaseHistory(js, HistoryFormat::kJson));
}

TEST(LoadRegionValuesTest, FixtureTables) {
  const auto predicted =
      LoadRegionValuesFile(testing::DataFile("predicted_max_2021-04-20.csv"), "predicted_max");
  ASSERT_EQ(predicted.size(), 18u);
  EXPECT_EQ(predicted.at("Maharashtra"), 709082);
  const auto ideals = LoadRegionValuesFile(
      testing::DataFile("reoptimization_ideals_2021-04-20.csv"), "ideal_mt");
  ASSERT_EQ(ideals.size(), 9u);
  EXPECT_EQ(ideals.at("Chandigarh"), 33.42);
}

TEST(BuildScenarioTest, RejectsUnknownRegion) {
  ScenarioInputs in;
  in.supply = 10;
  in.demands = {{"A", 5, 1}};
  in.predicted = {{"B", 3}};
  EXPECT_THROW(BuildScenario(in), IngestError);
}

TEST(BuildScenarioTest, CaseStudyScenarioIsValid) {
  const Scenario s = testing::CaseStudyScenario();
  EXPECT_TRUE(ValidateScenario(s).empty());
  EXPECT_EQ(s.regions.size(), 18u);
  EXPECT_EQ(s.FindRegion("Chandigarh")->ideal_override, 33.42);
  EXPECT_FALSE(s.FindRegion("Goa")->ideal_override.has_value());
  EXPECT_EQ(s.FindRegion("Goa")->predicted_max, 13428);
}

// Round trip: scenario -> documented files -> scenario.
TEST(RoundTripTest, RandomScenariosSurviveCsvAndJson) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> regions(1, 12), length(0, 40);
  std::uniform_real_distribution<double> amount(0, 5000), severity(0.1, 4);
  std::uniform_int_distribution<int> active(0, 2'000'000), gap(1, 3);
  for (int trial = 0; trial < 50; ++trial) {
    ScenarioInputs in;
    in.supply = 100;
    const int n = regions(rng);
    for (int i = 0; i < n; ++i) {
      const std::string name = (i % 3 == 0 ? "Region, " : "R") + std::to_string(i);
      in.demands.push_back({name, amount(rng), severity(rng)});
      Date d = *ParseIsoDate("2021-01-01");
      const int m = length(rng);
      for (int t = 0; t < m; ++t) {
        in.histories[name].push_back({d, static_cast<double>(active(rng))});
        d += days{gap(rng)};
      }
      if (m == 0) in.histories.erase(name);
    }
    const Scenario original = BuildScenario(in);

    std::ostringstream demands_csv, history_csv;
    WriteDemandsCsv(demands_csv, DemandsOf(original));
    WriteHistoryCsv(history_csv, HistoriesOf(original));
    ScenarioInputs back;
    back.supply = 100;
    std::istringstream d_in(demands_csv.str()), h_in(history_csv.str());
    back.demands = LoadDemands(d_in);
    back.histories = LoadCaseHistory(h_in, HistoryFormat::kCsv);
    EXPECT_EQ(BuildScenario(back), original) << "trial " << trial;

    std::istringstream j_in(HistoryToJson(HistoriesOf(original)).dump());
    EXPECT_EQ(LoadCaseHistory(j_in, HistoryFormat::kJson), HistoriesOf(original));
  }
}

}  // namespace
}  // namespace hralloc
