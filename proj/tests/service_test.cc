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

#include "hralloc/service.h"

#include <gtest/gtest.h>

#include <future>
#include <numeric>

#include "fixtures.h"
#include "hralloc/json_io.h"
#include "local_server.h"

namespace hralloc {
namespace {

using nlohmann::json;

const json kFixtureSolve = {{"use_fixture_predicted", true}, {"use_ideal_override", true}};

class ServiceTest : public ::testing::Test {
 protected:
  std::string CreateCaseStudy() {
    const ApiResponse r =
        service_.CreateScenario(ScenarioToJson(testing::CaseStudyScenario()).dump());
    EXPECT_EQ(r.status, 201) << r.body.dump();
    return r.body["id"].get<std::string>();
  }

  static double FinalTotal(const json& plan) {
    double sum = 0;
    for (const auto& row : plan["stage_final"]) sum += row["amount"].get<double>();
    return sum;
  }

  ScenarioStore store_;
  AllocationService service_{store_};
};

TEST_F(ServiceTest, CreateEchoesRegions) {
  const ApiResponse r =
      service_.CreateScenario(ScenarioToJson(testing::CaseStudyScenario()).dump());
  EXPECT_EQ(r.status, 201);
  EXPECT_EQ(r.body["regions"].size(), 18u);
  EXPECT_EQ(r.body["id"], "scn-000001");
  EXPECT_EQ(r.body["revision"], 1);
  EXPECT_EQ(r.headers.at("ETag"), "\"1\"");
  EXPECT_EQ(service_.ListScenarios().body.size(), 1u);
}

TEST_F(ServiceTest, CreateRejectsDuplicateRegion) {
  json doc = ScenarioToJson(testing::CaseStudyScenario());
  doc["regions"][1]["name"] = "Maharashtra";
  const ApiResponse r = service_.CreateScenario(doc.dump());
  EXPECT_EQ(r.status, 400);
  EXPECT_NE(r.body["error"].get<std::string>().find("duplicate region name \"Maharashtra\""),
            std::string::npos);
  EXPECT_EQ(r.body["violations"][0]["field"], "name");
}

TEST_F(ServiceTest, CreateRejectsZeroSupply) {
  json doc = ScenarioToJson(testing::CaseStudyScenario());
  doc["supply"] = 0;
  const ApiResponse r = service_.CreateScenario(doc.dump());
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(r.body["error"], "supply must be > 0");
}

TEST_F(ServiceTest, CreateRejectsMalformedBodies) {
  EXPECT_EQ(service_.CreateScenario("{").status, 400);
  EXPECT_EQ(service_.CreateScenario(R"({"regions": []})").status, 400);
}

TEST_F(ServiceTest, PatchDemandBumpsRevision) {
  const std::string id = CreateCaseStudy();
  const ApiResponse r = service_.PatchScenario(
      id, R"({"regions": [{"name": "Gujarat", "demand": 800}]})", "\"1\"");
  ASSERT_EQ(r.status, 200) << r.body.dump();
  EXPECT_EQ(r.body["revision"], 2);
  EXPECT_EQ(r.headers.at("ETag"), "\"2\"");
  const Scenario s = ScenarioFromJson(service_.GetScenario(id).body);
  EXPECT_EQ(s.FindRegion("Gujarat")->demand, 800);
  EXPECT_EQ(s.FindRegion("Maharashtra")->demand, 1500);
  EXPECT_EQ(s.supply, 5000);
}

TEST_F(ServiceTest, PatchErrors) {
  const std::string id = CreateCaseStudy();
  EXPECT_EQ(service_.PatchScenario(id, R"({"regions": [{"name": "Atlantis", "demand": 1}]})", "")
                .status,
            400);
  EXPECT_EQ(service_.PatchScenario(id, R"({"unit": "kg"})", "").status, 400);
  EXPECT_EQ(service_.PatchScenario(id, R"({"supply": -1})", "").status, 400);
  EXPECT_EQ(service_.PatchScenario("scn-999999", R"({"supply": 1})", "").status, 404);
  const ApiResponse stale = service_.PatchScenario(id, R"({"supply": 4000})", "\"7\"");
  EXPECT_EQ(stale.status, 409);
  EXPECT_EQ(stale.body["current_revision"], 1);
  // Failed patches leave the scenario untouched.
  EXPECT_EQ(service_.GetScenario(id).body["revision"], 1);
  EXPECT_EQ(service_.GetScenario(id).body["supply"], 5000.0);
}

TEST_F(ServiceTest, GetUnknownIs404) {
  EXPECT_EQ(service_.GetScenario("scn-000404").status, 404);
  EXPECT_EQ(service_.SolveScenario("scn-000404", "").status, 404);
  EXPECT_EQ(service_.GetForecast("scn-000404", std::nullopt).status, 404);
}

TEST_F(ServiceTest, SolveMatchesFinalAllocation) {
  const std::string id = CreateCaseStudy();
  const ApiResponse r = service_.SolveScenario(id, kFixtureSolve.dump());
  ASSERT_EQ(r.status, 200) << r.body.dump();
  const json& rows = r.body["stage_final"];
  for (std::size_t i = 0; i < 18; ++i) {
    EXPECT_EQ(rows[i]["region"], testing::kStates[i]);
    EXPECT_NEAR(rows[i]["amount"].get<double>(), testing::kFinalAllocation[i], 5.0);
  }
  EXPECT_NEAR(FinalTotal(r.body), 5000, 1e-6);
  EXPECT_TRUE(r.body["stage_optimized"].contains("lambda"));
}

TEST_F(ServiceTest, SolveAfterSupplyPatchConserves) {
  const std::string id = CreateCaseStudy();
  ASSERT_EQ(service_.PatchScenario(id, R"({"supply": 6595})", "").status, 200);
  const ApiResponse r = service_.SolveScenario(id, kFixtureSolve.dump());
  ASSERT_EQ(r.status, 200) << r.body.dump();
  EXPECT_NEAR(FinalTotal(r.body) + r.body["surplus"].get<double>(), 6595, 1e-6);
  EXPECT_GT(FinalTotal(r.body), 5000);
}

TEST_F(ServiceTest, SingleRegionGetsMinOfDemandAndSupply) {
  for (double supply : {40.0, 10.0}) {
    Scenario s;
    s.name = "one";
    s.supply = supply;
    s.regions = {{"Goa", 30, 1, {}, 50.0, {}}};
    const std::string id =
        service_.CreateScenario(ScenarioToJson(s).dump()).body["id"].get<std::string>();
    const ApiResponse r = service_.SolveScenario(id, R"({"use_fixture_predicted": true})");
    ASSERT_EQ(r.status, 200);
    EXPECT_NEAR(r.body["stage_final"][0]["amount"].get<double>(), std::min(30.0, supply), 1e-9);
  }
}

TEST_F(ServiceTest, SolveErrors) {
  const std::string id = CreateCaseStudy();
  EXPECT_EQ(service_.SolveScenario(id, R"({"level": "state"})").status, 400);
  EXPECT_EQ(service_.SolveScenario(id, "not json").status, 400);
  // Ideal overrides exist only for the nine re-optimized states.
  ASSERT_EQ(service_.PatchScenario(id, R"({"regions": [{"name": "Goa", "demand": 5000}]})", "")
                .status,
            200);
  const ApiResponse r = service_.SolveScenario(id, kFixtureSolve.dump());
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(r.body["stage"], "optimize");
}

TEST_F(ServiceTest, SolveIsReadOnly) {
  const std::string id = CreateCaseStudy();
  const json before = service_.GetScenario(id).body;
  service_.SolveScenario(id, kFixtureSolve.dump());
  service_.SolveScenario(id, "");
  EXPECT_EQ(service_.GetScenario(id).body, before);
}

TEST_F(ServiceTest, ConcurrentSolvesAgree) {
  const std::string id = CreateCaseStudy();
  std::vector<std::future<ApiResponse>> runs;
  for (int i = 0; i < 8; ++i) {
    runs.push_back(std::async(std::launch::async,
                              [&] { return service_.SolveScenario(id, kFixtureSolve.dump()); }));
  }
  const json first = runs[0].get().body;
  for (std::size_t i = 1; i < runs.size(); ++i) EXPECT_EQ(runs[i].get().body, first);
}

TEST_F(ServiceTest, ConcurrentPatchesSerializeOnRevision) {
  const std::string id = CreateCaseStudy();
  std::vector<std::future<int>> runs;
  for (int i = 0; i < 8; ++i) {
    runs.push_back(std::async(std::launch::async, [&, i] {
      return service_
          .PatchScenario(id, json{{"supply", 4000 + i}}.dump(), "\"1\"")
          .status;
    }));
  }
  int ok = 0, conflict = 0;
  for (auto& f : runs) {
    const int status = f.get();
    ok += status == 200;
    conflict += status == 409;
  }
  EXPECT_EQ(ok, 1);
  EXPECT_EQ(conflict, 7);
  EXPECT_EQ(service_.GetScenario(id).body["revision"], 2);
}

TEST_F(ServiceTest, ForecastShapes) {
  const std::string id = CreateCaseStudy();
  ApiResponse r = service_.GetForecast(id, std::nullopt);
  ASSERT_EQ(r.status, 200);
  ASSERT_EQ(r.body.size(), 18u);
  for (const auto& row : r.body) EXPECT_EQ(row["predicted"].size(), 7u);
  r = service_.GetForecast(id, 1);
  for (const auto& row : r.body) EXPECT_EQ(row["predicted"].size(), 1u);
  EXPECT_EQ(service_.GetForecast(id, 0).status, 400);
}

TEST_F(ServiceTest, ForecastMatchesForecastModule) {
  const std::string id = CreateCaseStudy();
  const json rows = service_.GetForecast(id, std::nullopt).body;
  const Scenario s = testing::CaseStudyScenario();
  ForecastResult f = FitForecast(s.regions[0].history, 7);
  f.region = s.regions[0].name;
  EXPECT_EQ(rows[0], ForecastToJson(f));
}

TEST_F(ServiceTest, ForecastNamesShortHistories) {
  Scenario s = testing::CaseStudyScenario();
  s.regions[15].history.resize(1);
  const std::string id =
      service_.CreateScenario(ScenarioToJson(s).dump()).body["id"].get<std::string>();
  const ApiResponse r = service_.GetForecast(id, std::nullopt);
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(r.body["error"], "insufficient history");
  EXPECT_EQ(r.body["regions"], json::array({"Goa"}));
}

TEST(ScenarioStoreTest, PersistsAcrossRestart) {
  testing::TempDir dir;
  const auto path = dir / "store.json";
  std::string id;
  {
    ScenarioStore store(path);
    AllocationService service(store);
    id = service.CreateScenario(ScenarioToJson(testing::CaseStudyScenario()).dump())
             .body["id"]
             .get<std::string>();
    service.PatchScenario(id, R"({"supply": 4500})", "");
  }
  ScenarioStore reopened(path);
  const auto s = reopened.Get(id);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->supply, 4500);
  EXPECT_EQ(s->revision, 2);
  EXPECT_EQ(s->regions.size(), 18u);
  // Ids keep counting after a restart.
  EXPECT_EQ(reopened.Create(*s).id, "scn-000002");
}

TEST(HttpServiceTest, RoutesAndCors) {
  ScenarioStore store;
  AllocationService service(store);
  testing::LocalServer server([&](httplib::Server& s) { service.Mount(s, "http://ui.local"); });
  httplib::Client client("127.0.0.1", server.port());

  auto created = client.Post("/api/v1/scenarios",
                             ScenarioToJson(testing::CaseStudyScenario()).dump(),
                             "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  EXPECT_EQ(created->get_header_value("Access-Control-Allow-Origin"), "http://ui.local");
  const std::string id = json::parse(created->body)["id"];

  auto patched = client.Patch("/api/v1/scenarios/" + id,
                              httplib::Headers{{"If-Match", "\"1\""}},
                              R"({"regions": [{"name": "Gujarat", "demand": 800}]})",
                              "application/json");
  ASSERT_TRUE(patched);
  EXPECT_EQ(patched->status, 200);
  EXPECT_EQ(patched->get_header_value("ETag"), "\"2\"");

  auto stale = client.Patch("/api/v1/scenarios/" + id, httplib::Headers{{"If-Match", "\"1\""}},
                            R"({"supply": 1})", "application/json");
  ASSERT_TRUE(stale);
  EXPECT_EQ(stale->status, 409);

  auto solved = client.Post("/api/v1/scenarios/" + id + "/solve", kFixtureSolve.dump(),
                            "application/json");
  ASSERT_TRUE(solved);
  EXPECT_EQ(solved->status, 200);
  EXPECT_EQ(json::parse(solved->body)["schema"], "alloc-plan/1");

  auto forecast = client.Get("/api/v1/scenarios/" + id + "/forecast?horizon=3");
  ASSERT_TRUE(forecast);
  EXPECT_EQ(json::parse(forecast->body)[0]["predicted"].size(), 3u);
  auto bad_horizon = client.Get("/api/v1/scenarios/" + id + "/forecast?horizon=abc");
  ASSERT_TRUE(bad_horizon);
  EXPECT_EQ(bad_horizon->status, 400);

  auto listed = client.Get("/api/v1/scenarios");
  ASSERT_TRUE(listed);
  EXPECT_EQ(json::parse(listed->body).size(), 1u);

  auto preflight = client.Options("/api/v1/scenarios/" + id);
  ASSERT_TRUE(preflight);
  EXPECT_LT(preflight->status, 300);
  EXPECT_NE(preflight->get_header_value("Access-Control-Allow-Methods").find("PATCH"),
            std::string::npos);
}

}  // namespace
}  // namespace hralloc
