// Copyright 2026 The dpqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpqc/experiment.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "dpqc/csv.h"
#include "dpqc/error.h"
#include "dpqc/linfeas.h"

namespace dpqc {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string TempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("dpqc_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST_CASE("dataset generation is deterministic and well formed") {
  const std::string dir = TempDir("gen");
  const std::string a = dir + "/a.csv";
  const std::string b = dir + "/b.csv";
  GenerateDataset("cluster-points", {{"d", 2}, {"x", 4}, {"n", 100}}, 7, a);
  GenerateDataset("cluster-points", {{"d", 2}, {"x", 4}, {"n", 100}}, 7, b);
  CHECK(Slurp(a) == Slurp(b));
  GenerateDataset("cluster-points", {{"d", 2}, {"x", 4}, {"n", 100}}, 8, b);
  CHECK(Slurp(a) != Slurp(b));

  // The counterexample file is exactly the documented multiset.
  const std::string ce = dir + "/ce.csv";
  GenerateDataset("counterexample", {{"n", 4}}, 1, ce);
  const CsvTable table = ReadCsv(ce);
  REQUIRE(table.rows.size() == 4);
  int plus = 0;
  for (const auto& row : table.rows) {
    CHECK(row[2] == "-1");
    if (row[0] == "1") ++plus;
  }
  CHECK(plus == 3);

  // Planted-feasible systems are certified by the planted point.
  const std::string pf = dir + "/pf.csv";
  GenerateDataset("planted-feasible", {{"d", 2}, {"x", 4}, {"n", 100}}, 9, pf);
  const CsvTable pft = ReadCsv(pf);
  std::vector<Constraint> cs;
  for (const auto& row : pft.rows) {
    cs.push_back(Constraint{{std::stoll(row[0]), std::stoll(row[1])},
                            std::stoll(row[2])});
  }
  const ConstraintSet set(2, 4, cs);
  CHECK(Depth(set, {Rational(0), Rational(0)}) == 100);
}

TEST_CASE("tukey smoke experiment meets its success target") {
  const std::string dir = TempDir("tukey");
  ExperimentConfig config = ExperimentConfig::FromJson(json{
      {"task", "tukey"},
      {"seed", 20260809},
      {"d", 1},
      {"x", 50},
      {"n", 400},
      {"alpha", 0.2},
      {"beta", 0.1},
      {"epsilon", 1.0},
      {"delta", 0.05},
      {"trials", 20},
      {"clusters", 1},
      {"spread", 30},
      {"out", dir},
  });
  const ExperimentOutcome outcome = RunExperiment(config);
  CHECK(outcome.exit_code == kExitOk);
  REQUIRE(outcome.rows.size() == 20);
  CHECK(outcome.summary["success_rate"].get<double>() >= 0.9);
  CHECK(fs::exists(outcome.results_csv_path));
  CHECK(fs::exists(outcome.summary_json_path));
  // The per-row budget ledger never exceeds the configured budget.
  for (const ResultRow& row : outcome.rows) {
    CHECK(row.epsilon_total <= 1.0 + 1e-9);
    CHECK(row.delta_total <= 0.05 + 1e-9);
  }
}

TEST_CASE("identical seeds reproduce results.csv byte for byte") {
  const std::string dir1 = TempDir("rep1");
  const std::string dir2 = TempDir("rep2");
  const json base = {
      {"task", "ip-bench"}, {"seed", 99},   {"x", 256},
      {"beta", 0.05},       {"epsilon", 1.0}, {"trials", 40},
  };
  json j1 = base;
  j1["out"] = dir1;
  json j2 = base;
  j2["out"] = dir2;
  const ExperimentOutcome o1 = RunExperiment(ExperimentConfig::FromJson(j1));
  const ExperimentOutcome o2 = RunExperiment(ExperimentConfig::FromJson(j2));
  CHECK(o1.exit_code == kExitOk);
  CHECK(Slurp(o1.results_csv_path) == Slurp(o2.results_csv_path));
}

TEST_CASE("malformed csv input yields the input-error exit code") {
  const std::string dir = TempDir("bad");
  const std::string bad = dir + "/bad.csv";
  {
    std::ofstream out(bad);
    out << "x1,x2\n1,2\n3\n";
  }
  ExperimentConfig config = ExperimentConfig::FromJson(json{
      {"task", "tukey"}, {"seed", 5}, {"d", 2}, {"x", 4},
      {"input", bad},    {"out", dir},
  });
  const ExperimentOutcome outcome = RunExperiment(config);
  CHECK(outcome.exit_code == kExitInputError);
  const std::string err = outcome.summary["error"].get<std::string>();
  CHECK(err.find(":3") != std::string::npos);  // line number in diagnostic
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(ExperimentConfig::FromJson(json{{"task", "tukey"}}),
                  ParameterError);  // missing seed
  CHECK_THROWS_AS(
      ExperimentConfig::FromJson(json{{"task", "tukey"}, {"seed", 1},
                                      {"trials", 0}}),
      ParameterError);
  const ExperimentOutcome outcome = RunExperiment(ExperimentConfig::FromJson(
      json{{"task", "no-such-task"}, {"seed", 1}}));
  CHECK(outcome.exit_code == kExitInputError);
}

TEST_CASE("insufficient samples map to their exit code") {
  const std::string dir = TempDir("insuff");
  ExperimentConfig config = ExperimentConfig::FromJson(json{
      {"task", "tukey"}, {"seed", 3}, {"d", 1}, {"x", 50}, {"n", 10},
      {"alpha", 0.2},    {"beta", 0.1}, {"epsilon", 1.0}, {"delta", 0.05},
      {"trials", 3},     {"clusters", 1}, {"spread", 30}, {"out", dir},
  });
  const ExperimentOutcome outcome = RunExperiment(config);
  CHECK(outcome.exit_code == kExitInsufficientSamples);
  for (const ResultRow& row : outcome.rows) {
    CHECK(!row.error.empty());
  }
}

TEST_CASE("audit-acml verdict on a reduced run") {
  const std::string dir = TempDir("acml");
  ExperimentConfig config = ExperimentConfig::FromJson(json{
      {"task", "audit-acml"}, {"seed", 17}, {"n", 40}, {"trials", 150},
      {"epsilon", 1.0}, {"delta", 0.0}, {"alpha", 0.1}, {"beta", 0.05},
      {"grid_count", 501}, {"c", 60}, {"out", dir},
  });
  const ExperimentOutcome outcome = RunExperiment(config);
  CHECK(outcome.exit_code == kExitOk);
  CHECK(outcome.summary["verdict"] == "DP violated");
  CHECK(outcome.summary["audit_report"]["unbounded_at_resolution"].get<bool>());
}

TEST_CASE("generic audit of the exp-mech interior point") {
  const std::string dir = TempDir("audit");
  json s = json::array();
  json s_prime = json::array();
  for (int i = 0; i < 10; ++i) s.push_back(-8);
  for (int i = 0; i < 10; ++i) s.push_back(8);
  s_prime = s;
  s_prime[0] = 8;
  ExperimentConfig config = ExperimentConfig::FromJson(json{
      {"task", "audit"}, {"seed", 23}, {"x", 16}, {"trials", 4000},
      {"epsilon", 1.0}, {"beta", 0.45},
      {"mechanism", "exp-mech-ip"},
      {"s", s}, {"s_prime", s_prime},
      {"event", {{"type", "le"}, {"value", 0.0}}},
      {"out", dir},
  });
  const ExperimentOutcome outcome = RunExperiment(config);
  CHECK(outcome.exit_code == kExitOk);
  CHECK(outcome.summary["verdict"] == "consistent");
}

TEST_CASE("predict applies a stored hypothesis") {
  const std::string dir = TempDir("predict");
  const std::string hyp_path = dir + "/h.json";
  {
    std::ofstream h(hyp_path);
    h << R"({"weights":[{"num":"1","den":"1"}],"threshold":{"num":"3","den":"2"}})";
  }
  const std::string data = dir + "/data.csv";
  {
    std::ofstream out(data);
    out << "x1,label\n0,-1\n1,-1\n2,1\n3,1\n-2,-1\n2,-1\n";
  }
  const double err = PredictWithHypothesis(hyp_path, data, dir + "/pred.csv");
  // Threshold 3/2 classifies everything right except the mislabeled (2,-1).
  CHECK(err == doctest::Approx(1.0 / 6));
  const CsvTable preds = ReadCsv(dir + "/pred.csv");
  CHECK(preds.rows.size() == 6);
}

}  // namespace
}  // namespace dpqc
