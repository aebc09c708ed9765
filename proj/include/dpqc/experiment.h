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
//
// Experiment driver shared by the CLI and the acceptance suite: dataset
// generation, per-trial execution with derived seeds, CSV/JSON artifacts.

#ifndef DPQC_EXPERIMENT_H_
#define DPQC_EXPERIMENT_H_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dpqc/dp_core.h"
#include "dpqc/grid.h"

namespace dpqc {

// Exit-code contract of the runner.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternalError = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitInsufficientSamples = 3;

struct ExperimentConfig {
  std::string task;  // tukey | linfeas | learn-halfspace | ip-bench |
                     // approx-check | audit-acml | audit
  int d = 1;
  int64_t x_bound = 4;
  int64_t n = 0;
  double alpha = 0.1;
  double beta = 0.05;
  double epsilon = 1.0;
  double delta = 0.0;
  std::optional<int64_t> t_override;
  GridConfig grid_overrides;
  uint64_t seed = 0;
  int64_t trials = 1;
  std::string input_path;
  std::string output_dir = ".";
  int workers = 0;  // 0: hardware concurrency
  nlohmann::json extras;  // task-specific knobs

  static ExperimentConfig FromJson(const nlohmann::json& j);
  static ExperimentConfig FromJsonFile(const std::string& path);
};

struct ResultRow {
  std::string task;
  int64_t trial = 0;
  uint64_t seed = 0;
  double utility = 0;
  double target = 0;
  bool success = false;
  double wall_ms = 0;  // reported in the summary, not the CSV, so reruns
                       // with one seed reproduce the CSV byte for byte
  double epsilon_total = 0;
  double delta_total = 0;
  std::string error;  // nonempty when the trial failed to complete
};

struct ExperimentOutcome {
  int exit_code = kExitInternalError;
  std::vector<ResultRow> rows;
  nlohmann::json summary;
  std::string results_csv_path;
  std::string summary_json_path;
};

// Runs config.trials independent trials (seed xor trial index each) and
// writes results.csv plus summary.json under config.output_dir. Exit code 0
// means every trial completed, not that every trial succeeded.
ExperimentOutcome RunExperiment(const ExperimentConfig& config);

// Deterministic dataset files; identical seeds give identical bytes.
// Kinds: cluster-points | planted-feasible | threshold-labeled |
// counterexample.
void GenerateDataset(const std::string& kind, const nlohmann::json& params,
                     uint64_t seed, const std::string& out_path);

// Applies a stored hypothesis JSON to a labeled CSV; returns error rate and
// writes per-row predictions when out_path is nonempty.
double PredictWithHypothesis(const std::string& hypothesis_path,
                             const std::string& input_csv,
                             const std::string& out_path);

}  // namespace dpqc

#endif  // DPQC_EXPERIMENT_H_
