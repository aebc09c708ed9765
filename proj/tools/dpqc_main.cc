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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "dpqc/error.h"
#include "dpqc/experiment.h"

namespace {

constexpr const char* kTasks[] = {"tukey",    "linfeas",     "learn-halfspace",
                                  "ip-bench", "approx-check", "audit-acml",
                                  "audit"};

struct TaskArgs {
  std::string config_path;
  std::string out_dir;
  int64_t seed = -1;
  int64_t trials = 0;
  bool has_seed = false;
};

int RunTask(const std::string& task, const TaskArgs& args) {
  try {
    dpqc::ExperimentConfig config =
        dpqc::ExperimentConfig::FromJsonFile(args.config_path);
    if (config.task != task) {
      std::cerr << "config task '" << config.task << "' does not match the '"
                << task << "' subcommand\n";
      return dpqc::kExitInputError;
    }
    if (args.has_seed) config.seed = static_cast<uint64_t>(args.seed);
    if (args.trials > 0) config.trials = args.trials;
    if (!args.out_dir.empty()) config.output_dir = args.out_dir;
    const dpqc::ExperimentOutcome outcome = dpqc::RunExperiment(config);
    if (outcome.summary.contains("error")) {
      std::cerr << outcome.summary["error"].get<std::string>() << "\n";
    } else {
      std::cout << outcome.summary.dump(2) << "\n";
    }
    return outcome.exit_code;
  } catch (const dpqc::IoError& e) {
    std::cerr << e.what() << "\n";
    return dpqc::kExitInputError;
  } catch (const dpqc::ParameterError& e) {
    std::cerr << e.what() << "\n";
    return dpqc::kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return dpqc::kExitInternalError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dpqc: differentially private quasi-concave optimization"};
  app.require_subcommand(1);

  TaskArgs task_args;
  std::string picked_task;
  for (const char* task : kTasks) {
    CLI::App* sub = app.add_subcommand(
        task, std::string("run the ") + task + " experiment");
    sub->add_option("--config", task_args.config_path, "JSON config path")
        ->required();
    sub->add_option("--seed", task_args.seed, "override the config seed");
    sub->add_option("--trials", task_args.trials, "override the trial count");
    sub->add_option("--out", task_args.out_dir, "output directory");
    sub->callback([task, &picked_task, &task_args]() {
      picked_task = task;
      task_args.has_seed = task_args.seed >= 0;
    });
  }

  std::string gen_kind, gen_out, gen_params;
  int64_t gen_seed = 1;
  CLI::App* gen = app.add_subcommand("generate", "write a dataset CSV");
  gen->add_option("--kind", gen_kind,
                  "cluster-points | planted-feasible | threshold-labeled | "
                  "counterexample")
      ->required();
  gen->add_option("--out", gen_out, "output CSV path")->required();
  gen->add_option("--seed", gen_seed, "generator seed")->required();
  gen->add_option("--params", gen_params, "JSON parameter object");

  std::string pred_hypothesis, pred_input, pred_out;
  CLI::App* pred = app.add_subcommand(
      "predict", "apply a stored hypothesis to a labeled CSV");
  pred->add_option("--hypothesis", pred_hypothesis, "hypothesis JSON path")
      ->required();
  pred->add_option("--input", pred_input, "labeled CSV path")->required();
  pred->add_option("--out", pred_out, "predictions CSV path");

  CLI11_PARSE(app, argc, argv);

  if (!picked_task.empty()) return RunTask(picked_task, task_args);

  try {
    if (gen->parsed()) {
      nlohmann::json params = nlohmann::json::object();
      if (!gen_params.empty()) params = nlohmann::json::parse(gen_params);
      dpqc::GenerateDataset(gen_kind, params, static_cast<uint64_t>(gen_seed),
                            gen_out);
      return dpqc::kExitOk;
    }
    if (pred->parsed()) {
      const double err =
          dpqc::PredictWithHypothesis(pred_hypothesis, pred_input, pred_out);
      std::cout << "{\"error_rate\": " << err << "}\n";
      return dpqc::kExitOk;
    }
  } catch (const dpqc::IoError& e) {
    std::cerr << e.what() << "\n";
    return dpqc::kExitInputError;
  } catch (const dpqc::ParameterError& e) {
    std::cerr << e.what() << "\n";
    return dpqc::kExitInputError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << e.what() << "\n";
    return dpqc::kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return dpqc::kExitInternalError;
  }
  return dpqc::kExitInputError;
}
