/*
 * Copyright 2026 The polygam Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef POLYGAM_TOOLS_COMMANDS_H_
#define POLYGAM_TOOLS_COMMANDS_H_

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "run_config.h"

namespace polygam::cli {

enum ExitCode {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitData = 3,
  kExitNumeric = 4,
};

// Runs `fn`, mapping library exceptions to exit codes and printing the
// message to `err`.
int RunGuarded(const std::function<void()>& fn, std::ostream& err);

struct TrainOutcome {
  double train_loss = 0.0;
  std::optional<double> valid_loss;
  std::optional<double> test_loss;
  int best_iteration = 0;
  int iterations_run = 0;
};

// Writes model.json, train_log.jsonl, metrics.json and resolved_config.ini
// into config.output_dir, holding a lockfile there while running.
TrainOutcome CmdTrain(const RunConfig& config, std::ostream& log);

// Writes row_id, F_<i> and yhat_<i> columns. The input may hold the model's
// features in any order plus, optionally, its target column; its loss is
// then returned.
std::optional<double> CmdPredict(const std::filesystem::path& model_path,
                                 const std::filesystem::path& data_path,
                                 const std::filesystem::path& out_path);

struct ExplainArgs {
  std::filesystem::path model_path;
  std::vector<std::string> features;
  std::size_t grid_points = 512;
  bool with_ci = false;
  std::filesystem::path out_dir;
};

// Returns the number of shape functions written.
std::size_t CmdExplain(const ExplainArgs& args);

}  // namespace polygam::cli

#endif  // POLYGAM_TOOLS_COMMANDS_H_
