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

#include "commands.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "format.h"
#include "polygam/binning.h"
#include "polygam/booster.h"
#include "polygam/errors.h"
#include "polygam/explain.h"
#include "polygam/loss.h"
#include "polygam/model_io.h"

namespace polygam::cli {
namespace {

namespace fs = std::filesystem;

// Exclusive marker file in the output directory.
class DirectoryLock {
 public:
  explicit DirectoryLock(const fs::path& dir) : path_(dir / ".polygam.lock") {
    std::FILE* f = std::fopen(path_.c_str(), "wx");
    if (f == nullptr) {
      throw polygam::Error("output directory " + dir.string() +
                           " is locked by another run (remove " +
                           path_.string() + " if that run is gone)");
    }
    std::fclose(f);
  }
  ~DirectoryLock() {
    std::error_code ec;
    fs::remove(path_, ec);
  }
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  fs::path path_;
};

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw polygam::Error("cannot open " + path.string() + " for writing");
  file << text;
  if (!file) throw polygam::Error("failed to write " + path.string());
}

double PartitionLoss(const ParameterStore& model, const Dataset& data) {
  const Prediction p = model.Predict(data.features);
  const double loss = LossEval(data.targets, p.yhat, data.task);
  if (!std::isfinite(loss)) throw NumericError("non-finite loss");
  return loss;
}

nlohmann::ordered_json OptionalNumber(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

int RunGuarded(const std::function<void()>& fn, std::ostream& err) {
  try {
    fn();
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

TrainOutcome CmdTrain(const RunConfig& config, std::ostream& log) {
  const Dataset data =
      LoadCsv(config.data_path, config.target, config.task, config.categorical);
  const ConstraintSpec constraints = BuildConstraints(config, data);

  const Partition part = SplitRows(data, config.train_fraction,
                                   config.valid_fraction, config.seed);
  const Dataset train = data.Subset(part.train);
  const Dataset valid = data.Subset(part.valid);
  const Dataset test = data.Subset(part.test);
  if (train.num_rows() == 0) throw DataError("training partition is empty");

  fs::create_directories(config.output_dir);
  DirectoryLock lock(config.output_dir);

  const BinLayout layout = BuildLayout(train, config.scheme);
  TrainConfig tc = config.train;
  tc.seed = config.seed;
  const TrainResult result =
      Train(train, valid.num_rows() > 0 ? &valid : nullptr, layout,
            constraints, tc);
  for (const auto& w : result.warnings) log << "warning: " << w << "\n";

  TrainOutcome out;
  out.train_loss = PartitionLoss(result.model, train);
  if (valid.num_rows() > 0) out.valid_loss = PartitionLoss(result.model, valid);
  if (test.num_rows() > 0) out.test_loss = PartitionLoss(result.model, test);
  out.best_iteration = result.best_iteration;
  out.iterations_run = result.iterations_run;

  SaveModel(result.model, config.output_dir / "model.json");
  result.log.WriteJsonl(config.output_dir / "train_log.jsonl");

  nlohmann::ordered_json metrics;
  metrics["task"] = TaskName(data.task);
  metrics["loss"] = LossName(data.task);
  metrics["train"] = out.train_loss;
  metrics["valid"] = OptionalNumber(out.valid_loss);
  metrics["test"] = OptionalNumber(out.test_loss);
  metrics["best_iteration"] = out.best_iteration;
  metrics["iterations_run"] = out.iterations_run;
  metrics["n_train"] = train.num_rows();
  metrics["n_valid"] = valid.num_rows();
  metrics["n_test"] = test.num_rows();
  WriteText(config.output_dir / "metrics.json", metrics.dump(2) + "\n");
  WriteText(config.output_dir / "resolved_config.ini", ResolvedConfigText(config));

  log << "trained " << out.iterations_run << " iterations, best "
      << out.best_iteration << "; " << LossName(data.task)
      << " train=" << FormatNumber(out.train_loss);
  if (out.valid_loss) log << " valid=" << FormatNumber(*out.valid_loss);
  if (out.test_loss) log << " test=" << FormatNumber(*out.test_loss);
  log << "\n";
  return out;
}

std::optional<double> CmdPredict(const fs::path& model_path,
                                 const fs::path& data_path,
                                 const fs::path& out_path) {
  const ParameterStore model = LoadModel(model_path);
  const CsvTable table = ReadCsvTable(data_path);
  const auto& names = model.feature_names();

  std::vector<int> source(names.size(), -1);
  int target_col = -1;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    const std::string& h = table.header[c];
    const auto it = std::find(names.begin(), names.end(), h);
    if (it != names.end()) {
      source[static_cast<std::size_t>(it - names.begin())] = static_cast<int>(c);
    } else if (!model.target_name().empty() && h == model.target_name()) {
      target_col = static_cast<int>(c);
    } else {
      throw DataError("column '" + h + "' is not a feature of the model");
    }
  }
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (source[k] < 0) throw DataError("missing feature column '" + names[k] + "'");
  }

  Matrix features(table.rows.size(), names.size());
  std::vector<double> targets;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    for (std::size_t k = 0; k < names.size(); ++k) {
      features(r, k) = table.rows[r][static_cast<std::size_t>(source[k])];
    }
    if (target_col >= 0) targets.push_back(table.rows[r][static_cast<std::size_t>(target_col)]);
  }
  const Prediction pred = model.Predict(features);

  std::string text = "row_id";
  const int J = model.num_outputs();
  for (int i = 0; i < J; ++i) text += ",F_" + std::to_string(i);
  for (int i = 0; i < J; ++i) text += ",yhat_" + std::to_string(i);
  text += '\n';
  for (std::size_t r = 0; r < features.rows(); ++r) {
    text += std::to_string(r);
    for (std::size_t i = 0; i < static_cast<std::size_t>(J); ++i) {
      text += ',' + FormatNumber(pred.scores(r, i));
    }
    for (std::size_t i = 0; i < static_cast<std::size_t>(J); ++i) {
      text += ',' + FormatNumber(pred.yhat(r, i));
    }
    text += '\n';
  }
  WriteText(out_path, text);

  if (target_col < 0 || targets.empty()) return std::nullopt;
  if (model.task() != Task::kRegression) {
    const double limit = model.task() == Task::kBinary ? 2.0 : J;
    for (double y : targets) {
      if (y != std::floor(y) || y < 0 || y >= limit) {
        throw DataError("target value out of range for the model's task");
      }
    }
  }
  return LossEval(targets, pred.yhat, model.task());
}

std::size_t CmdExplain(const ExplainArgs& args) {
  if (args.grid_points < 2) throw ConfigError("--grid must be at least 2");
  const ParameterStore model = LoadModel(args.model_path);
  ExportOptions options;
  options.features = args.features;
  options.grid_points = args.grid_points;
  options.with_ci = args.with_ci;
  return ExportShapes(model, options, args.out_dir).size();
}

}  // namespace polygam::cli
