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

#include "polygam/booster.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "parallel.h"
#include "polygam/errors.h"
#include "polygam/loss.h"
#include "polygam/uncertainty.h"
#include "split_search.h"

namespace polygam {
namespace {

using internal::BinnedColumn;
using internal::IntPow;

// Adds the update of `c` to column `output` of the score matrix.
void ApplyToScores(const SplitCandidate& c, const FeatureBins& bins,
                   const Matrix& features, double nu, Matrix& scores) {
  const auto k = static_cast<std::size_t>(c.feature);
  for (std::size_t n = 0; n < features.rows(); ++n) {
    const double x = features(n, k);
    double delta;
    if (c.kind == CandidateKind::kGlobal) {
      delta = nu * c.gamma_left * IntPow(x - bins.min_value, c.degree);
    } else {
      const double gamma = x < c.threshold ? c.gamma_left : c.gamma_right;
      delta = nu * gamma * IntPow(x - c.threshold, c.degree);
    }
    scores(n, static_cast<std::size_t>(c.output)) += delta;
  }
}

void ApplyToStore(const SplitCandidate& c, double nu, ParameterStore& store) {
  const auto k = static_cast<std::size_t>(c.feature);
  if (c.kind == CandidateKind::kGlobal) {
    store.AccumulateGlobal(c.output, k, c.degree, c.gamma_left, nu);
  } else if (c.kind == CandidateKind::kSplit) {
    store.AccumulateUpdate(c.output, k, c.degree, c.threshold, c.gamma_left,
                           c.gamma_right, nu);
  }
}

double Loss(const Dataset& data, const Matrix& scores) {
  return LossEval(data.targets, LinkApply(scores, data.task), data.task);
}

std::vector<double> Column(const Matrix& m, std::size_t c) {
  return m.column(c);
}

}  // namespace

void TrainConfig::Validate() const {
  std::vector<std::string> problems;
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
    problems.push_back("learning_rate must lie in (0, 1]");
  }
  if (!(l1 >= 0.0 && std::isfinite(l1))) problems.push_back("l1 must be >= 0");
  if (!(l2 >= 0.0 && std::isfinite(l2))) problems.push_back("l2 must be >= 0");
  if (min_data_in_leaf < 1) problems.push_back("min_data_in_leaf must be >= 1");
  if (max_iterations < 0) problems.push_back("max_iterations must be >= 0");
  if (early_stopping_patience < 0) {
    problems.push_back("early_stopping_patience must be >= 0");
  }
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
    problems.push_back("validation_fraction must lie in [0, 1)");
  }
  if (num_threads < 0) problems.push_back("num_threads must be >= 0");
  if (snapshot_interval < 1) problems.push_back("snapshot_interval must be >= 1");
  if (problems.empty()) return;
  std::string message = "invalid training configuration:";
  for (const auto& p : problems) message += "\n  " + p;
  throw ConfigError(message);
}

std::string_view CandidateKindName(CandidateKind kind) {
  switch (kind) {
    case CandidateKind::kSplit:
      return "split";
    case CandidateKind::kGlobal:
      return "global";
    case CandidateKind::kNone:
      break;
  }
  return "none";
}

std::string TrainLog::ToJsonl() const {
  std::string out;
  for (const auto& r : records) {
    const SplitCandidate& c = r.candidate;
    nlohmann::ordered_json j;
    j["iteration"] = r.iteration;
    j["output"] = c.output;
    j["feature"] = c.feature;
    j["degree"] = c.degree;
    j["kind"] = CandidateKindName(c.kind);
    if (c.kind == CandidateKind::kSplit) {
      j["threshold"] = c.threshold;
    } else {
      j["threshold"] = nullptr;
    }
    j["gamma_left"] = c.gamma_left;
    j["gamma_right"] = c.gamma_right;
    j["gain"] = c.gain;
    j["train_loss"] = r.train_loss;
    if (r.valid_loss) {
      j["valid_loss"] = *r.valid_loss;
    } else {
      j["valid_loss"] = nullptr;
    }
    out += j.dump();
    out += '\n';
  }
  return out;
}

void TrainLog::WriteJsonl(const std::filesystem::path& path) const {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open " + path.string() + " for writing");
  file << ToJsonl();
  if (!file) throw Error("failed to write " + path.string());
}

void ReplayUpdates(ParameterStore& store,
                   std::span<const IterationRecord> records,
                   double learning_rate) {
  for (const auto& r : records) ApplyToStore(r.candidate, learning_rate, store);
}

ParameterStore RollbackToBest(const TrainLog& log,
                              const SnapshotHistory& snapshots,
                              int iteration) {
  auto it = snapshots.upper_bound(iteration);
  if (it == snapshots.begin()) {
    throw Error("no snapshot at or before iteration " +
                std::to_string(iteration));
  }
  --it;
  ParameterStore store = it->second;
  const int from = it->first;
  const auto first = std::find_if(
      log.records.begin(), log.records.end(),
      [from](const IterationRecord& r) { return r.iteration > from; });
  const auto last = std::find_if(
      first, log.records.end(),
      [iteration](const IterationRecord& r) { return r.iteration > iteration; });
  ReplayUpdates(store, std::span(first, last), log.learning_rate);
  return store;
}

std::vector<double> InitialIntercepts(const Dataset& train) {
  const std::size_t n = train.num_rows();
  if (n == 0) throw DataError("training set is empty");
  switch (train.task) {
    case Task::kRegression: {
      double sum = 0.0;
      for (double y : train.targets) sum += y;
      return {sum / static_cast<double>(n)};
    }
    case Task::kBinary: {
      double sum = 0.0;
      for (double y : train.targets) sum += y;
      const double p = std::clamp(sum / static_cast<double>(n), kProbClamp,
                                  1.0 - kProbClamp);
      return {std::log(p / (1.0 - p))};
    }
    case Task::kMulticlass: {
      std::vector<double> counts(static_cast<std::size_t>(train.num_classes),
                                 0.0);
      for (double y : train.targets) counts[static_cast<std::size_t>(y)] += 1.0;
      std::vector<double> out;
      for (double c : counts) {
        out.push_back(
            std::log(std::max(c / static_cast<double>(n), kProbClamp)));
      }
      return out;
    }
  }
  return {};
}

TrainResult Train(const Dataset& train, const Dataset* valid,
                  const BinLayout& layout, const ConstraintSpec& constraints,
                  const TrainConfig& config,
                  const IterationCallback& callback) {
  config.Validate();
  ValidateDataset(train);
  const bool has_valid = valid != nullptr && valid->num_rows() > 0;
  if (config.early_stopping_patience > 0 && !has_valid) {
    throw ConfigError(
        "early stopping needs a non-empty validation set "
        "(set early_stopping_patience = 0 to disable it)");
  }
  if (has_valid) {
    ValidateDataset(*valid, false);
    if (valid->num_features() != train.num_features() ||
        valid->task != train.task ||
        valid->num_outputs() != train.num_outputs()) {
      throw DataError("validation set does not match the training set");
    }
  }
  const std::size_t num_features = train.num_features();
  const int num_outputs = train.num_outputs();
  if (layout.num_features() != num_features ||
      constraints.num_features() != num_features ||
      constraints.num_outputs() != num_outputs) {
    throw ConfigError("bin layout or constraints do not match the dataset");
  }
  constraints.Validate(train.feature_kinds, train.feature_names);

  TrainResult result;
  for (std::size_t k = 0; k < num_features; ++k) {
    const FeatureConstraint& fc = constraints.feature(k);
    const int shared = constraints.NumAllowedOutputs(k);
    if ((fc.monotone != 0 || fc.curvature != 0) && shared >= 2) {
      result.warnings.push_back(
          "feature '" + train.feature_names[k] + "' is constrained but used by " +
          std::to_string(shared) +
          " outputs; the constraint holds for its shape functions but not "
          "necessarily for the predicted probabilities");
    }
  }

  ParameterStore store(train.task, num_outputs, layout, constraints,
                       train.feature_names, train.target_name);
  const std::vector<double> intercepts = InitialIntercepts(train);
  for (int i = 0; i < num_outputs; ++i) store.set_intercept(i, intercepts[i]);

  const int threads = internal::ResolveThreadCount(config.num_threads);
  std::vector<BinnedColumn> columns(num_features);
  internal::ParallelFor(num_features, threads, [&](std::size_t k) {
    columns[k] = internal::BinColumn(train.column(k), layout[k]);
  });

  const internal::SearchSettings settings{
      config.learning_rate, config.l1, config.l2,
      static_cast<std::size_t>(config.min_data_in_leaf)};
  const double nu = config.learning_rate;

  Matrix train_scores = store.PredictScores(train.features);
  Matrix valid_scores;
  if (has_valid) valid_scores = store.PredictScores(valid->features);

  result.log.learning_rate = nu;
  result.train_curve.push_back(Loss(train, train_scores));
  double best_valid = std::numeric_limits<double>::infinity();
  if (has_valid) {
    best_valid = Loss(*valid, valid_scores);
    result.valid_curve.push_back(best_valid);
  }

  SnapshotHistory snapshots;
  snapshots.emplace(0, store);
  int best_iteration = 0;
  int since_best = 0;
  int iteration = 0;
  const std::size_t pairs = static_cast<std::size_t>(num_outputs) * num_features;
  std::vector<SplitCandidate> candidates(pairs);

  for (int it = 1; it <= config.max_iterations; ++it) {
    const DerivativeBatch batch =
        Derivatives(train.targets, train_scores, train.task);
    std::vector<std::vector<double>> g(num_outputs);
    std::vector<std::vector<double>> h(num_outputs);
    for (int i = 0; i < num_outputs; ++i) {
      g[i] = Column(batch.g, static_cast<std::size_t>(i));
      h[i] = Column(batch.h, static_cast<std::size_t>(i));
    }
    internal::ParallelFor(pairs, threads, [&](std::size_t p) {
      const int i = static_cast<int>(p / num_features);
      const std::size_t k = p % num_features;
      candidates[p] = constraints.allowed(i, k)
                          ? internal::BestFeatureCandidate(
                                store, i, k, columns[k], g[i], h[i], settings)
                          : SplitCandidate{.output = i};
    });

    std::vector<SplitCandidate> chosen;
    for (int i = 0; i < num_outputs; ++i) {
      SplitCandidate best{.output = i};
      for (std::size_t k = 0; k < num_features; ++k) {
        const SplitCandidate& c = candidates[i * num_features + k];
        if (c.kind != CandidateKind::kNone && c.gain > best.gain) best = c;
      }
      if (best.kind != CandidateKind::kNone) chosen.push_back(best);
    }
    if (chosen.empty()) break;

    for (const SplitCandidate& c : chosen) {
      const FeatureBins& bins = layout[static_cast<std::size_t>(c.feature)];
      ApplyToStore(c, nu, store);
      ApplyToScores(c, bins, train.features, nu, train_scores);
      if (has_valid) ApplyToScores(c, bins, valid->features, nu, valid_scores);
    }
    iteration = it;
    const double train_loss = Loss(train, train_scores);
    result.train_curve.push_back(train_loss);
    std::optional<double> valid_loss;
    if (has_valid) {
      valid_loss = Loss(*valid, valid_scores);
      result.valid_curve.push_back(*valid_loss);
    }
    for (const SplitCandidate& c : chosen) {
      result.log.records.push_back({it, c, train_loss, valid_loss});
    }
    if (it % config.snapshot_interval == 0) snapshots.emplace(it, store);
    if (callback) callback(it, store);

    if (!has_valid) continue;
    if (*valid_loss < best_valid) {
      best_valid = *valid_loss;
      best_iteration = it;
      since_best = 0;
      // Snapshots older than the one the best iteration would replay from
      // are never needed again.
      auto keep = snapshots.upper_bound(best_iteration);
      --keep;
      snapshots.erase(snapshots.begin(), keep);
    } else if (config.early_stopping_patience > 0 &&
               ++since_best >= config.early_stopping_patience) {
      break;
    }
  }

  result.iterations_run = iteration;
  if (!has_valid) best_iteration = iteration;
  result.best_iteration = best_iteration;
  if (best_iteration == iteration) {
    result.model = std::move(store);
  } else {
    result.model = RollbackToBest(result.log, snapshots, best_iteration);
  }
  CaptureHessianSums(result.model, train);
  return result;
}

}  // namespace polygam
