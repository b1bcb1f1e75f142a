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

// Second-order boosting of depth-1 polynomial trees.
//
// Each iteration computes the loss derivatives of the current model, then for
// every output picks the single best (feature, degree, threshold) candidate:
// a split emitting gamma_left * (x - u)^d and gamma_right * (x - u)^d on its
// two sides, or, for degrees protected by the smoothness order, one global
// monomial gamma * (x - min)^d. Leaf values are regularized Newton steps,
// clamped into the range that keeps every monotonicity and curvature
// requirement satisfied, and the winning update is folded into the
// ParameterStore.

#ifndef POLYGAM_BOOSTER_H_
#define POLYGAM_BOOSTER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polygam/binning.h"
#include "polygam/constraints.h"
#include "polygam/dataset.h"
#include "polygam/model.h"

namespace polygam {

struct TrainConfig {
  double learning_rate = 0.1;
  double l1 = 0.001;
  double l2 = 0.01;
  int min_data_in_leaf = 10;
  int max_iterations = 25000;
  // 0 disables early stopping; otherwise a validation set is required.
  int early_stopping_patience = 100;
  // Share of the non-test rows held out for validation by front ends that
  // split data themselves (70/10 train/validation).
  double validation_fraction = 0.125;
  std::uint64_t seed = 0;
  // 0 = PB_THREADS or the hardware concurrency.
  int num_threads = 0;
  int snapshot_interval = 100;

  // Throws ConfigError listing every bad field.
  void Validate() const;
};

enum class CandidateKind { kNone, kSplit, kGlobal };
std::string_view CandidateKindName(CandidateKind kind);

struct SplitCandidate {
  int output = 0;
  int feature = -1;
  int degree = 0;
  CandidateKind kind = CandidateKind::kNone;
  double threshold = 0.0;  // splits only
  double gamma_left = 0.0;  // global candidates use gamma_left == gamma_right
  double gamma_right = 0.0;
  double gain = 0.0;
  std::size_t n_left = 0;
  std::size_t n_right = 0;
};

// Parameter-space derivative sums on each side of a threshold:
// sum g * (x - u)^d and sum h * (x - u)^(2d).
struct SideSums {
  double g = 0.0;
  double h = 0.0;
  std::size_t count = 0;
};
struct ParamSums {
  SideSums left;
  SideSums right;
};

// Direct O(N) evaluation of the side sums. Rows with x < threshold go left.
ParamSums ParamGradients(std::span<const double> g, std::span<const double> h,
                         std::span<const double> x, double threshold, int d);

// Regularized Newton step -soft_threshold(G, l1) / (H + l2), with the
// denominator floored at kHessianFloor.
double LeafValue(double sum_g, double sum_h, double l1, double l2);

// Predicted loss decrease -(gamma * G + gamma^2 * H / 2) of one leaf.
double SideGain(double sum_g, double sum_h, double gamma);

// Gain of a candidate whose leaves take their regularized Newton values.
double CandidateGain(const ParamSums& sums, double l1, double l2);
double CandidateGain(const SideSums& global, double l1, double l2);

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  double Clamp(double v) const { return v < lo ? lo : (v > hi ? hi : v); }
  bool Contains(double v) const { return lo <= v && v <= hi; }
  Interval Intersect(const Interval& o) const {
    return {lo > o.lo ? lo : o.lo, hi < o.hi ? hi : o.hi};
  }
};

struct SideIntervals {
  Interval left;
  Interval right;
};

// Range of leaf values gamma for which applying nu * gamma * (x - u)^d on one
// side keeps m * f' >= 0 and c * f'' >= 0 over the training range of feature
// k. Each coarse piece is checked exactly (endpoints, interior extrema of
// the quadratic derivative). `threshold` empty means a global monomial; both
// returned intervals are then identical. Unconstrained features and degree-0
// updates get (-inf, +inf). The cross-split ordering conditions are applied
// by the trainer, not here.
SideIntervals FeasibleInterval(const ParameterStore& store, int output,
                               std::size_t k, int d,
                               std::optional<double> threshold, double nu);

// One applied (or skipped, kind == kNone) update.
struct IterationRecord {
  int iteration = 0;
  SplitCandidate candidate;
  double train_loss = 0.0;
  std::optional<double> valid_loss;
};

struct TrainLog {
  double learning_rate = 0.1;
  std::vector<IterationRecord> records;

  // One JSON object per line: iteration, output, feature, degree, kind,
  // threshold, gamma_left, gamma_right, gain, train_loss, valid_loss.
  void WriteJsonl(const std::filesystem::path& path) const;
  std::string ToJsonl() const;
};

// Model states kept during training for rollback.
using SnapshotHistory = std::map<int, ParameterStore>;

// Applies the logged updates in order.
void ReplayUpdates(ParameterStore& store,
                   std::span<const IterationRecord> records,
                   double learning_rate);

// Model state after `iteration`: the latest snapshot at or before it plus a
// replay of the logged updates in between.
ParameterStore RollbackToBest(const TrainLog& log,
                              const SnapshotHistory& snapshots, int iteration);

struct TrainResult {
  ParameterStore model;
  TrainLog log;
  int best_iteration = 0;
  int iterations_run = 0;
  std::vector<double> train_curve;  // index 0 = intercept-only model
  std::vector<double> valid_curve;
  std::vector<std::string> warnings;
};

// Called after every iteration with the current (pre-rollback) model.
using IterationCallback =
    std::function<void(int iteration, const ParameterStore& model)>;

// Optimal constant predictor per output for the given training targets.
std::vector<double> InitialIntercepts(const Dataset& train);

// Boosts until max_iterations, until no candidate improves the quadratic
// model, or until the validation loss has not improved for
// early_stopping_patience iterations; then rolls back to the best validation
// iteration and records the Hessian sums needed for standard errors.
TrainResult Train(const Dataset& train, const Dataset* valid,
                  const BinLayout& layout, const ConstraintSpec& constraints,
                  const TrainConfig& config,
                  const IterationCallback& callback = {});

}  // namespace polygam

#endif  // POLYGAM_BOOSTER_H_
