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

// Run configuration files.
//
//   # comment
//   [data]
//   path = housing.csv          ; relative to the config file
//   target = MEDV
//   task = regression           ; regression | binary | multiclass
//   categorical = CHAS, RAD
//
//   [split]
//   train = 0.7
//   valid = 0.1
//   test = 0.2
//   seed = 1
//
//   [train]
//   learning_rate = 0.1
//   l1 = 0.001
//   l2 = 0.01
//   min_data_in_leaf = 10
//   max_iterations = 25000
//   early_stopping_patience = 100
//   num_threads = 0
//   snapshot_interval = 100
//
//   [binning]
//   n_bins = 256
//   n_bins_higher = 20
//
//   [defaults]
//   S = -1
//   D = 3
//
//   [constraints]
//   feature.cost: monotone=-1 curvature=+1 S=2 D=3 outputs=[2]
//
//   [output]
//   dir = run1
//
// Every key is optional except data.path and data.target. Output indices in
// `outputs=[...]` are 0-based class indices.

#ifndef POLYGAM_TOOLS_RUN_CONFIG_H_
#define POLYGAM_TOOLS_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polygam/binning.h"
#include "polygam/booster.h"
#include "polygam/constraints.h"
#include "polygam/dataset.h"

namespace polygam::cli {

struct FeatureOverride {
  std::string name;
  std::optional<int> monotone;
  std::optional<int> curvature;
  std::optional<int> smoothness;
  std::optional<int> max_degree;
  std::optional<std::vector<int>> outputs;
};

struct RunConfig {
  std::filesystem::path data_path;
  std::string target;
  Task task = Task::kRegression;
  std::vector<std::string> categorical;

  double train_fraction = 0.7;
  double valid_fraction = 0.1;
  double test_fraction = 0.2;
  std::uint64_t seed = 0;

  TrainConfig train;
  SplitScheme scheme;
  FeatureConstraint defaults;
  std::vector<FeatureOverride> constraints;

  std::filesystem::path output_dir = "polygam_out";
};

// Parses config text. Relative paths are resolved against `base_dir`. All
// problems are reported together in one ConfigError.
RunConfig ParseRunConfig(std::string_view text,
                         const std::filesystem::path& base_dir);
RunConfig LoadRunConfig(const std::filesystem::path& path);

// Config text with every default filled in; parsing it yields `config`.
std::string ResolvedConfigText(const RunConfig& config);

// Constraints for a loaded dataset: defaults for continuous features, then
// the per-feature overrides. Unknown names and invalid values are collected
// into one ConfigError.
ConstraintSpec BuildConstraints(const RunConfig& config, const Dataset& data);

struct Partition {
  std::vector<std::size_t> train;
  std::vector<std::size_t> valid;
  std::vector<std::size_t> test;
};

// Seeded shuffle, then train/valid/test by the configured fractions. For
// classification each class is split separately. Index lists are sorted.
Partition SplitRows(const Dataset& data, double train_fraction,
                    double valid_fraction, std::uint64_t seed);

}  // namespace polygam::cli

#endif  // POLYGAM_TOOLS_RUN_CONFIG_H_
