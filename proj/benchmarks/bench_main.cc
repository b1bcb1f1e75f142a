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

#include <cmath>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "polygam/binning.h"
#include "polygam/booster.h"
#include "polygam/loss.h"
#include "polygam/model.h"
#include "split_search.h"

namespace polygam {
namespace {

Dataset Synthetic(std::size_t n, std::size_t features) {
  std::mt19937_64 engine(7);
  std::uniform_real_distribution<double> x(-2.0, 2.0);
  std::normal_distribution<double> noise(0.0, 0.3);
  Dataset d;
  d.features = Matrix(n, features);
  d.targets.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    double y = 0.0;
    for (std::size_t k = 0; k < features; ++k) {
      const double v = x(engine);
      d.features(r, k) = v;
      y += std::sin(v + static_cast<double>(k)) + 0.1 * v * v * v;
    }
    d.targets[r] = y + noise(engine);
  }
  for (std::size_t k = 0; k < features; ++k) {
    d.feature_names.push_back("x" + std::to_string(k));
  }
  d.feature_kinds.assign(features, FeatureKind::kContinuous);
  d.target_name = "y";
  return d;
}

void BM_SplitSearch(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Dataset d = Synthetic(n, 1);
  const BinLayout layout = BuildLayout(d, SplitScheme{});
  const ConstraintSpec constraints(d.feature_kinds, 1);
  const ParameterStore store(Task::kRegression, 1, layout, constraints,
                             d.feature_names);
  const std::vector<double> x = d.column(0);
  const internal::BinnedColumn column = internal::BinColumn(x, layout[0]);
  std::vector<double> g(n), h(n, 1.0);
  for (std::size_t r = 0; r < n; ++r) g[r] = -d.targets[r];
  internal::SearchSettings settings;
  settings.min_leaf = 10;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        internal::BestFeatureCandidate(store, 0, 0, column, g, h, settings));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_SplitSearch)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_TrainIterations(benchmark::State& state) {
  const Dataset d = Synthetic(10000, 8);
  const BinLayout layout = BuildLayout(d, SplitScheme{});
  const ConstraintSpec constraints(d.feature_kinds, 1);
  TrainConfig config;
  config.max_iterations = static_cast<int>(state.range(0));
  config.early_stopping_patience = 0;
  config.num_threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Train(d, nullptr, layout, constraints, config));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrainIterations)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Predict(benchmark::State& state) {
  const Dataset d = Synthetic(static_cast<std::size_t>(state.range(0)), 8);
  TrainConfig config;
  config.max_iterations = 200;
  config.early_stopping_patience = 0;
  config.num_threads = 1;
  const ParameterStore model =
      Train(d, nullptr, BuildLayout(d, SplitScheme{}),
            ConstraintSpec(d.feature_kinds, 1), config)
          .model;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.PredictScores(d.features));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Predict)->Arg(1000)->Arg(100000);

}  // namespace
}  // namespace polygam

BENCHMARK_MAIN();
