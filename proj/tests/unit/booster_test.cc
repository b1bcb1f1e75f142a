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

#include <gtest/gtest.h>

#include "helpers.h"
#include "oracles.h"
#include "polygam/booster.h"
#include "polygam/errors.h"
#include "polygam/model_io.h"
#include "synthetic.h"

namespace polygam {
namespace {

using test::ManualBins;
using test::OneFeatureStore;

TrainConfig Quick(int iterations) {
  TrainConfig tc;
  tc.max_iterations = iterations;
  tc.early_stopping_patience = 0;
  tc.num_threads = 1;
  return tc;
}

TEST(ParamGradients, LinearExample) {
  const std::vector<double> x{1, 3}, g{-2, -4}, h{2, 2};
  const ParamSums s = ParamGradients(g, h, x, 2.0, 1);
  EXPECT_EQ(s.left.g, 2.0);
  EXPECT_EQ(s.left.h, 2.0);
  EXPECT_EQ(s.right.g, -4.0);
  EXPECT_EQ(s.right.h, 2.0);
  const ParamSums z = ParamGradients(g, h, x, 2.0, 0);
  EXPECT_EQ(z.left.g, -2.0);
  EXPECT_EQ(z.right.h, 2.0);
  const std::vector<double> zero{0, 0};
  EXPECT_EQ(ParamGradients(zero, h, x, 2.0, 3).left.g, 0.0);
}

TEST(LeafValue, Examples) {
  EXPECT_DOUBLE_EQ(LeafValue(-6, 4, 0, 0), 1.5);
  EXPECT_EQ(LeafValue(0, 4, 0.1, 0.1), 0.0);
  EXPECT_DOUBLE_EQ(LeafValue(-6, 4, 1, 1), 1.0);
  EXPECT_EQ(LeafValue(0.5, 4, 1, 0), 0.0);
  EXPECT_TRUE(std::isfinite(LeafValue(-1, 0, 0, 0)));
}

TEST(CandidateGain, Examples) {
  EXPECT_DOUBLE_EQ(CandidateGain(SideSums{-6, 4, 3}, 0, 0), 4.5);
  EXPECT_EQ(SideGain(-6, 4, 0.0), 0.0);
}

TEST(CandidateGain, SplitBeatsPooledOnStep) {
  std::vector<double> x, g, h;
  for (int n = 0; n < 10; ++n) {
    x.push_back(n);
    g.push_back(n < 5 ? 1.0 : -1.0);  // residuals -1 then +1
    h.push_back(1.0);
  }
  const ParamSums split = ParamGradients(g, h, x, 4.5, 0);
  const SideSums pooled{split.left.g + split.right.g,
                        split.left.h + split.right.h, 10};
  EXPECT_GT(CandidateGain(split, 0, 0), CandidateGain(pooled, 0, 0));
  const auto oracle = testkit::BruteForceStump(
      x, g, h, std::vector<double>{0.5, 1.5, 2.5, 3.5, 4.5, 5.5, 6.5, 7.5, 8.5},
      0, 0, 1);
  EXPECT_EQ(oracle.threshold, 4.5);
  EXPECT_DOUBLE_EQ(oracle.gain, CandidateGain(split, 0, 0));
}

TEST(FeasibleInterval, ZeroModelMonotoneLinear) {
  FeatureConstraint c{0, 3, 1, 0};
  const ParameterStore s = OneFeatureStore(ManualBins(0, 10, {5}, {5}), c);
  const SideIntervals r = FeasibleInterval(s, 0, 0, 1, 5.0, 0.1);
  EXPECT_EQ(r.left.lo, 0.0);
  EXPECT_EQ(r.right.lo, 0.0);
  EXPECT_TRUE(std::isinf(r.left.hi));
}

TEST(FeasibleInterval, ZeroModelConvexQuadratic) {
  FeatureConstraint c{0, 3, 0, 1};
  const ParameterStore s = OneFeatureStore(ManualBins(0, 10, {5}, {5}), c);
  const SideIntervals split = FeasibleInterval(s, 0, 0, 2, 5.0, 0.1);
  EXPECT_EQ(split.left.lo, 0.0);
  EXPECT_EQ(split.right.lo, 0.0);
  const SideIntervals global = FeasibleInterval(s, 0, 0, 2, std::nullopt, 0.1);
  EXPECT_EQ(global.left.lo, 0.0);
}

TEST(FeasibleInterval, UnconstrainedIsUnbounded) {
  const ParameterStore s = OneFeatureStore(ManualBins(0, 10, {5}, {5}), {});
  const SideIntervals r = FeasibleInterval(s, 0, 0, 2, 5.0, 0.1);
  EXPECT_TRUE(std::isinf(r.left.lo) && std::isinf(r.left.hi));
  EXPECT_TRUE(std::isinf(r.right.lo) && std::isinf(r.right.hi));
}

TEST(FeasibleInterval, BoundIsTightOnSlopedModel) {
  // f = 2x on [0, 10] with m = +1.
  FeatureConstraint c{1, 3, 1, 0};
  ParameterStore s = OneFeatureStore(ManualBins(0, 10, {5}, {5}), c);
  s.AccumulateGlobal(0, 0, 1, 2.0, 1.0);
  // Right side of u = 5 adds nu * gamma * 2 (x - 5) with nu = 1, d = 2: slope
  // 2 + 2 gamma (x - 5) >= 0 on [5, 10] needs gamma >= -0.2.
  const SideIntervals r = FeasibleInterval(s, 0, 0, 2, 5.0, 1.0);
  EXPECT_NEAR(r.right.lo, -0.2, 1e-12);
  // Left side: 2 + 2 gamma (x - 5) on [0, 5] needs gamma <= 0.2.
  EXPECT_NEAR(r.left.hi, 0.2, 1e-12);
}

TEST(Train, SingleStumpMatchesOracle) {
  const Dataset d = testkit::MakeDataset({{1, 2, 3, 4}}, {1, 1, 3, 3},
                                         Task::kRegression);
  ConstraintSpec spec(d.feature_kinds, 1, {-1, 0, 0, 0});
  TrainConfig tc = Quick(1);
  tc.learning_rate = 1.0;
  tc.l1 = tc.l2 = 0;
  tc.min_data_in_leaf = 1;
  const TrainResult r = Train(d, nullptr, BuildLayout(d, SplitScheme{}), spec, tc);
  ASSERT_EQ(r.log.records.size(), 1u);
  const SplitCandidate& c = r.log.records[0].candidate;
  EXPECT_EQ(c.threshold, 2.5);
  EXPECT_DOUBLE_EQ(c.gamma_left, -1.0);
  EXPECT_DOUBLE_EQ(c.gamma_right, 1.0);
  EXPECT_DOUBLE_EQ(r.model.PredictScores(d.features)(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(r.model.PredictScores(d.features)(3, 0), 3.0);
}

TEST(Train, MinLeafBlocksAllSplits) {
  const Dataset d = testkit::MakeDataset({{1, 2, 3, 4}}, {1, 1, 3, 3},
                                         Task::kRegression);
  ConstraintSpec spec(d.feature_kinds, 1, {-1, 0, 0, 0});
  TrainConfig tc = Quick(5);
  tc.min_data_in_leaf = 3;
  const TrainResult r = Train(d, nullptr, BuildLayout(d, SplitScheme{}), spec, tc);
  EXPECT_TRUE(r.log.records.empty());
  EXPECT_EQ(r.iterations_run, 0);
}

TEST(Train, MonotoneOnAntiMonotoneData) {
  testkit::Rng rng(21);
  std::vector<double> x(800), y(800);
  for (std::size_t n = 0; n < 800; ++n) {
    x[n] = rng.Uniform(0, 5);
    y[n] = -2.0 * x[n] + std::sin(3 * x[n]) + 0.3 * rng.Normal();
  }
  const Dataset d = testkit::MakeDataset({x}, y, Task::kRegression);
  ConstraintSpec spec(d.feature_kinds, 1, {-1, 3, 1, 0});
  const TrainResult r =
      Train(d, nullptr, BuildLayout(d, SplitScheme{}), spec, Quick(300));
  const FeatureBins& b = r.model.bins(0);
  for (int p = 0; p <= 10000; ++p) {
    const double v = b.min_value + (b.max_value - b.min_value) * p / 10000.0;
    ASSERT_GE(r.model.EvaluateDerivative(0, 0, v, 1), -1e-9) << v;
    ASSERT_GE(r.model.EvaluateLeft(0, 0, v, 1), -1e-9) << v;
  }
  // Step updates never go down either.
  const auto& steps = r.model.shape(0, 0).step_values;
  for (std::size_t e = 1; e < steps.size(); ++e) {
    EXPECT_GE(steps[e] - steps[e - 1], -1e-9);
  }
}

TEST(Train, MaskedPairsStayZero) {
  const Dataset d = testkit::MaskedMulticlass(900, 2);
  ConstraintSpec spec(d.feature_kinds, 3, {});
  for (std::size_t k = 0; k < 3; ++k) {
    const int owner[] = {static_cast<int>(k)};
    spec.RestrictTo(k, owner);
  }
  const TrainResult r =
      Train(d, nullptr, BuildLayout(d, SplitScheme{}), spec, Quick(60));
  for (int i = 0; i < 3; ++i) {
    for (std::size_t k = 0; k < 3; ++k) {
      EXPECT_EQ(r.model.shape(i, k).IsZero(), i != static_cast<int>(k));
    }
  }
}

TEST(Train, SmoothnessFilterAndNonNegativeGain) {
  const Dataset d = testkit::CubicRegression(500, 3);
  for (int s = -1; s <= 2; ++s) {
    ConstraintSpec spec(d.feature_kinds, 1, {s, 3, 0, 0});
    const TrainResult r =
        Train(d, nullptr, BuildLayout(d, SplitScheme{}), spec, Quick(80));
    for (const auto& rec : r.log.records) {
      const SplitCandidate& c = rec.candidate;
      EXPECT_GE(c.gain, 0.0);
      if (c.kind == CandidateKind::kSplit) {
        EXPECT_GT(c.degree, s);
        EXPECT_GE(c.n_left, 10u);
        EXPECT_GE(c.n_right, 10u);
      } else {
        EXPECT_LE(c.degree, s);
      }
    }
  }
}

TEST(Train, DegreeZeroModelsArePiecewiseConstant) {
  const Dataset d = testkit::CubicRegression(400, 8);
  ConstraintSpec spec(d.feature_kinds, 1, {-1, 0, 0, 0});
  SplitScheme scheme;
  scheme.n_bins_degree0 = 32;
  const TrainResult r = Train(d, nullptr, BuildLayout(d, scheme), spec, Quick(50));
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& e = r.model.bins(k).fine_edges;
    for (std::size_t b = 0; b + 1 < e.size(); ++b) {
      const double a = r.model.EvaluateShape(0, k, e[b]);
      for (double f : {0.25, 0.5, 0.75}) {
        EXPECT_EQ(r.model.EvaluateShape(0, k, e[b] + f * (e[b + 1] - e[b])), a);
      }
    }
  }
}

TEST(Train, DeterministicAndThreadIndependent) {
  const Dataset d = testkit::ModeChoice(1500, 4);
  ConstraintSpec spec(d.feature_kinds, 4, {});
  TrainConfig one = Quick(30);
  TrainConfig many = one;
  many.num_threads = 4;
  const BinLayout layout = BuildLayout(d, SplitScheme{});
  const TrainResult a = Train(d, nullptr, layout, spec, one);
  const TrainResult b = Train(d, nullptr, layout, spec, one);
  const TrainResult c = Train(d, nullptr, layout, spec, many);
  EXPECT_EQ(a.log.ToJsonl(), b.log.ToJsonl());
  EXPECT_EQ(SerializeModel(a.model), SerializeModel(b.model));
  EXPECT_EQ(a.log.ToJsonl(), c.log.ToJsonl());
  EXPECT_EQ(SerializeModel(a.model), SerializeModel(c.model));
}

TEST(Train, EarlyStoppingNeedsValidation) {
  const Dataset d = testkit::CubicRegression(100, 1);
  ConstraintSpec spec(d.feature_kinds, 1, {});
  TrainConfig tc;
  EXPECT_THROW(Train(d, nullptr, BuildLayout(d, SplitScheme{}), spec, tc),
               ConfigError);
  tc.learning_rate = 0;
  EXPECT_THROW(tc.Validate(), ConfigError);
}

TEST(Train, WarnsForSharedConstrainedFeature) {
  const Dataset d = testkit::MaskedMulticlass(300, 1);
  ConstraintSpec spec(d.feature_kinds, 3, {});
  spec.feature(0) = {0, 3, 1, 0};
  const TrainResult r =
      Train(d, nullptr, BuildLayout(d, SplitScheme{}), spec, Quick(2));
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("x0"), std::string::npos);
}

TEST(Train, EarlyStoppingRollsBackToBestIteration) {
  const Dataset all = testkit::CubicRegression(600, 12);
  std::vector<std::size_t> tr, va;
  for (std::size_t n = 0; n < 600; ++n) (n % 5 == 0 ? va : tr).push_back(n);
  const Dataset train = all.Subset(tr);
  const Dataset valid = all.Subset(va);
  ConstraintSpec spec(train.feature_kinds, 1, {});
  TrainConfig tc;
  tc.learning_rate = 1.0;  // overfits fast
  tc.early_stopping_patience = 20;
  tc.max_iterations = 2000;
  tc.num_threads = 1;
  tc.snapshot_interval = 7;
  const BinLayout layout = BuildLayout(train, SplitScheme{});
  const TrainResult r = Train(train, &valid, layout, spec, tc);
  ASSERT_LT(r.best_iteration, r.iterations_run);
  EXPECT_EQ(r.iterations_run - r.best_iteration, 20);
  const auto best = std::min_element(r.valid_curve.begin(), r.valid_curve.end());
  EXPECT_EQ(best - r.valid_curve.begin(), r.best_iteration);

  TrainConfig direct = tc;
  direct.max_iterations = r.best_iteration;
  direct.early_stopping_patience = 0;
  const TrainResult d = Train(train, nullptr, layout, spec, direct);
  EXPECT_TRUE(d.model == r.model);
}

TEST(RollbackToBest, ReplayBitMatchesSnapshots) {
  const Dataset d = testkit::CubicRegression(400, 13);
  ConstraintSpec spec(d.feature_kinds, 1, {1, 3, 0, 0});
  const BinLayout layout = BuildLayout(d, SplitScheme{});
  std::map<int, ParameterStore> seen;
  const TrainResult r = Train(d, nullptr, layout, spec, Quick(107),
                              [&](int it, const ParameterStore& m) {
                                if (it == 7 || it == 60 || it == 100) {
                                  seen.emplace(it, m);
                                }
                              });
  ParameterStore initial(d.task, 1, layout, spec, d.feature_names, d.target_name);
  initial.set_intercept(0, InitialIntercepts(d)[0]);
  SnapshotHistory from_start{{0, initial}};
  EXPECT_TRUE(RollbackToBest(r.log, from_start, 7) == seen.at(7));
  EXPECT_TRUE(RollbackToBest(r.log, from_start, 100) == seen.at(100));
  SnapshotHistory later{{0, initial}, {60, seen.at(60)}};
  EXPECT_TRUE(RollbackToBest(r.log, later, 100) == seen.at(100));
  EXPECT_TRUE(RollbackToBest(r.log, from_start, 0) == initial);
}

TEST(TrainLog, JsonlHasOneRecordPerLine) {
  const Dataset d = testkit::CubicRegression(200, 2);
  ConstraintSpec spec(d.feature_kinds, 1, {0, 3, 0, 0});
  const TrainResult r =
      Train(d, nullptr, BuildLayout(d, SplitScheme{}), spec, Quick(5));
  const std::string text = r.log.ToJsonl();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
  EXPECT_EQ(text.rfind("{\"iteration\":1,\"output\":0,\"feature\":", 0), 0u);
  EXPECT_NE(text.find("\"valid_loss\":null"), std::string::npos);
}

TEST(InitialIntercepts, PerTask) {
  const Dataset reg = testkit::MakeDataset({{0, 1, 2, 3}}, {1, 2, 3, 6},
                                           Task::kRegression);
  EXPECT_DOUBLE_EQ(InitialIntercepts(reg)[0], 3.0);
  const Dataset bin = testkit::MakeDataset({{0, 1, 2, 3}}, {1, 1, 1, 0},
                                           Task::kBinary);
  EXPECT_DOUBLE_EQ(InitialIntercepts(bin)[0], std::log(3.0));
  const Dataset mc = testkit::MakeDataset({{0, 1, 2, 3}}, {0, 1, 1, 2},
                                          Task::kMulticlass, 3);
  const auto b = InitialIntercepts(mc);
  EXPECT_DOUBLE_EQ(b[1], std::log(0.5));
  EXPECT_DOUBLE_EQ(b[0], std::log(0.25));
}

}  // namespace
}  // namespace polygam
