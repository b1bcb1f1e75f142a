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
#include "polygam/booster.h"
#include "polygam/errors.h"
#include "polygam/uncertainty.h"
#include "synthetic.h"

namespace polygam {
namespace {

// x = 0..99, two fine bins of 50 rows each, no higher degrees.
struct HundredRows {
  Dataset data;
  ParameterStore model;
};

HundredRows InterceptOnly(int max_degree = 0, int repeat = 1) {
  std::vector<double> x, y;
  for (int r = 0; r < repeat; ++r) {
    for (int n = 0; n < 100; ++n) {
      x.push_back(n);
      y.push_back(std::sin(n));
    }
  }
  Dataset d = testkit::MakeDataset({x}, y, Task::kRegression);
  SplitScheme scheme;
  scheme.n_bins_degree0 = 2;
  scheme.n_bins_higher = 2;
  ConstraintSpec spec(d.feature_kinds, 1, {-1, max_degree, 0, 0});
  TrainConfig tc;
  tc.max_iterations = 0;
  tc.early_stopping_patience = 0;
  TrainResult r = Train(d, nullptr, BuildLayout(d, scheme), spec, tc);
  return {std::move(d), std::move(r.model)};
}

TEST(ParamSe, FiftyRowsUnderSquaredError) {
  const HundredRows m = InterceptOnly();
  const UncertaintyTable t = ParamSe(m.model);
  ASSERT_EQ(t.at(0, 0, 0).size(), 2u);
  EXPECT_DOUBLE_EQ(t.at(0, 0, 0)[0], 0.1);
  EXPECT_DOUBLE_EQ(t.at(0, 0, 0)[1], 0.1);
}

TEST(ParamSe, DoublingDataShrinksBySqrtTwo) {
  const HundredRows m = InterceptOnly(3);
  const HundredRows twice = InterceptOnly(3, 2);
  const UncertaintyTable a = ParamSe(m.model, m.data);
  const UncertaintyTable b = ParamSe(m.model, twice.data);
  for (int d = 0; d <= 3; ++d) {
    for (std::size_t j = 0; j < a.at(0, 0, d).size(); ++j) {
      EXPECT_NEAR(a.at(0, 0, d)[j] / b.at(0, 0, d)[j], std::sqrt(2.0), 1e-12);
    }
  }
}

TEST(ParamSe, EmptyBinIsInfinite) {
  ParameterStore s = test::OneFeatureStore(test::ManualBins(0, 4, {2}, {2}), {});
  HessianSums sums;
  sums.by_degree[0] = {10.0, 0.0};
  for (int d = 1; d <= 3; ++d) sums.by_degree[d] = {10.0, 0.0};
  s.set_hessian_sums(0, 0, sums);
  const UncertaintyTable t = ParamSe(s);
  EXPECT_TRUE(std::isinf(t.at(0, 0, 0)[1]));
  const std::vector<double> grid{1.0, 3.0};
  const auto band = ShapeCi(s, t, 0, 0, grid);
  EXPECT_TRUE(band[1].infinite);
  EXPECT_TRUE(std::isinf(band[1].upper));
}

TEST(ParamSe, ModelWithoutSumsIsRejected) {
  const ParameterStore s = test::OneFeatureStore(test::ManualBins(0, 4, {}, {}), {});
  EXPECT_THROW(ParamSe(s), Error);
}

TEST(ShapeCi, SingleStepTermHalfWidth) {
  const HundredRows m = InterceptOnly();
  const UncertaintyTable t = ParamSe(m.model);
  const std::vector<double> grid{3.0, 70.0};
  for (const BandPoint& p : ShapeCi(m.model, t, 0, 0, grid)) {
    EXPECT_FALSE(p.infinite);
    EXPECT_NEAR(p.upper - p.f, 0.196, 1e-15);
    EXPECT_NEAR(p.f - p.lower, 0.196, 1e-15);
  }
}

TEST(ShapeCi, SymmetricAroundTheShape) {
  const Dataset d = testkit::LinearGaussian(2000, 5);
  ConstraintSpec spec(d.feature_kinds, 1, {0, 1, 0, 0});
  TrainConfig tc;
  tc.max_iterations = 100;
  tc.early_stopping_patience = 0;
  const TrainResult r = Train(d, nullptr, BuildLayout(d, SplitScheme{}), spec, tc);
  const UncertaintyTable t = ParamSe(r.model);
  std::vector<double> grid;
  for (int p = 0; p <= 50; ++p) grid.push_back(p / 50.0);
  const auto band = ShapeCi(r.model, t, 0, 0, grid);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    EXPECT_EQ(band[p].f, r.model.EvaluateShape(0, 0, grid[p]));
    const double mid = 0.5 * (band[p].lower + band[p].upper);
    EXPECT_NEAR(mid, band[p].f, 4e-16 * (std::abs(band[p].f) + band[p].upper - band[p].lower));
    EXPECT_LE(band[p].lower, band[p].f);
    EXPECT_GE(band[p].upper, band[p].f);
  }
}

TEST(ShapeCi, WidthShrinksWithMoreRows) {
  const HundredRows few = InterceptOnly(1);
  const HundredRows more = InterceptOnly(1, 3);
  const UncertaintyTable a = ParamSe(few.model, few.data);
  const UncertaintyTable b = ParamSe(few.model, more.data);
  const std::vector<double> grid{0.0, 10.0, 49.0, 50.0, 75.0, 99.0};
  const auto wa = ShapeCi(few.model, a, 0, 0, grid);
  const auto wb = ShapeCi(few.model, b, 0, 0, grid);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    EXPECT_LE(wb[p].upper - wb[p].lower, wa[p].upper - wa[p].lower);
  }
}

}  // namespace
}  // namespace polygam
