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

#include "oracles.h"
#include "polygam/loss.h"
#include "synthetic.h"

namespace polygam::testkit {
namespace {

TEST(BruteForceStump, ResidualStep) {
  const std::vector<double> x{1, 2, 3, 4}, r{1, 1, 3, 3}, h{1, 1, 1, 1};
  std::vector<double> g;
  for (double v : r) g.push_back(-v);
  const StumpOracle s =
      BruteForceStump(x, g, h, std::vector<double>{1.5, 2.5, 3.5}, 0, 0, 1);
  ASSERT_TRUE(s.found);
  EXPECT_EQ(s.threshold, 2.5);
  EXPECT_EQ(s.gamma_left, 1.0);
  EXPECT_EQ(s.gamma_right, 3.0);
}

TEST(BruteForceStump, ConstantResidualsHaveNoUsefulSplit) {
  const std::vector<double> x{1, 2, 3, 4}, g{0, 0, 0, 0}, h{1, 1, 1, 1};
  EXPECT_FALSE(
      BruteForceStump(x, g, h, std::vector<double>{1.5, 2.5, 3.5}, 0, 0, 1).found);
}

TEST(BruteForceStump, MinLeafFilter) {
  const std::vector<double> x{1, 2, 3, 4}, g{-1, -1, -3, -3}, h{1, 1, 1, 1};
  EXPECT_FALSE(
      BruteForceStump(x, g, h, std::vector<double>{1.5, 2.5, 3.5}, 0, 0, 3).found);
}

TEST(BruteForceStump, OrderIndependent) {
  Rng rng(9);
  std::vector<double> x(80), g(80), h(80), t;
  for (std::size_t n = 0; n < 80; ++n) {
    x[n] = std::floor(rng.Uniform(0, 30));
    g[n] = rng.Normal();
    h[n] = rng.Uniform(0.1, 2);
  }
  for (int u = 0; u < 30; ++u) t.push_back(u + 0.5);
  const StumpOracle a = BruteForceStump(x, g, h, t, 0.01, 0.1, 5);
  for (std::size_t i = 79; i > 0; --i) {
    const std::size_t j = rng.Below(i + 1);
    std::swap(x[i], x[j]);
    std::swap(g[i], g[j]);
    std::swap(h[i], h[j]);
  }
  const StumpOracle b = BruteForceStump(x, g, h, t, 0.01, 0.1, 5);
  EXPECT_EQ(a.threshold, b.threshold);
  EXPECT_EQ(a.gamma_left, b.gamma_left);
  EXPECT_EQ(a.gamma_right, b.gamma_right);
  EXPECT_EQ(a.objective, b.objective);
}

TEST(FiniteDiff, Examples) {
  EXPECT_NEAR(FiniteDiff([](double v) { return v * v; }, 3, 1e-4).first, 6,
              1e-6);
  const Differences c = FiniteDiff([](double) { return 4.0; }, 1, 1e-4);
  EXPECT_EQ(c.first, 0.0);
  EXPECT_EQ(c.second, 0.0);
}

TEST(FiniteDiff, SoftmaxCrossEntropyLogit) {
  const std::vector<double> f{0.3, -1.2, 0.8};
  const double y = 2;
  for (std::size_t i = 0; i < 3; ++i) {
    const Differences d = FiniteDiff(
        [&](double v) {
          std::vector<double> s = f;
          s[i] = v;
          return SampleLoss(y, s, Task::kMulticlass);
        },
        f[i], 1e-4);
    Matrix m(1, 3);
    for (std::size_t j = 0; j < 3; ++j) m(0, j) = f[j];
    const auto batch = Derivatives(std::vector<double>{y}, m, Task::kMulticlass);
    EXPECT_NEAR(d.first, batch.g(0, i), 1e-5);
    EXPECT_NEAR(d.second, batch.h(0, i), 1e-5);
  }
}

TEST(Rng, PortableStreams) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.Normal(), b.Normal());
  Rng c(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(c.Below(7), 7u);
  }
}

}  // namespace
}  // namespace polygam::testkit
