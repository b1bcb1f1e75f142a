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

#include "synthetic.h"

#include <cmath>
#include <numbers>
#include <string>

namespace polygam::testkit {

double Rng::Normal() {
  double u1 = Uniform();
  while (u1 <= 0.0) u1 = Uniform();
  const double u2 = Uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::Gumbel() {
  double u = Uniform();
  while (u <= 0.0) u = Uniform();
  return -std::log(-std::log(u));
}

std::size_t Rng::Below(std::size_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v = engine_();
  while (v >= limit) v = engine_();
  return static_cast<std::size_t>(v % n);
}

int SampleChoice(Rng& rng, const std::vector<double>& utilities) {
  int best = 0;
  double best_value = -INFINITY;
  for (std::size_t j = 0; j < utilities.size(); ++j) {
    const double v = utilities[j] + rng.Gumbel();
    if (v > best_value) {
      best_value = v;
      best = static_cast<int>(j);
    }
  }
  return best;
}

Dataset MakeDataset(std::vector<std::vector<double>> columns,
                    std::vector<double> targets, Task task, int num_classes) {
  Dataset d;
  const std::size_t n = targets.size();
  d.features = Matrix(n, columns.size());
  for (std::size_t k = 0; k < columns.size(); ++k) {
    for (std::size_t r = 0; r < n; ++r) d.features(r, k) = columns[k][r];
    d.feature_names.push_back("x" + std::to_string(k));
    d.feature_kinds.push_back(FeatureKind::kContinuous);
  }
  d.targets = std::move(targets);
  d.target_name = "y";
  d.task = task;
  d.num_classes = task == Task::kMulticlass ? num_classes
                                            : (task == Task::kBinary ? 2 : 1);
  return d;
}

Dataset CubicRegression(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> cols(3, std::vector<double>(n));
  std::vector<double> y(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double a = rng.Uniform(-2, 2);
    const double b = rng.Uniform(-2, 2);
    const double c = rng.Uniform(-2, 2);
    cols[0][r] = a;
    cols[1][r] = b;
    cols[2][r] = c;
    y[r] = 0.5 * a * a * a - a + b * b - 0.5 * b + 0.3 * c * c * c +
           0.3 * rng.Normal();
  }
  return MakeDataset(std::move(cols), std::move(y), Task::kRegression);
}

Dataset CostRegression(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> cols(2, std::vector<double>(n));
  std::vector<double> y(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double cost = rng.Uniform(0, 10);
    const double z = rng.Uniform(-3, 3);
    cols[0][r] = cost;
    cols[1][r] = z;
    y[r] = 8.0 * std::exp(-0.3 * cost) + std::sin(z) + 0.5 * rng.Normal();
  }
  Dataset d = MakeDataset(std::move(cols), std::move(y), Task::kRegression);
  d.feature_names = {"cost", "z"};
  return d;
}

Dataset MaskedMulticlass(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> cols(3, std::vector<double>(n));
  std::vector<double> y(n);
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<double> u(3);
    for (std::size_t k = 0; k < 3; ++k) {
      cols[k][r] = rng.Uniform(-2, 2);
    }
    u[0] = 1.5 * cols[0][r];
    u[1] = std::sin(2.0 * cols[1][r]);
    u[2] = 0.5 * cols[2][r] * cols[2][r] - 0.5;
    y[r] = SampleChoice(rng, u);
  }
  return MakeDataset(std::move(cols), std::move(y), Task::kMulticlass, 3);
}

Dataset ModeChoice(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> cols(7, std::vector<double>(n));
  std::vector<double> y(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double distance = rng.Uniform(0.5, 20.0);  // km
    const double walk = 12.0 * distance * rng.Uniform(0.9, 1.1);
    const double cycle = 4.0 * distance * rng.Uniform(0.85, 1.15);
    const double transit = 10.0 + 3.0 * distance * rng.Uniform(0.6, 1.4);
    const double drive = 4.0 + 2.0 * distance * rng.Uniform(0.7, 1.6);
    const double fare = rng.Uniform(0.0, 1.0) < 0.3 ? 0.0 : rng.Uniform(1.5, 5.0);
    const double fuel = 0.2 * distance + rng.Uniform(0.0, 8.0);
    const double age = rng.Uniform(18.0, 80.0);
    const double a = (age - 45.0) / 15.0;
    std::vector<double> u{
        1.5 - 2.5 * std::log1p(walk / 15.0) - 0.2 * a,
        0.8 - 2.0 * std::log1p(cycle / 10.0) - 0.4 * a * a,
        1.0 - 1.5 * std::log1p(transit / 20.0) - 0.4 * fare,
        1.5 - 1.5 * std::log1p(drive / 15.0) - 0.15 * fuel + 0.3 * a};
    const double values[] = {walk, cycle, transit, drive, fare, fuel, age};
    for (std::size_t k = 0; k < 7; ++k) cols[k][r] = values[k];
    y[r] = SampleChoice(rng, u);
  }
  Dataset d = MakeDataset(std::move(cols), std::move(y), Task::kMulticlass, 4);
  d.feature_names = {"walk_time",    "cycle_time", "transit_time",
                     "drive_time",   "transit_cost", "drive_cost", "age"};
  d.target_name = "mode";
  return d;
}

Dataset LinearGaussian(std::size_t n, std::uint64_t seed, double lo,
                       double hi) {
  Rng rng(seed);
  std::vector<std::vector<double>> cols(1, std::vector<double>(n));
  std::vector<double> y(n);
  for (std::size_t r = 0; r < n; ++r) {
    cols[0][r] = rng.Uniform(lo, hi);
    y[r] = 2.0 * cols[0][r] + rng.Normal();
  }
  return MakeDataset(std::move(cols), std::move(y), Task::kRegression);
}

Dataset RandomRegression(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> cols(1, std::vector<double>(n));
  std::vector<double> y(n);
  const double jump = rng.Uniform(-3, 3);
  const double where = rng.Uniform(-1, 1);
  for (std::size_t r = 0; r < n; ++r) {
    const double x = rng.Uniform(-2, 2);
    cols[0][r] = x;
    y[r] = (x < where ? 0.0 : jump) + 0.5 * x + 0.5 * rng.Normal();
  }
  return MakeDataset(std::move(cols), std::move(y), Task::kRegression);
}

}  // namespace polygam::testkit
