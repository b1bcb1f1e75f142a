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

#include "oracles.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace polygam::testkit {
namespace {

double Leaf(double g, double h, double l1, double l2) {
  double s = 0.0;
  if (g > l1) s = g - l1;
  if (g < -l1) s = g + l1;
  double denom = h + l2;
  if (denom < 1e-12) denom = 1e-12;
  return -s / denom;
}

}  // namespace

StumpOracle BruteForceStump(std::span<const double> x,
                            std::span<const double> g,
                            std::span<const double> h,
                            std::span<const double> thresholds, double l1,
                            double l2, std::size_t min_leaf) {
  std::vector<std::array<double, 3>> rows;
  for (std::size_t n = 0; n < x.size(); ++n) rows.push_back({x[n], g[n], h[n]});
  std::sort(rows.begin(), rows.end());

  StumpOracle best;
  for (double u : thresholds) {
    double gl = 0, hl = 0, gr = 0, hr = 0;
    std::size_t nl = 0, nr = 0;
    for (const auto& r : rows) {
      if (r[0] < u) {
        gl += r[1];
        hl += r[2];
        ++nl;
      } else {
        gr += r[1];
        hr += r[2];
        ++nr;
      }
    }
    if (nl < min_leaf || nr < min_leaf) continue;
    const double a = Leaf(gl, hl, l1, l2);
    const double b = Leaf(gr, hr, l1, l2);
    const double objective =
        a * gl + 0.5 * a * a * hl + b * gr + 0.5 * b * b * hr;
    if (objective < 0 && (!best.found || objective < best.objective)) {
      best = {true, u, a, b, objective, -objective, nl, nr};
    }
  }
  return best;
}

Differences FiniteDiff(const std::function<double(double)>& fn, double x,
                       double delta) {
  const double up = fn(x + delta);
  const double mid = fn(x);
  const double down = fn(x - delta);
  return {(up - down) / (2 * delta), (up - 2 * mid + down) / (delta * delta)};
}

}  // namespace polygam::testkit
