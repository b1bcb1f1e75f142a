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

#include "polygam/uncertainty.h"

#include <cmath>
#include <limits>

#include "polygam/errors.h"
#include "polygam/loss.h"

namespace polygam {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

HessianSums SumsFor(const FeatureBins& bins, int max_degree,
                    std::span<const double> x, std::span<const double> h) {
  HessianSums sums;
  sums.by_degree[0].assign(bins.num_fine_bins(), 0.0);
  for (int d = 1; d <= max_degree; ++d) {
    sums.by_degree[d].assign(bins.num_coarse_bins(), 0.0);
  }
  for (std::size_t n = 0; n < x.size(); ++n) {
    sums.by_degree[0][AssignBin(x[n], bins.fine_edges)] += h[n];
    if (max_degree < 1) continue;
    const std::size_t b = AssignBin(x[n], bins.coarse_edges);
    const double xs = BinTransform(x[n], bins.coarse_edges, b);
    const double xs2 = xs * xs;
    double w = 1.0;
    for (int d = 1; d <= max_degree; ++d) {
      w *= xs2;
      sums.by_degree[d][b] += h[n] * w;
    }
  }
  return sums;
}

void FillSums(ParameterStore& store, const Dataset& data) {
  if (data.num_features() != store.num_features()) {
    throw DataError("dataset has " + std::to_string(data.num_features()) +
                    " features, the model expects " +
                    std::to_string(store.num_features()));
  }
  const Matrix scores = store.PredictScores(data.features);
  const DerivativeBatch batch = Derivatives(data.targets, scores, data.task);
  for (std::size_t k = 0; k < store.num_features(); ++k) {
    const std::vector<double> x = data.column(k);
    const int max_degree = store.constraints().feature(k).max_degree;
    for (int i = 0; i < store.num_outputs(); ++i) {
      if (!store.constraints().allowed(i, k)) continue;
      const std::vector<double> h = batch.h.column(static_cast<std::size_t>(i));
      store.set_hessian_sums(i, k, SumsFor(store.bins(k), max_degree, x, h));
    }
  }
}

}  // namespace

void CaptureHessianSums(ParameterStore& store, const Dataset& train) {
  FillSums(store, train);
}

UncertaintyTable ParamSe(const ParameterStore& store) {
  UncertaintyTable table;
  table.num_outputs = store.num_outputs();
  table.num_features = store.num_features();
  table.se.resize(static_cast<std::size_t>(table.num_outputs) *
                  table.num_features);
  bool any = false;
  for (int i = 0; i < table.num_outputs; ++i) {
    for (std::size_t k = 0; k < table.num_features; ++k) {
      if (!store.constraints().allowed(i, k)) continue;
      const HessianSums& sums = store.hessian_sums(i, k);
      if (sums.empty()) continue;
      any = true;
      HessianSums& out = table.se[i * table.num_features + k];
      for (std::size_t d = 0; d < sums.by_degree.size(); ++d) {
        for (double s : sums.by_degree[d]) {
          out.by_degree[d].push_back(s > 0.0 ? 1.0 / std::sqrt(s) : kInf);
        }
      }
    }
  }
  if (!any) throw Error("model carries no Hessian sums for standard errors");
  return table;
}

UncertaintyTable ParamSe(const ParameterStore& store, const Dataset& data) {
  ParameterStore copy = store;
  FillSums(copy, data);
  return ParamSe(copy);
}

std::vector<BandPoint> ShapeCi(const ParameterStore& store,
                               const UncertaintyTable& table, int i,
                               std::size_t k, std::span<const double> grid) {
  const FeatureBins& bins = store.bins(k);
  const bool allowed = store.constraints().allowed(i, k);
  std::vector<BandPoint> out;
  out.reserve(grid.size());
  for (double x : grid) {
    BandPoint p;
    p.f = store.EvaluateShape(i, k, x);
    if (allowed) {
      double variance = 0.0;
      const auto& se0 = table.at(i, k, 0);
      if (!se0.empty()) {
        const double s = se0[AssignBin(x, bins.fine_edges)];
        if (std::isinf(s)) {
          p.infinite = true;
        } else {
          variance += s * s;
        }
      }
      for (int d = 1; d <= kMaxDegree; ++d) {
        const auto& se = table.at(i, k, d);
        for (std::size_t b = 0; b < se.size(); ++b) {
          const double xs = BinTransform(x, bins.coarse_edges, b);
          const double w = std::pow(xs * xs, d);
          if (w == 0.0) continue;
          if (std::isinf(se[b])) {
            p.infinite = true;
          } else {
            variance += se[b] * se[b] * w;
          }
        }
      }
      p.se = p.infinite ? kInf : std::sqrt(variance);
    }
    p.lower = p.f - kZ95 * p.se;
    p.upper = p.f + kZ95 * p.se;
    out.push_back(p);
  }
  return out;
}

}  // namespace polygam
