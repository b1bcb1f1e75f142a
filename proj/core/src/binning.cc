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

#include "polygam/binning.h"

#include <algorithm>
#include <string>

#include "polygam/errors.h"

namespace polygam {

void SplitScheme::Validate() const {
  std::string problems;
  if (n_bins_degree0 < 1) problems += " n_bins_degree0 must be >= 1;";
  if (n_bins_higher < 1) problems += " n_bins_higher must be >= 1;";
  if (n_bins_higher > n_bins_degree0) {
    problems += " n_bins_higher must not exceed n_bins_degree0;";
  }
  if (min_data_in_leaf < 1) problems += " min_data_in_leaf must be >= 1;";
  if (!problems.empty()) throw ConfigError("split scheme:" + problems);
}

std::vector<double> BuildBins(std::span<const double> values, int n_bins) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  std::vector<double> edges;
  if (n < 2 || n_bins < 2) return edges;
  const auto bins = static_cast<std::size_t>(n_bins);
  for (std::size_t i = 1; i < bins; ++i) {
    const std::size_t rank = i * n / bins;
    if (rank == 0 || rank >= n) continue;
    const double lo = sorted[rank - 1];
    const double hi = sorted[rank];
    if (!(lo < hi)) continue;
    const double mid = 0.5 * (lo + hi);
    if (!edges.empty() && mid <= edges.back()) continue;
    edges.push_back(mid);
  }
  return edges;
}

std::vector<double> CategoricalEdges(std::span<const double> values) {
  std::vector<double> levels(values.begin(), values.end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::vector<double> edges;
  for (std::size_t i = 1; i < levels.size(); ++i) {
    edges.push_back(0.5 * (levels[i - 1] + levels[i]));
  }
  return edges;
}

std::vector<double> SubsampleEdges(std::span<const double> fine_edges,
                                   int n_bins) {
  const std::size_t fine_bins = fine_edges.size() + 1;
  const auto target = static_cast<std::size_t>(std::max(n_bins, 1));
  const std::size_t step = (fine_bins + target - 1) / target;
  std::vector<double> edges;
  for (std::size_t j = step - 1; j < fine_edges.size(); j += step) {
    edges.push_back(fine_edges[j]);
  }
  return edges;
}

FeatureBins BuildFeatureBins(std::span<const double> values, FeatureKind kind,
                             const SplitScheme& scheme) {
  FeatureBins bins;
  bins.kind = kind;
  if (!values.empty()) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    bins.min_value = *lo;
    bins.max_value = *hi;
  }
  if (kind == FeatureKind::kCategorical) {
    bins.fine_edges = CategoricalEdges(values);
    bins.coarse_edges = bins.fine_edges;
  } else {
    bins.fine_edges = BuildBins(values, scheme.n_bins_degree0);
    bins.coarse_edges = SubsampleEdges(bins.fine_edges, scheme.n_bins_higher);
  }
  return bins;
}

BinLayout BuildLayout(const Dataset& data, const SplitScheme& scheme) {
  scheme.Validate();
  BinLayout layout;
  for (std::size_t k = 0; k < data.num_features(); ++k) {
    const auto column = data.column(k);
    layout.features.push_back(
        BuildFeatureBins(column, data.feature_kinds[k], scheme));
  }
  return layout;
}

std::size_t AssignBin(double x, std::span<const double> edges) {
  return static_cast<std::size_t>(
      std::upper_bound(edges.begin(), edges.end(), x) - edges.begin());
}

double BinTransform(double x, std::span<const double> edges, std::size_t b) {
  const std::size_t num_bins = edges.size() + 1;
  const bool has_lower = b > 0;
  const bool has_upper = b + 1 < num_bins;
  if (has_lower && x < edges[b - 1]) return 0.0;
  if (!has_upper || x < edges[b]) {
    return has_lower ? x - edges[b - 1] : x;
  }
  return edges[b];
}

}  // namespace polygam
