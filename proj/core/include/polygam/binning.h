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

#ifndef POLYGAM_BINNING_H_
#define POLYGAM_BINNING_H_

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "polygam/dataset.h"

namespace polygam {

// Bin counts and leaf size shared by every feature.
struct SplitScheme {
  int n_bins_degree0 = 256;  // fine grid, used by degree-0 terms
  int n_bins_higher = 20;    // coarse grid, used by degrees >= 1
  int min_data_in_leaf = 10;

  friend bool operator==(const SplitScheme&, const SplitScheme&) = default;

  // Throws ConfigError when n_bins_higher > n_bins_degree0, a count is < 1
  // or min_data_in_leaf < 1.
  void Validate() const;
};

// Knots of one feature. Bins are right-open: bin b covers
// [edges[b-1], edges[b]) with edges[-1] = -inf and edges[size] = +inf.
struct FeatureBins {
  FeatureKind kind = FeatureKind::kContinuous;
  double min_value = 0.0;  // observed training range
  double max_value = 0.0;
  std::vector<double> fine_edges;
  std::vector<double> coarse_edges;  // subset of fine_edges

  std::size_t num_fine_bins() const { return fine_edges.size() + 1; }
  std::size_t num_coarse_bins() const { return coarse_edges.size() + 1; }

  // Origin of the local coordinate of coarse bin b. The first bin starts at
  // the observed minimum rather than -inf.
  double coarse_lower(std::size_t b) const {
    return b == 0 ? min_value : coarse_edges[b - 1];
  }
  double coarse_upper(std::size_t b) const {
    return b + 1 < num_coarse_bins() ? coarse_edges[b]
                                     : std::numeric_limits<double>::infinity();
  }

  friend bool operator==(const FeatureBins&, const FeatureBins&) = default;
};

struct BinLayout {
  std::vector<FeatureBins> features;

  std::size_t num_features() const { return features.size(); }
  const FeatureBins& operator[](std::size_t k) const { return features[k]; }

  friend bool operator==(const BinLayout&, const BinLayout&) = default;
};

// Quantile edges: for every rank i/n_bins the midpoint of the two sorted
// samples straddling it. Equal neighbours produce no edge, so constant input
// yields no edges at all. Every resulting bin holds at least one sample.
std::vector<double> BuildBins(std::span<const double> values, int n_bins);

// One bin per distinct value: edges at midpoints of consecutive levels.
std::vector<double> CategoricalEdges(std::span<const double> values);

// Every ceil(num_fine_bins / n_bins)-th fine edge.
std::vector<double> SubsampleEdges(std::span<const double> fine_edges,
                                   int n_bins);

FeatureBins BuildFeatureBins(std::span<const double> values, FeatureKind kind,
                             const SplitScheme& scheme);
BinLayout BuildLayout(const Dataset& data, const SplitScheme& scheme);

// Index of the bin holding x: the b with edges[b-1] <= x < edges[b].
std::size_t AssignBin(double x, std::span<const double> edges);

// The binned variable x*_b of a piecewise basis (0-based b):
//   0             when x is below the bin,
//   x             inside the first bin,
//   x - edges[b-1] inside any later bin,
//   edges[b]      at or above the bin's upper edge.
double BinTransform(double x, std::span<const double> edges, std::size_t b);

}  // namespace polygam

#endif  // POLYGAM_BINNING_H_
