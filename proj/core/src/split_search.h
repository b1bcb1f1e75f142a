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

#ifndef POLYGAM_SRC_SPLIT_SEARCH_H_
#define POLYGAM_SRC_SPLIT_SEARCH_H_

#include <cstdint>
#include <span>
#include <vector>

#include "polygam/booster.h"
#include "polygam/model.h"

namespace polygam::internal {

// Training column of one feature, binned once before boosting starts.
struct BinnedColumn {
  std::vector<std::uint32_t> fine_bin;
  std::vector<std::uint32_t> coarse_bin;
  std::vector<double> local_t;  // x - coarse_lower(coarse_bin)
  std::vector<std::size_t> fine_count;
  std::vector<std::size_t> coarse_count;
};

BinnedColumn BinColumn(std::span<const double> x, const FeatureBins& bins);

struct SearchSettings {
  double learning_rate = 0.1;
  double l1 = 0.0;
  double l2 = 0.0;
  std::size_t min_leaf = 1;
};

// Best candidate of one (output, feature) pair, or kind == kNone when no
// candidate has a positive gain. Candidates are scanned by increasing degree
// then increasing threshold and only a strictly larger gain replaces the
// incumbent.
SplitCandidate BestFeatureCandidate(const ParameterStore& store, int output,
                                    std::size_t k, const BinnedColumn& column,
                                    std::span<const double> g,
                                    std::span<const double> h,
                                    const SearchSettings& settings);

// x^n for small non-negative n.
inline double IntPow(double x, int n) {
  double r = 1.0;
  for (int j = 0; j < n; ++j) r *= x;
  return r;
}

}  // namespace polygam::internal

#endif  // POLYGAM_SRC_SPLIT_SEARCH_H_
