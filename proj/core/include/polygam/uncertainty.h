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

// Standard errors from the diagonal of the loss Hessian.
//
// Every coefficient of output i, feature k, degree d and bin b gets
//   SE = 1 / sqrt(sum over the bin's training rows of h_i * (x*)^(2d)),
// with fine bins for d = 0 and coarse bins for d >= 1. A shape function's
// pointwise standard error combines them assuming independence.

#ifndef POLYGAM_UNCERTAINTY_H_
#define POLYGAM_UNCERTAINTY_H_

#include <span>
#include <vector>

#include "polygam/dataset.h"
#include "polygam/model.h"

namespace polygam {

inline constexpr double kZ95 = 1.96;

// Fills the store's Hessian sums from h evaluated at the store's own
// predictions on `train`. Masked pairs are left empty.
void CaptureHessianSums(ParameterStore& store, const Dataset& train);

struct UncertaintyTable {
  int num_outputs = 0;
  std::size_t num_features = 0;
  // se[i * num_features + k].by_degree[d][b]; +inf where the sum is zero.
  std::vector<HessianSums> se;

  const std::vector<double>& at(int i, std::size_t k, int d) const {
    return se[static_cast<std::size_t>(i) * num_features + k]
        .by_degree[static_cast<std::size_t>(d)];
  }
};

// From the sums stored in the model. Throws Error when the model carries
// none.
UncertaintyTable ParamSe(const ParameterStore& store);
// From sums recomputed on `data`.
UncertaintyTable ParamSe(const ParameterStore& store, const Dataset& data);

struct BandPoint {
  double f = 0.0;
  double se = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  // Some contributing coefficient has no data behind it.
  bool infinite = false;
};

// f_ik(x) +- 1.96 * SE_pred(x) on each grid point. SE_pred^2 is the d = 0
// coefficient variance of the fine bin holding x plus, for d >= 1, the sum
// over coarse bins of SE^2 * (x*_b)^(2d).
std::vector<BandPoint> ShapeCi(const ParameterStore& store,
                               const UncertaintyTable& table, int i,
                               std::size_t k, std::span<const double> grid);

}  // namespace polygam

#endif  // POLYGAM_UNCERTAINTY_H_
