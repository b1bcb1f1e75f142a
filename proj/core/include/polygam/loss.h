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

#ifndef POLYGAM_LOSS_H_
#define POLYGAM_LOSS_H_

#include <span>
#include <string_view>

#include "polygam/dataset.h"
#include "polygam/matrix.h"

namespace polygam {

// Lower bound applied to Hessian sums before any division.
inline constexpr double kHessianFloor = 1e-12;
// Probabilities are clamped to [kProbClamp, 1 - kProbClamp] inside logs.
inline constexpr double kProbClamp = 1e-15;

// First and second loss derivatives with respect to the prediction function
// F, one column per output. The multi-class Hessian is the diagonal of the
// softmax cross-entropy Hessian.
struct DerivativeBatch {
  Matrix g;
  Matrix h;
};

double Sigmoid(double f);

// Identity, sigmoid or row-wise softmax of an N x J score matrix.
Matrix LinkApply(const Matrix& scores, Task task);

// Mean element-wise loss of predictions `yhat` (already through the link):
// squared error, binary cross-entropy or categorical cross-entropy.
double LossEval(std::span<const double> targets, const Matrix& yhat, Task task);

// Loss of a single sample as a function of its raw scores (one per output).
double SampleLoss(double target, std::span<const double> scores, Task task);

DerivativeBatch Derivatives(std::span<const double> targets,
                            const Matrix& scores, Task task);

// Short name of the evaluation metric: "mse", "bce" or "cel".
std::string_view LossName(Task task);

}  // namespace polygam

#endif  // POLYGAM_LOSS_H_
