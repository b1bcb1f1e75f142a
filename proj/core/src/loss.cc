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

#include "polygam/loss.h"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace polygam {
namespace {

void SoftmaxRow(std::span<const double> scores, std::span<double> out) {
  const double max_score = *std::max_element(scores.begin(), scores.end());
  double total = 0.0;
  for (std::size_t j = 0; j < scores.size(); ++j) {
    out[j] = std::exp(scores[j] - max_score);
    total += out[j];
  }
  for (double& p : out) p /= total;
}

double ClampProb(double p) {
  return std::clamp(p, kProbClamp, 1.0 - kProbClamp);
}

}  // namespace

double Sigmoid(double f) {
  if (f >= 0) return 1.0 / (1.0 + std::exp(-f));
  const double e = std::exp(f);
  return e / (1.0 + e);
}

Matrix LinkApply(const Matrix& scores, Task task) {
  Matrix out(scores.rows(), scores.cols());
  for (std::size_t r = 0; r < scores.rows(); ++r) {
    const auto in = scores.row(r);
    auto dst = out.row(r);
    switch (task) {
      case Task::kRegression:
        std::copy(in.begin(), in.end(), dst.begin());
        break;
      case Task::kBinary:
        for (std::size_t j = 0; j < in.size(); ++j) dst[j] = Sigmoid(in[j]);
        break;
      case Task::kMulticlass:
        SoftmaxRow(in, dst);
        break;
    }
  }
  return out;
}

double LossEval(std::span<const double> targets, const Matrix& yhat,
                Task task) {
  assert(targets.size() == yhat.rows());
  const std::size_t n = targets.size();
  if (n == 0) return 0.0;
  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const double y = targets[r];
    switch (task) {
      case Task::kRegression: {
        const double e = y - yhat(r, 0);
        total += e * e;
        break;
      }
      case Task::kBinary: {
        const double p = ClampProb(yhat(r, 0));
        total -= y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
        break;
      }
      case Task::kMulticlass:
        total -= std::log(ClampProb(yhat(r, static_cast<std::size_t>(y))));
        break;
    }
  }
  return total / static_cast<double>(n);
}

double SampleLoss(double target, std::span<const double> scores, Task task) {
  switch (task) {
    case Task::kRegression: {
      const double e = target - scores[0];
      return e * e;
    }
    case Task::kBinary: {
      // log(1 + e^F) - y F, written to avoid overflow.
      const double f = scores[0];
      const double softplus =
          f > 0 ? f + std::log1p(std::exp(-f)) : std::log1p(std::exp(f));
      return softplus - target * f;
    }
    case Task::kMulticlass: {
      const double max_score =
          *std::max_element(scores.begin(), scores.end());
      double total = 0.0;
      for (double s : scores) total += std::exp(s - max_score);
      return max_score + std::log(total) -
             scores[static_cast<std::size_t>(target)];
    }
  }
  return 0.0;
}

DerivativeBatch Derivatives(std::span<const double> targets,
                            const Matrix& scores, Task task) {
  assert(targets.size() == scores.rows());
  DerivativeBatch batch{Matrix(scores.rows(), scores.cols()),
                        Matrix(scores.rows(), scores.cols())};
  std::vector<double> prob(scores.cols());
  for (std::size_t r = 0; r < scores.rows(); ++r) {
    const double y = targets[r];
    switch (task) {
      case Task::kRegression:
        batch.g(r, 0) = 2.0 * (scores(r, 0) - y);
        batch.h(r, 0) = 2.0;
        break;
      case Task::kBinary: {
        const double p = Sigmoid(scores(r, 0));
        batch.g(r, 0) = p - y;
        batch.h(r, 0) = p * (1.0 - p);
        break;
      }
      case Task::kMulticlass: {
        SoftmaxRow(scores.row(r), prob);
        const auto label = static_cast<std::size_t>(y);
        for (std::size_t j = 0; j < prob.size(); ++j) {
          batch.g(r, j) = prob[j] - (j == label ? 1.0 : 0.0);
          batch.h(r, j) = prob[j] * (1.0 - prob[j]);
        }
        break;
      }
    }
  }
  return batch;
}

std::string_view LossName(Task task) {
  switch (task) {
    case Task::kRegression:
      return "mse";
    case Task::kBinary:
      return "bce";
    case Task::kMulticlass:
      return "cel";
  }
  return "mse";
}

}  // namespace polygam
