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

#include "polygam/model.h"

#include <algorithm>
#include <cmath>

#include "polygam/errors.h"
#include "polygam/loss.h"

namespace polygam {
namespace {

double EvalPoly(const Poly& p, double t, int order) {
  switch (order) {
    case 0:
      return p[0] + t * (p[1] + t * (p[2] + t * p[3]));
    case 1:
      return p[1] + t * (2.0 * p[2] + t * 3.0 * p[3]);
    case 2:
      return 2.0 * p[2] + 6.0 * p[3] * t;
    default:
      throw Error("derivative order must be 0, 1 or 2");
  }
}

// Index of the edge equal to `u`, or -1.
long EdgeIndex(std::span<const double> edges, double u) {
  const auto it = std::lower_bound(edges.begin(), edges.end(), u);
  if (it == edges.end() || *it != u) return -1;
  return it - edges.begin();
}

}  // namespace

double Binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double result = 1.0;
  for (int j = 1; j <= k; ++j) result = result * (n - k + j) / j;
  return result;
}

Poly ExpandShiftedMonomial(int d, double shift, double scale) {
  Poly out{};
  double shift_power = 1.0;  // shift^(d - j), built from j = d downwards
  for (int j = d; j >= 0; --j) {
    out[j] = scale * Binomial(d, j) * shift_power;
    shift_power *= shift;
  }
  return out;
}

bool ShapeFunction::IsZero() const {
  for (double v : step_values) {
    if (v != 0.0) return false;
  }
  for (const Poly& p : pieces) {
    for (double v : p) {
      if (v != 0.0) return false;
    }
  }
  return true;
}

ParameterStore::ParameterStore(Task task, int num_outputs, BinLayout layout,
                               ConstraintSpec constraints,
                               std::vector<std::string> feature_names,
                               std::string target_name)
    : task_(task),
      num_outputs_(num_outputs),
      layout_(std::move(layout)),
      constraints_(std::move(constraints)),
      feature_names_(std::move(feature_names)),
      target_name_(std::move(target_name)),
      intercepts_(num_outputs, 0.0) {
  const std::size_t k_count = layout_.num_features();
  if (constraints_.num_features() != k_count ||
      constraints_.num_outputs() != num_outputs ||
      feature_names_.size() != k_count) {
    throw Error("parameter store: layout, constraints and names disagree");
  }
  shapes_.resize(static_cast<std::size_t>(num_outputs) * k_count);
  hessian_sums_.resize(shapes_.size());
  for (int i = 0; i < num_outputs; ++i) {
    for (std::size_t k = 0; k < k_count; ++k) {
      ShapeFunction& s = shapes_[Index(i, k)];
      s.step_values.assign(layout_[k].num_fine_bins(), 0.0);
      s.pieces.assign(layout_[k].num_coarse_bins(), Poly{});
    }
  }
}

void ParameterStore::CheckPair(int i, std::size_t k) const {
  if (i < 0 || i >= num_outputs_ || k >= num_features()) {
    throw Error("parameter store: (output, feature) out of range");
  }
}

double ParameterStore::EvaluateShape(int i, std::size_t k, double x) const {
  return EvaluateDerivative(i, k, x, 0);
}

double ParameterStore::EvaluateDerivative(int i, std::size_t k, double x,
                                          int order) const {
  const FeatureBins& bins = layout_[k];
  const ShapeFunction& s = shapes_[Index(i, k)];
  const std::size_t cb = AssignBin(x, bins.coarse_edges);
  double value = EvalPoly(s.pieces[cb], x - bins.coarse_lower(cb), order);
  if (order == 0) value += s.step_values[AssignBin(x, bins.fine_edges)];
  return value;
}

double ParameterStore::EvaluateLeft(int i, std::size_t k, double x,
                                    int order) const {
  const FeatureBins& bins = layout_[k];
  const ShapeFunction& s = shapes_[Index(i, k)];
  auto left_bin = [x](const std::vector<double>& edges) {
    return static_cast<std::size_t>(
        std::lower_bound(edges.begin(), edges.end(), x) - edges.begin());
  };
  const std::size_t cb = left_bin(bins.coarse_edges);
  double value = EvalPoly(s.pieces[cb], x - bins.coarse_lower(cb), order);
  if (order == 0) value += s.step_values[left_bin(bins.fine_edges)];
  return value;
}

void ParameterStore::AccumulateUpdate(int i, std::size_t k, int d,
                                      double threshold, double gamma_left,
                                      double gamma_right, double nu) {
  CheckPair(i, k);
  if (!constraints_.allowed(i, k)) {
    throw Error("update on a masked (output, feature) pair");
  }
  const FeatureConstraint& c = constraints_.feature(k);
  if (d < 0 || d > c.max_degree || d <= c.smoothness) {
    throw Error("split degree " + std::to_string(d) +
                " not permitted for feature '" + feature_names_[k] + "'");
  }
  const FeatureBins& bins = layout_[k];
  ShapeFunction& s = shapes_[Index(i, k)];
  if (d == 0) {
    const long e = EdgeIndex(bins.fine_edges, threshold);
    if (e < 0) throw Error("degree-0 threshold is not a fine-grid edge");
    for (std::size_t b = 0; b < s.step_values.size(); ++b) {
      s.step_values[b] +=
          nu * (static_cast<long>(b) <= e ? gamma_left : gamma_right);
    }
    return;
  }
  const long e = EdgeIndex(bins.coarse_edges, threshold);
  if (e < 0) throw Error("threshold is not a coarse-grid edge");
  for (std::size_t b = 0; b < s.pieces.size(); ++b) {
    const double gamma = static_cast<long>(b) <= e ? gamma_left : gamma_right;
    if (gamma == 0.0) continue;
    const Poly add = ExpandShiftedMonomial(d, bins.coarse_lower(b) - threshold,
                                           nu * gamma);
    for (int j = 0; j <= d; ++j) s.pieces[b][j] += add[j];
  }
}

void ParameterStore::AccumulateGlobal(int i, std::size_t k, int d,
                                      double gamma, double nu) {
  CheckPair(i, k);
  if (!constraints_.allowed(i, k)) {
    throw Error("update on a masked (output, feature) pair");
  }
  if (d < 0 || d > constraints_.feature(k).smoothness) {
    throw Error("global degree " + std::to_string(d) +
                " exceeds the smoothness order of feature '" +
                feature_names_[k] + "'");
  }
  if (gamma == 0.0) return;
  const FeatureBins& bins = layout_[k];
  ShapeFunction& s = shapes_[Index(i, k)];
  if (d == 0) {
    for (double& v : s.step_values) v += nu * gamma;
    return;
  }
  for (std::size_t b = 0; b < s.pieces.size(); ++b) {
    const Poly add = ExpandShiftedMonomial(
        d, bins.coarse_lower(b) - bins.min_value, nu * gamma);
    for (int j = 0; j <= d; ++j) s.pieces[b][j] += add[j];
  }
}

void ParameterStore::PredictRow(std::span<const double> row,
                                std::span<double> scores) const {
  for (int i = 0; i < num_outputs_; ++i) {
    double f = intercepts_[i];
    for (std::size_t k = 0; k < num_features(); ++k) {
      if (constraints_.allowed(i, k)) f += EvaluateShape(i, k, row[k]);
    }
    scores[i] = f;
  }
}

Matrix ParameterStore::PredictScores(const Matrix& features) const {
  if (features.cols() != num_features()) {
    throw DataError("expected " + std::to_string(num_features()) +
                    " feature columns, got " +
                    std::to_string(features.cols()));
  }
  Matrix scores(features.rows(), static_cast<std::size_t>(num_outputs_));
  for (std::size_t r = 0; r < features.rows(); ++r) {
    PredictRow(features.row(r), scores.row(r));
  }
  return scores;
}

Prediction ParameterStore::Predict(const Matrix& features) const {
  Prediction out;
  out.scores = PredictScores(features);
  out.yhat = LinkApply(out.scores, task_);
  return out;
}

}  // namespace polygam
