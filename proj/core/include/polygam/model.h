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

#ifndef POLYGAM_MODEL_H_
#define POLYGAM_MODEL_H_

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "polygam/binning.h"
#include "polygam/constraints.h"
#include "polygam/dataset.h"
#include "polygam/matrix.h"

namespace polygam {

// Coefficients of t^0 .. t^3 in a piece's local coordinate.
using Poly = std::array<double, kMaxDegree + 1>;

// One shape function f_ik, stored as two additive layers:
//   - a step layer, one constant per fine bin (degree-0 splits and the
//     global constant);
//   - a cubic per coarse bin in t = x - coarse_lower(b).
// No individual boosting update is kept: every update is folded into these
// coefficients as it is applied.
struct ShapeFunction {
  std::vector<double> step_values;
  std::vector<Poly> pieces;

  bool IsZero() const;
  friend bool operator==(const ShapeFunction&, const ShapeFunction&) = default;
};

// Per-degree sums of h * (x*)^(2d) over the training rows of each bin,
// captured once training ends. Degree 0 is indexed by fine bin, degrees >= 1
// by coarse bin.
struct HessianSums {
  std::array<std::vector<double>, kMaxDegree + 1> by_degree;

  bool empty() const { return by_degree[0].empty(); }
  friend bool operator==(const HessianSums&, const HessianSums&) = default;
};

struct Prediction {
  Matrix scores;  // F, N x J
  Matrix yhat;    // link(F)
};

// The whole trained model: intercepts plus one piecewise cubic per
// (output, feature) pair.
class ParameterStore {
 public:
  ParameterStore() = default;
  ParameterStore(Task task, int num_outputs, BinLayout layout,
                 ConstraintSpec constraints,
                 std::vector<std::string> feature_names,
                 std::string target_name = {});

  Task task() const { return task_; }
  int num_outputs() const { return num_outputs_; }
  std::size_t num_features() const { return layout_.num_features(); }
  const BinLayout& layout() const { return layout_; }
  const FeatureBins& bins(std::size_t k) const { return layout_[k]; }
  const ConstraintSpec& constraints() const { return constraints_; }
  const std::vector<std::string>& feature_names() const {
    return feature_names_;
  }
  const std::string& target_name() const { return target_name_; }

  double intercept(int i) const { return intercepts_[i]; }
  void set_intercept(int i, double value) { intercepts_[i] = value; }

  const ShapeFunction& shape(int i, std::size_t k) const {
    return shapes_[Index(i, k)];
  }
  // Direct coefficient access, used by model loading and tests.
  ShapeFunction& mutable_shape(int i, std::size_t k) {
    return shapes_[Index(i, k)];
  }

  const HessianSums& hessian_sums(int i, std::size_t k) const {
    return hessian_sums_[Index(i, k)];
  }
  void set_hessian_sums(int i, std::size_t k, HessianSums sums) {
    hessian_sums_[Index(i, k)] = std::move(sums);
  }

  // f_ik(x). Outside the training range the boundary pieces extrapolate.
  double EvaluateShape(int i, std::size_t k, double x) const;
  // Exact derivative of order 0, 1 or 2. At a knot the right-hand piece is
  // used; the step layer never contributes.
  double EvaluateDerivative(int i, std::size_t k, double x, int order) const;
  // Left-hand limit of the value (order 0) or a derivative at x.
  double EvaluateLeft(int i, std::size_t k, double x, int order) const;

  // Adds nu * gamma_side * (x - threshold)^d on each side of `threshold`.
  // Degree 0 needs a fine edge and updates the step layer; degrees >= 1 need
  // a coarse edge and are expanded into every affected piece. Throws Error
  // for an off-grid threshold, a masked pair or a degree outside (S, D].
  void AccumulateUpdate(int i, std::size_t k, int d, double threshold,
                        double gamma_left, double gamma_right, double nu);

  // Adds nu * gamma * (x - min_value)^d over the whole line. Only degrees
  // d <= S are learnt globally; anything else throws Error.
  void AccumulateGlobal(int i, std::size_t k, int d, double gamma, double nu);

  // F_i(x) = intercept_i + sum of the allowed shape functions.
  Matrix PredictScores(const Matrix& features) const;
  Prediction Predict(const Matrix& features) const;
  // Same for one row; `scores` must hold num_outputs() entries.
  void PredictRow(std::span<const double> row, std::span<double> scores) const;

  friend bool operator==(const ParameterStore&,
                         const ParameterStore&) = default;

 private:
  std::size_t Index(int i, std::size_t k) const {
    return static_cast<std::size_t>(i) * layout_.num_features() + k;
  }
  void CheckPair(int i, std::size_t k) const;

  Task task_ = Task::kRegression;
  int num_outputs_ = 0;
  BinLayout layout_;
  ConstraintSpec constraints_;
  std::vector<std::string> feature_names_;
  std::string target_name_;
  std::vector<double> intercepts_;
  std::vector<ShapeFunction> shapes_;
  std::vector<HessianSums> hessian_sums_;
};

// Coefficients of nu * gamma * (t + shift)^d as a polynomial in t.
Poly ExpandShiftedMonomial(int d, double shift, double scale);

// Binomial coefficient C(n, k) for the small n used here.
double Binomial(int n, int k);

}  // namespace polygam

#endif  // POLYGAM_MODEL_H_
