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

#ifndef POLYGAM_EXPLAIN_H_
#define POLYGAM_EXPLAIN_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "polygam/model.h"
#include "polygam/uncertainty.h"

namespace polygam {

inline constexpr std::size_t kDefaultGridPoints = 512;

// A shape function tabulated on an x grid.
struct ShapeGrid {
  int output = 0;
  std::size_t feature = 0;
  std::string feature_name;
  std::vector<double> x;
  std::vector<double> f;
  std::vector<double> f_prime;
  std::vector<double> f_double_prime;
  bool has_ci = false;
  std::vector<double> ci_lower;
  std::vector<double> ci_upper;
};

// `points` evenly spaced values from lo to hi inclusive (points >= 2). A
// degenerate range gives the single point lo.
std::vector<double> Linspace(double lo, double hi, std::size_t points);

// Tabulates f_ik over the feature's training range. `table` adds CI bounds.
ShapeGrid TabulateShape(const ParameterStore& store, int output,
                        std::size_t k, std::size_t points,
                        const UncertaintyTable* table = nullptr);

// CSV text: x,f,f_prime,f_double_prime[,ci_lower,ci_upper] at %.17g.
std::string ShapeCsv(const ShapeGrid& grid);

// Self-contained SVG 1.1 line plot with axes, tick labels and, when present,
// a shaded CI band. Identical input gives identical bytes.
std::string RenderSvg(const ShapeGrid& grid);

struct ExportOptions {
  std::vector<std::string> features;  // empty = every feature
  std::size_t grid_points = kDefaultGridPoints;
  bool with_ci = false;
  bool write_svg = true;
};

// Writes shape_<output>_<feature>.csv (and .svg) into `dir` for every
// allowed pair of the selected features. Unknown names throw ConfigError;
// `with_ci` needs a model carrying Hessian sums.
std::vector<ShapeGrid> ExportShapes(const ParameterStore& store,
                                    const ExportOptions& options,
                                    const std::filesystem::path& dir);

// File stem for a pair; characters outside [A-Za-z0-9._-] become '_'.
std::string ShapeFileStem(int output, std::string_view feature_name);

// Point elasticity from its ingredients. `level` is F(x) for regression and
// the predicted probability of the output otherwise:
//   regression     x * f' / F
//   probabilities  x * yhat * (1 - yhat) * f' / yhat
double PointElasticity(Task task, double x, double f_prime, double level);

// Elasticity of output i with respect to feature k at a full feature row.
// For classification the feature must be allowed in output i only; otherwise
// the derivative of the probability involves other shape functions and
// ConfigError is thrown. A zero prediction throws NumericError.
double Elasticity(const ParameterStore& store, int output, std::size_t k,
                  std::span<const double> row);

}  // namespace polygam

#endif  // POLYGAM_EXPLAIN_H_
