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

#include "polygam/explain.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>

#include "polygam/errors.h"
#include "polygam/loss.h"
#include "text.h"

namespace polygam {
namespace {

using internal::FormatDouble;

constexpr double kWidth = 640;
constexpr double kHeight = 400;
constexpr double kLeft = 70;
constexpr double kRight = 20;
constexpr double kTop = 30;
constexpr double kBottom = 50;
constexpr int kTicks = 5;

std::string Fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string Label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string Escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open " + path.string() + " for writing");
  file << text;
  if (!file) throw Error("failed to write " + path.string());
}

}  // namespace

std::vector<double> Linspace(double lo, double hi, std::size_t points) {
  if (points < 2) throw ConfigError("a grid needs at least 2 points");
  if (!(hi > lo)) return {lo};
  std::vector<double> x(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t p = 0; p < points; ++p) {
    x[p] = lo + step * static_cast<double>(p);
  }
  x.back() = hi;
  return x;
}

ShapeGrid TabulateShape(const ParameterStore& store, int output,
                        std::size_t k, std::size_t points,
                        const UncertaintyTable* table) {
  ShapeGrid grid;
  grid.output = output;
  grid.feature = k;
  grid.feature_name = store.feature_names()[k];
  const FeatureBins& bins = store.bins(k);
  grid.x = Linspace(bins.min_value, bins.max_value, points);
  for (double x : grid.x) {
    grid.f.push_back(store.EvaluateShape(output, k, x));
    grid.f_prime.push_back(store.EvaluateDerivative(output, k, x, 1));
    grid.f_double_prime.push_back(store.EvaluateDerivative(output, k, x, 2));
  }
  if (table != nullptr) {
    grid.has_ci = true;
    for (const BandPoint& p : ShapeCi(store, *table, output, k, grid.x)) {
      grid.ci_lower.push_back(p.lower);
      grid.ci_upper.push_back(p.upper);
    }
  }
  return grid;
}

std::string ShapeCsv(const ShapeGrid& grid) {
  std::string out = "x,f,f_prime,f_double_prime";
  if (grid.has_ci) out += ",ci_lower,ci_upper";
  out += '\n';
  for (std::size_t p = 0; p < grid.x.size(); ++p) {
    out += FormatDouble(grid.x[p]) + ',' + FormatDouble(grid.f[p]) + ',' +
           FormatDouble(grid.f_prime[p]) + ',' +
           FormatDouble(grid.f_double_prime[p]);
    if (grid.has_ci) {
      out += ',' + FormatDouble(grid.ci_lower[p]) + ',' +
             FormatDouble(grid.ci_upper[p]);
    }
    out += '\n';
  }
  return out;
}

std::string RenderSvg(const ShapeGrid& grid) {
  if (grid.x.empty()) throw Error("cannot render an empty grid");
  double x_lo = grid.x.front();
  double x_hi = grid.x.back();
  if (!(x_hi > x_lo)) {
    x_lo -= 0.5;
    x_hi += 0.5;
  }
  double y_lo = *std::min_element(grid.f.begin(), grid.f.end());
  double y_hi = *std::max_element(grid.f.begin(), grid.f.end());
  if (grid.has_ci) {
    for (std::size_t p = 0; p < grid.x.size(); ++p) {
      if (std::isfinite(grid.ci_lower[p])) y_lo = std::min(y_lo, grid.ci_lower[p]);
      if (std::isfinite(grid.ci_upper[p])) y_hi = std::max(y_hi, grid.ci_upper[p]);
    }
  }
  if (!(y_hi > y_lo)) {
    y_lo -= 1.0;
    y_hi += 1.0;
  }
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double y) {
    y = std::clamp(y, y_lo, y_hi);
    return kTop + (y_hi - y) / (y_hi - y_lo) * plot_h;
  };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
       Fixed(kWidth) + "\" height=\"" + Fixed(kHeight) + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + Fixed(kWidth) + "\" height=\"" +
       Fixed(kHeight) + "\" fill=\"white\"/>\n";
  s += "<text x=\"" + Fixed(kWidth / 2) +
       "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" +
       Escape(grid.feature_name) + " (output " + std::to_string(grid.output) +
       ")</text>\n";

  if (grid.has_ci) {
    s += "<polygon fill=\"steelblue\" fill-opacity=\"0.25\" stroke=\"none\" "
         "points=\"";
    for (std::size_t p = 0; p < grid.x.size(); ++p) {
      s += Fixed(px(grid.x[p])) + ',' + Fixed(py(grid.ci_upper[p])) + ' ';
    }
    for (std::size_t p = grid.x.size(); p-- > 0;) {
      s += Fixed(px(grid.x[p])) + ',' + Fixed(py(grid.ci_lower[p])) + ' ';
    }
    s += "\"/>\n";
  }

  // Axes and ticks.
  const double axis_y = kTop + plot_h;
  s += "<line x1=\"" + Fixed(kLeft) + "\" y1=\"" + Fixed(axis_y) + "\" x2=\"" +
       Fixed(kLeft + plot_w) + "\" y2=\"" + Fixed(axis_y) +
       "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + Fixed(kLeft) + "\" y1=\"" + Fixed(kTop) + "\" x2=\"" +
       Fixed(kLeft) + "\" y2=\"" + Fixed(axis_y) + "\" stroke=\"black\"/>\n";
  for (int t = 0; t < kTicks; ++t) {
    const double frac = static_cast<double>(t) / (kTicks - 1);
    const double xv = x_lo + frac * (x_hi - x_lo);
    const double yv = y_lo + frac * (y_hi - y_lo);
    const double tx = px(xv);
    const double ty = py(yv);
    s += "<line x1=\"" + Fixed(tx) + "\" y1=\"" + Fixed(axis_y) + "\" x2=\"" +
         Fixed(tx) + "\" y2=\"" + Fixed(axis_y + 5) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + Fixed(tx) + "\" y=\"" + Fixed(axis_y + 18) +
         "\" text-anchor=\"middle\" font-size=\"11\">" + Label(xv) +
         "</text>\n";
    s += "<line x1=\"" + Fixed(kLeft - 5) + "\" y1=\"" + Fixed(ty) +
         "\" x2=\"" + Fixed(kLeft) + "\" y2=\"" + Fixed(ty) +
         "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + Fixed(kLeft - 8) + "\" y=\"" + Fixed(ty + 4) +
         "\" text-anchor=\"end\" font-size=\"11\">" + Label(yv) + "</text>\n";
  }
  s += "<text x=\"" + Fixed(kLeft + plot_w / 2) + "\" y=\"" +
       Fixed(kHeight - 8) + "\" text-anchor=\"middle\" font-size=\"12\">" +
       Escape(grid.feature_name) + "</text>\n";

  s += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" "
       "points=\"";
  for (std::size_t p = 0; p < grid.x.size(); ++p) {
    if (p > 0) s += ' ';
    s += Fixed(px(grid.x[p])) + ',' + Fixed(py(grid.f[p]));
  }
  s += "\"/>\n</svg>\n";
  return s;
}

std::string ShapeFileStem(int output, std::string_view feature_name) {
  std::string name;
  for (char c : feature_name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
    name += ok ? c : '_';
  }
  return "shape_" + std::to_string(output) + "_" + name;
}

std::vector<ShapeGrid> ExportShapes(const ParameterStore& store,
                                    const ExportOptions& options,
                                    const std::filesystem::path& dir) {
  std::vector<std::size_t> selected;
  if (options.features.empty()) {
    for (std::size_t k = 0; k < store.num_features(); ++k) selected.push_back(k);
  } else {
    const auto& names = store.feature_names();
    for (const std::string& name : options.features) {
      const auto it = std::find(names.begin(), names.end(), name);
      if (it == names.end()) throw ConfigError("unknown feature '" + name + "'");
      selected.push_back(static_cast<std::size_t>(it - names.begin()));
    }
  }
  std::optional<UncertaintyTable> table;
  if (options.with_ci) table = ParamSe(store);

  std::filesystem::create_directories(dir);
  std::vector<ShapeGrid> grids;
  for (int i = 0; i < store.num_outputs(); ++i) {
    for (std::size_t k : selected) {
      if (!store.constraints().allowed(i, k)) continue;
      ShapeGrid grid = TabulateShape(store, i, k, options.grid_points,
                                     table ? &*table : nullptr);
      const std::string stem = ShapeFileStem(i, grid.feature_name);
      WriteText(dir / (stem + ".csv"), ShapeCsv(grid));
      if (options.write_svg) WriteText(dir / (stem + ".svg"), RenderSvg(grid));
      grids.push_back(std::move(grid));
    }
  }
  return grids;
}

double PointElasticity(Task task, double x, double f_prime, double level) {
  if (level == 0.0) throw NumericError("elasticity undefined at a zero prediction");
  if (task == Task::kRegression) return x * f_prime / level;
  return x * level * (1.0 - level) * f_prime / level;
}

double Elasticity(const ParameterStore& store, int output, std::size_t k,
                  std::span<const double> row) {
  if (row.size() != store.num_features()) {
    throw DataError("row has " + std::to_string(row.size()) +
                    " values, the model expects " +
                    std::to_string(store.num_features()));
  }
  if (!store.constraints().allowed(output, k)) return 0.0;
  if (store.task() == Task::kMulticlass &&
      store.constraints().NumAllowedOutputs(k) > 1) {
    throw ConfigError("feature '" + store.feature_names()[k] +
                      "' is used by several outputs; its probability "
                      "elasticity is not determined by one shape function");
  }
  std::vector<double> scores(static_cast<std::size_t>(store.num_outputs()));
  store.PredictRow(row, scores);
  const double x = row[k];
  const double f_prime = store.EvaluateDerivative(output, k, x, 1);
  double level = scores[static_cast<std::size_t>(output)];
  if (store.task() == Task::kBinary) {
    level = Sigmoid(level);
  } else if (store.task() == Task::kMulticlass) {
    Matrix m(1, scores.size());
    std::copy(scores.begin(), scores.end(), m.row(0).begin());
    level = LinkApply(m, Task::kMulticlass)(0, static_cast<std::size_t>(output));
  }
  return PointElasticity(store.task(), x, f_prime, level);
}

}  // namespace polygam
