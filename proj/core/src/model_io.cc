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

#include "polygam/model_io.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "polygam/errors.h"

namespace polygam {
namespace {

using nlohmann::json;

const json& Field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw FormatError(std::string("model file: missing field '") + key + "'");
  }
  return obj.at(key);
}

double Number(const json& value, const char* what) {
  if (!value.is_number()) {
    throw FormatError(std::string("model file: '") + what +
                      "' holds a non-numeric value");
  }
  const double v = value.get<double>();
  if (!std::isfinite(v)) {
    throw FormatError(std::string("model file: '") + what + "' is not finite");
  }
  return v;
}

int Integer(const json& value, const char* what) {
  if (!value.is_number_integer()) {
    throw FormatError(std::string("model file: '") + what +
                      "' must be an integer");
  }
  return value.get<int>();
}

std::vector<double> NumberArray(const json& value, const char* what) {
  if (!value.is_array()) {
    throw FormatError(std::string("model file: '") + what +
                      "' must be an array");
  }
  std::vector<double> out;
  out.reserve(value.size());
  for (const auto& v : value) out.push_back(Number(v, what));
  return out;
}

void ExpectSize(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw FormatError(std::string("model file: '") + what + "' has " +
                      std::to_string(got) + " entries, expected " +
                      std::to_string(want));
  }
}

json ToJson(const ParameterStore& store) {
  json doc;
  doc["format_version"] = std::string(kModelFormatVersion);
  doc["task"] = std::string(TaskName(store.task()));
  doc["outputs"] = store.num_outputs();
  doc["target"] = store.target_name();

  json features = json::array();
  for (std::size_t k = 0; k < store.num_features(); ++k) {
    const FeatureBins& bins = store.bins(k);
    const FeatureConstraint& c = store.constraints().feature(k);
    features.push_back({{"name", store.feature_names()[k]},
                        {"kind", std::string(FeatureKindName(bins.kind))},
                        {"min", bins.min_value},
                        {"max", bins.max_value},
                        {"fine_edges", bins.fine_edges},
                        {"coarse_edges", bins.coarse_edges},
                        {"S", c.smoothness},
                        {"D", c.max_degree},
                        {"monotone", c.monotone},
                        {"curvature", c.curvature}});
  }
  doc["features"] = std::move(features);

  json mask = json::array();
  std::vector<double> intercepts;
  for (int i = 0; i < store.num_outputs(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < store.num_features(); ++k) {
      row.push_back(store.constraints().allowed(i, k) ? 1 : 0);
    }
    mask.push_back(std::move(row));
    intercepts.push_back(store.intercept(i));
  }
  doc["allow_mask"] = std::move(mask);
  doc["intercepts"] = intercepts;

  json shapes = json::array();
  json se = json::array();
  bool has_se = false;
  for (int i = 0; i < store.num_outputs(); ++i) {
    for (std::size_t k = 0; k < store.num_features(); ++k) {
      if (!store.constraints().allowed(i, k)) continue;
      const ShapeFunction& s = store.shape(i, k);
      json coeffs = json::array();
      std::vector<double> x_ref;
      for (std::size_t b = 0; b < s.pieces.size(); ++b) {
        coeffs.push_back(json(s.pieces[b]));
        x_ref.push_back(store.bins(k).coarse_lower(b));
      }
      shapes.push_back({{"output", i},
                        {"feature", k},
                        {"step_values", s.step_values},
                        {"poly_coeffs", std::move(coeffs)},
                        {"x_ref", x_ref}});
      const HessianSums& sums = store.hessian_sums(i, k);
      if (!sums.empty()) {
        has_se = true;
        json by_degree = json::array();
        for (const auto& v : sums.by_degree) by_degree.push_back(v);
        se.push_back(
            {{"output", i}, {"feature", k}, {"by_degree", std::move(by_degree)}});
      }
    }
  }
  doc["shapes"] = std::move(shapes);
  doc["se_accumulators"] = has_se ? std::move(se) : json(nullptr);
  return doc;
}

ParameterStore FromJson(const json& doc) {
  const json& version = Field(doc, "format_version");
  if (!version.is_string() || version.get<std::string>() != kModelFormatVersion) {
    throw FormatError("model file: unsupported format_version " +
                      version.dump() + " (expected \"" +
                      std::string(kModelFormatVersion) + "\")");
  }
  const json& task_field = Field(doc, "task");
  if (!task_field.is_string()) throw FormatError("model file: bad 'task'");
  Task task;
  try {
    task = ParseTask(task_field.get<std::string>());
  } catch (const ConfigError& e) {
    throw FormatError(std::string("model file: ") + e.what());
  }
  const int outputs = Integer(Field(doc, "outputs"), "outputs");
  if (outputs < 1) throw FormatError("model file: 'outputs' must be >= 1");

  const json& features = Field(doc, "features");
  if (!features.is_array() || features.empty()) {
    throw FormatError("model file: 'features' must be a non-empty array");
  }
  BinLayout layout;
  std::vector<std::string> names;
  std::vector<FeatureKind> kinds;
  std::vector<FeatureConstraint> constraints;
  for (const auto& f : features) {
    const json& name = Field(f, "name");
    if (!name.is_string()) throw FormatError("model file: bad feature name");
    names.push_back(name.get<std::string>());
    FeatureBins bins;
    const json& kind = Field(f, "kind");
    if (!kind.is_string()) throw FormatError("model file: bad feature kind");
    bins.kind = ParseFeatureKind(kind.get<std::string>());
    bins.min_value = Number(Field(f, "min"), "min");
    bins.max_value = Number(Field(f, "max"), "max");
    bins.fine_edges = NumberArray(Field(f, "fine_edges"), "fine_edges");
    bins.coarse_edges = NumberArray(Field(f, "coarse_edges"), "coarse_edges");
    for (const auto* edges : {&bins.fine_edges, &bins.coarse_edges}) {
      for (std::size_t j = 1; j < edges->size(); ++j) {
        if (!((*edges)[j - 1] < (*edges)[j])) {
          throw FormatError("model file: bin edges must be strictly "
                            "increasing for feature '" + names.back() + "'");
        }
      }
    }
    kinds.push_back(bins.kind);
    layout.features.push_back(std::move(bins));
    constraints.push_back({.smoothness = Integer(Field(f, "S"), "S"),
                           .max_degree = Integer(Field(f, "D"), "D"),
                           .monotone = Integer(Field(f, "monotone"), "monotone"),
                           .curvature =
                               Integer(Field(f, "curvature"), "curvature")});
  }
  const std::size_t k_count = names.size();

  ConstraintSpec spec(kinds, outputs);
  for (std::size_t k = 0; k < k_count; ++k) spec.feature(k) = constraints[k];
  const json& mask = Field(doc, "allow_mask");
  if (!mask.is_array()) throw FormatError("model file: bad 'allow_mask'");
  ExpectSize(mask.size(), static_cast<std::size_t>(outputs), "allow_mask");
  for (int i = 0; i < outputs; ++i) {
    const json& row = mask[static_cast<std::size_t>(i)];
    if (!row.is_array()) throw FormatError("model file: bad 'allow_mask'");
    ExpectSize(row.size(), k_count, "allow_mask row");
    for (std::size_t k = 0; k < k_count; ++k) {
      spec.set_allowed(i, k, Integer(row[k], "allow_mask") != 0);
    }
  }
  try {
    spec.Validate(kinds, names);
  } catch (const ConfigError& e) {
    throw FormatError(std::string("model file: ") + e.what());
  }

  const json& target = Field(doc, "target");
  ParameterStore store(task, outputs, std::move(layout), std::move(spec),
                       std::move(names),
                       target.is_string() ? target.get<std::string>() : "");
  const auto intercepts = NumberArray(Field(doc, "intercepts"), "intercepts");
  ExpectSize(intercepts.size(), static_cast<std::size_t>(outputs),
             "intercepts");
  for (int i = 0; i < outputs; ++i) store.set_intercept(i, intercepts[i]);

  auto pair_of = [&](const json& entry) {
    const int i = Integer(Field(entry, "output"), "output");
    const int k = Integer(Field(entry, "feature"), "feature");
    if (i < 0 || i >= outputs || k < 0 || static_cast<std::size_t>(k) >= k_count) {
      throw FormatError("model file: (output, feature) out of range");
    }
    if (!store.constraints().allowed(i, k)) {
      throw FormatError("model file: coefficients given for a masked pair");
    }
    return std::pair<int, std::size_t>(i, static_cast<std::size_t>(k));
  };

  const json& shapes = Field(doc, "shapes");
  if (!shapes.is_array()) throw FormatError("model file: bad 'shapes'");
  for (const auto& entry : shapes) {
    const auto [i, k] = pair_of(entry);
    ShapeFunction& s = store.mutable_shape(i, k);
    auto steps = NumberArray(Field(entry, "step_values"), "step_values");
    ExpectSize(steps.size(), s.step_values.size(), "step_values");
    s.step_values = std::move(steps);
    const json& coeffs = Field(entry, "poly_coeffs");
    if (!coeffs.is_array()) throw FormatError("model file: bad 'poly_coeffs'");
    ExpectSize(coeffs.size(), s.pieces.size(), "poly_coeffs");
    for (std::size_t b = 0; b < s.pieces.size(); ++b) {
      const auto row = NumberArray(coeffs[b], "poly_coeffs");
      ExpectSize(row.size(), s.pieces[b].size(), "poly_coeffs row");
      std::copy(row.begin(), row.end(), s.pieces[b].begin());
    }
  }

  const json& se = Field(doc, "se_accumulators");
  if (!se.is_null()) {
    if (!se.is_array()) throw FormatError("model file: bad 'se_accumulators'");
    for (const auto& entry : se) {
      const auto [i, k] = pair_of(entry);
      const json& by_degree = Field(entry, "by_degree");
      if (!by_degree.is_array()) {
        throw FormatError("model file: bad 'by_degree'");
      }
      ExpectSize(by_degree.size(), kMaxDegree + 1, "by_degree");
      HessianSums sums;
      for (int d = 0; d <= kMaxDegree; ++d) {
        sums.by_degree[d] = NumberArray(by_degree[d], "by_degree");
        const int max_degree = store.constraints().feature(k).max_degree;
        const std::size_t want = d == 0 ? store.bins(k).num_fine_bins()
                                 : d <= max_degree ? store.bins(k).num_coarse_bins()
                                                   : 0;
        ExpectSize(sums.by_degree[d].size(), want, "by_degree");
      }
      store.set_hessian_sums(i, k, std::move(sums));
    }
  }
  return store;
}

}  // namespace

std::string SerializeModel(const ParameterStore& store) {
  return ToJson(store).dump(1) + "\n";
}

ParameterStore DeserializeModel(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("model file: ") + e.what());
  }
  try {
    return FromJson(doc);
  } catch (const json::exception& e) {
    throw FormatError(std::string("model file: ") + e.what());
  }
}

void SaveModel(const ParameterStore& store, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << SerializeModel(store);
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

ParameterStore LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return DeserializeModel(buffer.str());
}

}  // namespace polygam
