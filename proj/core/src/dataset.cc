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

#include "polygam/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include "polygam/errors.h"
#include "text.h"

namespace polygam {

std::string_view TaskName(Task task) {
  switch (task) {
    case Task::kRegression:
      return "regression";
    case Task::kBinary:
      return "binary";
    case Task::kMulticlass:
      return "multiclass";
  }
  return "regression";
}

Task ParseTask(std::string_view name) {
  if (name == "regression") return Task::kRegression;
  if (name == "binary") return Task::kBinary;
  if (name == "multiclass") return Task::kMulticlass;
  throw ConfigError("unknown task '" + std::string(name) +
                    "' (expected regression, binary or multiclass)");
}

std::string_view FeatureKindName(FeatureKind kind) {
  return kind == FeatureKind::kCategorical ? "categorical" : "continuous";
}

FeatureKind ParseFeatureKind(std::string_view name) {
  if (name == "continuous") return FeatureKind::kContinuous;
  if (name == "categorical") return FeatureKind::kCategorical;
  throw FormatError("unknown feature kind '" + std::string(name) + "'");
}

CsvTable ReadCsvTable(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");

  CsvTable table;
  std::string line;
  if (!std::getline(in, line) || internal::Trim(line).empty()) {
    throw DataError("'" + path.string() + "': missing header row");
  }
  for (const auto field : internal::SplitFields(internal::Trim(line))) {
    table.header.emplace_back(internal::Unquote(field));
  }

  std::size_t row_number = 0;
  while (std::getline(in, line)) {
    const std::string_view trimmed = internal::Trim(line);
    if (trimmed.empty()) continue;
    ++row_number;
    const auto fields = internal::SplitFields(trimmed);
    if (fields.size() != table.header.size()) {
      throw DataError("'" + path.string() + "' row " +
                      std::to_string(row_number) + ": expected " +
                      std::to_string(table.header.size()) + " cells, got " +
                      std::to_string(fields.size()));
    }
    std::vector<double> values(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto parsed = internal::ParseDouble(fields[c]);
      if (!parsed) {
        throw DataError("'" + path.string() + "' row " +
                        std::to_string(row_number) + ", column '" +
                        table.header[c] + "': cannot parse '" +
                        std::string(internal::Trim(fields[c])) + "'");
      }
      if (!std::isfinite(*parsed)) {
        throw DataError("'" + path.string() + "' row " +
                        std::to_string(row_number) + ", column '" +
                        table.header[c] + "': non-finite value");
      }
      values[c] = *parsed;
    }
    table.rows.push_back(std::move(values));
  }
  return table;
}

int Dataset::FeatureIndex(std::string_view name) const {
  const auto it = std::find(feature_names.begin(), feature_names.end(), name);
  return it == feature_names.end()
             ? -1
             : static_cast<int>(it - feature_names.begin());
}

Dataset Dataset::Subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.features = Matrix(rows.size(), num_features());
  out.targets.resize(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto src = features.row(rows[r]);
    std::copy(src.begin(), src.end(), out.features.row(r).begin());
    out.targets[r] = targets[rows[r]];
  }
  out.feature_names = feature_names;
  out.feature_kinds = feature_kinds;
  out.target_name = target_name;
  out.task = task;
  out.num_classes = num_classes;
  return out;
}

void ValidateDataset(const Dataset& data, bool require_all_classes) {
  const std::size_t n = data.num_rows();
  const std::size_t k = data.num_features();
  if (n == 0) throw DataError("dataset has no rows");
  if (k == 0) throw DataError("dataset has no features");
  if (data.targets.size() != n) {
    throw DataError("target count does not match row count");
  }
  if (data.feature_names.size() != k || data.feature_kinds.size() != k) {
    throw DataError("feature names/kinds do not match the column count");
  }
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      if (!std::isfinite(data.features(r, c))) {
        throw DataError("row " + std::to_string(r + 1) + ", column '" +
                        data.feature_names[c] + "': non-finite value");
      }
    }
    const double y = data.targets[r];
    if (!std::isfinite(y)) {
      throw DataError("row " + std::to_string(r + 1) +
                      ": non-finite target");
    }
    if (data.task == Task::kBinary && y != 0.0 && y != 1.0) {
      throw DataError("row " + std::to_string(r + 1) +
                      ": binary target must be 0 or 1");
    }
    if (data.task == Task::kMulticlass &&
        (y < 0 || y != std::floor(y) || y >= data.num_classes)) {
      throw DataError("row " + std::to_string(r + 1) +
                      ": class index out of range [0, " +
                      std::to_string(data.num_classes) + ")");
    }
  }
  if (data.task == Task::kMulticlass) {
    if (data.num_classes < 2) {
      throw DataError("multi-class task needs at least two classes");
    }
    if (require_all_classes) {
      std::vector<char> seen(data.num_classes, 0);
      for (double y : data.targets) seen[static_cast<int>(y)] = 1;
      for (int j = 0; j < data.num_classes; ++j) {
        if (!seen[j]) {
          throw DataError("class " + std::to_string(j) +
                          " does not appear in the data");
        }
      }
    }
  }
}

Dataset LoadCsv(const std::filesystem::path& path,
                std::string_view target_column, Task task,
                std::span<const std::string> categorical) {
  const CsvTable table = ReadCsvTable(path);
  const auto target_it =
      std::find(table.header.begin(), table.header.end(), target_column);
  if (target_it == table.header.end()) {
    throw DataError("'" + path.string() + "': target column '" +
                    std::string(target_column) + "' not found");
  }
  const std::size_t target_col = target_it - table.header.begin();
  for (const auto& name : categorical) {
    if (std::find(table.header.begin(), table.header.end(), name) ==
        table.header.end()) {
      throw DataError("'" + path.string() + "': categorical column '" + name +
                      "' not found");
    }
  }

  Dataset data;
  data.task = task;
  data.target_name = std::string(target_column);
  std::vector<std::size_t> feature_cols;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c == target_col) continue;
    feature_cols.push_back(c);
    data.feature_names.push_back(table.header[c]);
  }

  const std::size_t n = table.rows.size();
  data.features = Matrix(n, feature_cols.size());
  data.targets.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < feature_cols.size(); ++j) {
      data.features(r, j) = table.rows[r][feature_cols[j]];
    }
    data.targets[r] = table.rows[r][target_col];
  }

  for (std::size_t j = 0; j < feature_cols.size(); ++j) {
    const bool flagged =
        std::find(categorical.begin(), categorical.end(),
                  data.feature_names[j]) != categorical.end();
    std::set<double> distinct;
    for (std::size_t r = 0; r < n && distinct.size() <= 2; ++r) {
      distinct.insert(data.features(r, j));
    }
    data.feature_kinds.push_back(flagged || distinct.size() <= 2
                                     ? FeatureKind::kCategorical
                                     : FeatureKind::kContinuous);
  }

  if (task == Task::kMulticlass) {
    double max_class = 0;
    for (double y : data.targets) max_class = std::max(max_class, y);
    data.num_classes = static_cast<int>(max_class) + 1;
  }
  ValidateDataset(data);
  return data;
}

void WriteCsv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  for (const auto& name : data.feature_names) out << name << ',';
  out << data.target_name << '\n';
  for (std::size_t r = 0; r < data.num_rows(); ++r) {
    for (std::size_t c = 0; c < data.num_features(); ++c) {
      out << internal::FormatDouble(data.features(r, c)) << ',';
    }
    out << internal::FormatDouble(data.targets[r]) << '\n';
  }
}

}  // namespace polygam
