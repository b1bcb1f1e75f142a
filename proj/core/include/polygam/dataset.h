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

#ifndef POLYGAM_DATASET_H_
#define POLYGAM_DATASET_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polygam/matrix.h"

namespace polygam {

enum class Task { kRegression, kBinary, kMulticlass };

enum class FeatureKind { kContinuous, kCategorical };

std::string_view TaskName(Task task);
// Parses "regression", "binary" or "multiclass". Throws ConfigError.
Task ParseTask(std::string_view name);

std::string_view FeatureKindName(FeatureKind kind);
FeatureKind ParseFeatureKind(std::string_view name);

// A fully numeric table as read from a CSV file. Rows may be empty.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// Reads a comma-separated file with a mandatory header row. Every cell must
// parse as a finite number; failures name the 1-based data row and the column.
CsvTable ReadCsvTable(const std::filesystem::path& path);

// Training data: N x K feature matrix plus one target per row.
//
// Targets hold the real response for regression, 0/1 for binary tasks and the
// class index in [0, num_classes) for multi-class tasks.
struct Dataset {
  Matrix features;
  std::vector<double> targets;
  std::vector<std::string> feature_names;
  std::vector<FeatureKind> feature_kinds;
  std::string target_name;
  Task task = Task::kRegression;
  int num_classes = 1;

  std::size_t num_rows() const { return features.rows(); }
  std::size_t num_features() const { return features.cols(); }
  // Number of prediction functions J: 1 except for multi-class tasks.
  int num_outputs() const {
    return task == Task::kMulticlass ? num_classes : 1;
  }
  std::vector<double> column(std::size_t k) const {
    return features.column(k);
  }
  // Index of a feature by name, or -1.
  int FeatureIndex(std::string_view name) const;

  // Rows in the given order. The class count is kept so that partitions of a
  // multi-class dataset agree on J.
  Dataset Subset(std::span<const std::size_t> rows) const;
};

// Checks every Dataset invariant; throws DataError on the first violation.
// `require_all_classes` enforces that every class in [0, J) is present.
void ValidateDataset(const Dataset& data, bool require_all_classes = true);

// Builds a dataset from a CSV file. Columns other than `target_column` become
// features in file order. A feature is categorical when it has at most two
// distinct values or is listed in `categorical`.
Dataset LoadCsv(const std::filesystem::path& path,
                std::string_view target_column, Task task,
                std::span<const std::string> categorical = {});

// Writes features followed by the target column with round-trip precision.
void WriteCsv(const Dataset& data, const std::filesystem::path& path);

}  // namespace polygam

#endif  // POLYGAM_DATASET_H_
