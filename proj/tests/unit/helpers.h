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

#ifndef POLYGAM_TESTS_UNIT_HELPERS_H_
#define POLYGAM_TESTS_UNIT_HELPERS_H_

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "polygam/binning.h"
#include "polygam/constraints.h"
#include "polygam/model.h"

namespace polygam::test {

inline FeatureBins ManualBins(double min_value, double max_value,
                              std::vector<double> fine,
                              std::vector<double> coarse) {
  FeatureBins bins;
  bins.min_value = min_value;
  bins.max_value = max_value;
  bins.fine_edges = std::move(fine);
  bins.coarse_edges = std::move(coarse);
  return bins;
}

inline ParameterStore OneFeatureStore(FeatureBins bins, FeatureConstraint c,
                                      Task task = Task::kRegression,
                                      int outputs = 1) {
  const std::vector<FeatureKind> kinds{bins.kind};
  ConstraintSpec spec(kinds, outputs, c);
  BinLayout layout{{std::move(bins)}};
  return ParameterStore(task, outputs, std::move(layout), std::move(spec),
                        {"x0"}, "y");
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("polygam_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline void WriteFile(const std::filesystem::path& path,
                      const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace polygam::test

#endif  // POLYGAM_TESTS_UNIT_HELPERS_H_
