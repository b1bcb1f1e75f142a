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

#include "polygam/constraints.h"

#include <algorithm>

#include "polygam/errors.h"

namespace polygam {

ConstraintSpec::ConstraintSpec(std::span<const FeatureKind> kinds,
                               int num_outputs, FeatureConstraint defaults)
    : features_(kinds.size(), defaults),
      num_outputs_(num_outputs),
      allow_(static_cast<std::size_t>(num_outputs) * kinds.size(), 1) {
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    if (kinds[k] == FeatureKind::kCategorical) {
      features_[k] = FeatureConstraint{.smoothness = -1, .max_degree = 0};
    }
  }
}

void ConstraintSpec::RestrictTo(std::size_t k, std::span<const int> outputs) {
  for (int i = 0; i < num_outputs_; ++i) {
    set_allowed(i, k,
                std::find(outputs.begin(), outputs.end(), i) != outputs.end());
  }
}

int ConstraintSpec::NumAllowedOutputs(std::size_t k) const {
  int count = 0;
  for (int i = 0; i < num_outputs_; ++i) count += allowed(i, k) ? 1 : 0;
  return count;
}

void ConstraintSpec::Validate(std::span<const FeatureKind> kinds,
                              std::span<const std::string> names) const {
  std::vector<std::string> problems;
  auto name_of = [&](std::size_t k) {
    return k < names.size() ? names[k] : "#" + std::to_string(k);
  };
  if (kinds.size() != features_.size()) {
    problems.push_back("constraint count does not match feature count");
  }
  for (std::size_t k = 0; k < features_.size(); ++k) {
    const FeatureConstraint& c = features_[k];
    const std::string who = "feature '" + name_of(k) + "': ";
    if (c.max_degree < 0 || c.max_degree > kMaxDegree) {
      problems.push_back(who + "D must be in [0, 3]");
    }
    if (c.smoothness < -1 || c.smoothness > 2) {
      problems.push_back(who + "S must be in [-1, 2]");
    }
    if (c.smoothness > c.max_degree - 1) {
      problems.push_back(who + "S must be <= D - 1");
    }
    if (c.monotone < -1 || c.monotone > 1) {
      problems.push_back(who + "monotone must be -1, 0 or +1");
    }
    if (c.curvature < -1 || c.curvature > 1) {
      problems.push_back(who + "curvature must be -1, 0 or +1");
    }
    if (c.curvature != 0 && (c.smoothness < 0 || c.max_degree < 2)) {
      problems.push_back(who + "curvature requires S >= 0 and D >= 2");
    }
    if (k < kinds.size() && kinds[k] == FeatureKind::kCategorical &&
        (c.max_degree != 0 || c.smoothness != -1)) {
      problems.push_back(who + "categorical features take D = 0, S = -1");
    }
  }
  for (int i = 0; i < num_outputs_; ++i) {
    bool any = false;
    for (std::size_t k = 0; k < features_.size(); ++k) any |= allowed(i, k);
    if (!any) {
      problems.push_back("output " + std::to_string(i) +
                         " has no allowed features");
    }
  }
  if (!problems.empty()) {
    std::string message = "invalid constraints:";
    for (const auto& p : problems) message += "\n  " + p;
    throw ConfigError(message);
  }
}

}  // namespace polygam
