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

#ifndef POLYGAM_CONSTRAINTS_H_
#define POLYGAM_CONSTRAINTS_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "polygam/dataset.h"

namespace polygam {

inline constexpr int kMaxDegree = 3;

// Shape requirements of one feature.
//
// smoothness S in {-1, 0, 1, 2}: the shape function is C^S (S = -1 allows
// jumps). Degrees <= S are learnt as single global monomials, degrees in
// (S, max_degree] through splits. monotone and curvature give the required
// sign of f' and f'' (0 = unconstrained).
struct FeatureConstraint {
  int smoothness = -1;
  int max_degree = kMaxDegree;
  int monotone = 0;
  int curvature = 0;

  friend bool operator==(const FeatureConstraint&,
                         const FeatureConstraint&) = default;
};

class ConstraintSpec {
 public:
  ConstraintSpec() = default;
  // Every output may use every feature. Continuous features get `defaults`;
  // categorical ones are restricted to degree-0 steps.
  ConstraintSpec(std::span<const FeatureKind> kinds, int num_outputs,
                 FeatureConstraint defaults = {});

  std::size_t num_features() const { return features_.size(); }
  int num_outputs() const { return num_outputs_; }

  const FeatureConstraint& feature(std::size_t k) const {
    return features_[k];
  }
  FeatureConstraint& feature(std::size_t k) { return features_[k]; }

  bool allowed(int output, std::size_t k) const {
    return allow_[static_cast<std::size_t>(output) * features_.size() + k] !=
           0;
  }
  void set_allowed(int output, std::size_t k, bool allowed) {
    allow_[static_cast<std::size_t>(output) * features_.size() + k] =
        allowed ? 1 : 0;
  }
  // Restricts feature k to exactly the listed outputs.
  void RestrictTo(std::size_t k, std::span<const int> outputs);
  // Number of outputs that may use feature k.
  int NumAllowedOutputs(std::size_t k) const;

  // Collects every violated invariant into one ConfigError:
  //   S <= D - 1, S in [-1, 2], D in [0, 3], signs in {-1, 0, 1},
  //   curvature needs S >= 0 and D >= 2, categorical features need D = 0,
  //   every output keeps at least one feature.
  void Validate(std::span<const FeatureKind> kinds,
                std::span<const std::string> names) const;

  friend bool operator==(const ConstraintSpec&,
                         const ConstraintSpec&) = default;

 private:
  std::vector<FeatureConstraint> features_;
  int num_outputs_ = 0;
  std::vector<unsigned char> allow_;  // row-major J x K
};

}  // namespace polygam

#endif  // POLYGAM_CONSTRAINTS_H_
