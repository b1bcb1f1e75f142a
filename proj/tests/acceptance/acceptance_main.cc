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

#include <chrono>
#include <cstdio>
#include <cstring>
#include <exception>

#include "criteria.h"

namespace {

using polygam::acceptance::Outcome;

struct Criterion {
  const char* name;
  Outcome (*run)();
  double budget_seconds;
};

constexpr Criterion kCriteria[] = {
    {"oracle_equivalence", polygam::acceptance::OracleEquivalence, 10},
    {"gradient_check", polygam::acceptance::GradientCheck, 5},
    {"continuity_ladder", polygam::acceptance::ContinuityLadder, 120},
    {"shape_constraints", polygam::acceptance::ShapeConstraints, 120},
    {"output_masking", polygam::acceptance::OutputMasking, 60},
    {"tree_sum_equivalence", polygam::acceptance::TreeSumEquivalence, 60},
    {"housing_mse", polygam::acceptance::HousingMse, 600},
    {"constraint_trade_off", polygam::acceptance::ConstraintTradeOff, 600},
    {"ci_coverage", polygam::acceptance::CiCoverage, 300},
    {"determinism_round_trip", polygam::acceptance::DeterminismRoundTrip, 60},
};

}  // namespace

// Usage: polygam_acceptance [criterion-name ...]
int main(int argc, char** argv) {
  int failures = 0;
  int index = 0;
  for (const Criterion& c : kCriteria) {
    ++index;
    if (argc > 1) {
      bool selected = false;
      for (int a = 1; a < argc; ++a) selected |= std::strcmp(argv[a], c.name) == 0;
      if (!selected) continue;
    }
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    const bool in_time = seconds <= c.budget_seconds;
    const bool pass = out.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s %2d %-24s %s (%.2fs of %.0fs budget%s)\n",
                pass ? "PASS" : "FAIL", index, c.name, out.detail.c_str(),
                seconds, c.budget_seconds, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
