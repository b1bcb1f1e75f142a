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

#ifndef POLYGAM_MODEL_IO_H_
#define POLYGAM_MODEL_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "polygam/model.h"

namespace polygam {

inline constexpr std::string_view kModelFormatVersion = "1";

// Model document layout (format_version "1"):
//
//   {
//     "format_version": "1",
//     "task": "regression" | "binary" | "multiclass",
//     "outputs": J,
//     "target": "<name>",
//     "features": [{"name", "kind", "min", "max", "fine_edges",
//                   "coarse_edges", "S", "D", "monotone", "curvature"}],
//     "allow_mask": [[0|1, ...K], ...J],
//     "intercepts": [...J],
//     "shapes": [{"output", "feature", "step_values",
//                 "poly_coeffs": [[a0, a1, a2, a3], ...coarse bins],
//                 "x_ref": [lower edge of each coarse bin]}],
//     "se_accumulators": null | [{"output", "feature",
//                                 "by_degree": [[...], ...4]}]
//     (degrees above the feature's max_degree hold empty lists)
//   }
//
// Only allowed (output, feature) pairs appear under "shapes"; the others are
// zero by construction. Numbers are written in the shortest decimal form that
// reads back to the identical binary64 value.
std::string SerializeModel(const ParameterStore& store);
ParameterStore DeserializeModel(std::string_view text);

void SaveModel(const ParameterStore& store, const std::filesystem::path& path);
// Throws FormatError on a version mismatch, schema violation or a
// non-numeric coefficient.
ParameterStore LoadModel(const std::filesystem::path& path);

}  // namespace polygam

#endif  // POLYGAM_MODEL_IO_H_
