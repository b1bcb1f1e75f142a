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

#ifndef POLYGAM_SRC_PARALLEL_H_
#define POLYGAM_SRC_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace polygam::internal {

// Worker count: `requested` if positive, else PB_THREADS if set, else the
// hardware concurrency.
int ResolveThreadCount(int requested);

// Runs fn(0) .. fn(count - 1) on up to `threads` threads. Each index is
// processed exactly once; the first exception thrown is rethrown.
void ParallelFor(std::size_t count, int threads,
                 const std::function<void(std::size_t)>& fn);

}  // namespace polygam::internal

#endif  // POLYGAM_SRC_PARALLEL_H_
