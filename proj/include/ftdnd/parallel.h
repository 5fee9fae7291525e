// Copyright 2026 The ftdnd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FTDND_PARALLEL_H
#define FTDND_PARALLEL_H

#include <cstddef>
#include <cstdint>
#include <functional>

namespace ftdnd {

/// Calls fn(i) for every i in [0, count) from `workers` threads (0 = hardware concurrency). Work items
/// are claimed in increasing order; callers write results into slot i so the merge does not depend on
/// scheduling. The first exception thrown by fn is rethrown after all threads stop.
void parallel_for(size_t count, size_t workers, const std::function<void(size_t)> &fn);

size_t resolve_workers(size_t workers);

/// Independent 64-bit seed for sub-stream `index` of `seed` (Philox output at a reserved counter).
uint64_t derive_seed(uint64_t seed, uint64_t index);

}  // namespace ftdnd

#endif
