// Copyright 2026 The squeezenoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <functional>

namespace sqn {

/// Worker threads for grid evaluation. Reads SQUEEZE_THREADS (0 or unset
/// means hardware concurrency); always at least 1.
unsigned worker_count();

/// Runs body(i) for i in [0, n) over contiguous static chunks. Each index is
/// visited exactly once, so results written by index are deterministic
/// regardless of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace sqn
