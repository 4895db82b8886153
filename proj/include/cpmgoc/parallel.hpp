// Copyright 2026 The cpmgoc Authors.
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

#ifndef CPMGOC_PARALLEL_HPP
#define CPMGOC_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace cpmgoc {

/// Upper bound on worker threads used by parallel_for. 0 restores the default
/// (hardware concurrency).
void set_thread_limit(unsigned threads);
unsigned thread_limit();

/// Calls body(i) for every i in [0, n), splitting the range into contiguous
/// chunks across threads. Each index must write only its own output slot;
/// callers reduce afterwards in index order so results do not depend on the
/// thread count. Nested calls run serially. The first exception thrown by a
/// body is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body);

}  // namespace cpmgoc

#endif  // CPMGOC_PARALLEL_HPP
