// Copyright 2026 The LatentMark Authors.
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

#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#include <omp.h>

namespace lmk {

/// Worker count for per-sample fan-out; 0 means all available threads.
inline int resolve_jobs(int jobs) { return jobs > 0 ? jobs : omp_get_max_threads(); }

/// Runs body(i) for i in [0, n) on `jobs` threads. Every index runs; if any
/// throw, the exception of the lowest failing index is rethrown afterwards,
/// so the reported failure does not depend on scheduling.
template <class Body>
void parallel_for(std::size_t n, int jobs, Body&& body) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_jobs(jobs))
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace lmk
