// Copyright 2026 The RobustMG Authors. All rights reserved.
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

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace robustmg {

/// Worker cap: ROBUSTMG_THREADS when set, otherwise the hardware count.
inline int max_threads() {
    if (const char* env = std::getenv("ROBUSTMG_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace detail {
inline thread_local bool in_parallel_region = false;
}

/// Runs fn(i) for i in [0, n). Indices are split into contiguous chunks over
/// at most max_threads() workers; nested calls degrade to serial so callers
/// can parallelize freely at any level. fn must only write to its own slots.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const int workers =
        detail::in_parallel_region ? 1 : std::min<int>(max_threads(), static_cast<int>(n));
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            detail::in_parallel_region = true;
            for (std::size_t i = lo; i < hi; ++i) fn(i);
            detail::in_parallel_region = false;
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace robustmg
