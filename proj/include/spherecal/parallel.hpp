// Copyright 2026 The spherecal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file
// except in compliance with the License. You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace spherecal {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(i) for i in [begin, end) split across `threads` disjoint
/// sub-ranges. fn must only write to per-index state so the result is
/// independent of the thread count and scheduling.
inline void parallel_for(std::uint64_t begin, std::uint64_t end, int threads,
                         const std::function<void(std::uint64_t)>& fn) {
    const std::uint64_t n = end - begin;
    if (threads <= 1 || n < 2) {
        for (std::uint64_t i = begin; i < end; ++i) fn(i);
        return;
    }
    const std::uint64_t per = (n + threads - 1) / threads;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
        const std::uint64_t lo = begin + per * static_cast<std::uint64_t>(t);
        if (lo >= end) break;
        const std::uint64_t hi = std::min(end, lo + per);
        pool.emplace_back([lo, hi, &fn] {
            for (std::uint64_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace spherecal
