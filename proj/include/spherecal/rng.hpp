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

#include <cmath>
#include <cstdint>

namespace spherecal {

/// SplitMix64. Used instead of <random> engines/distributions because the
/// sampling pipeline requires bit-exact results for a given seed across
/// platforms and standard distributions are implementation-defined.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53-bit resolution.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform index in [0, n). Modulo bias is irrelevant here; determinism
    /// is what matters.
    std::uint64_t next_below(std::uint64_t n) { return next() % n; }

    /// Uniform in [lo, hi).
    double next_range(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Standard normal via Box-Muller (no state beyond the stream).
    double next_gaussian() {
        const double u1 = next_double();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
        return r * std::cos(6.28318530717958647692 * u2);
    }

private:
    std::uint64_t state_;
};

}  // namespace spherecal
