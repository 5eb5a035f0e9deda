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
#include <vector>

#include "spherecal/camera.hpp"
#include "spherecal/edge_map.hpp"
#include "spherecal/threshold.hpp"

namespace spherecal {

struct RansacConfig {
    std::uint64_t iterations = 1'000'000;
    std::uint64_t rng_seed = 0;
    double min_inlier_fraction = 0.02;  // of all edge points
    int candidate_count = 5;
    int threads = 1;  // 0 = hardware concurrency
};

/// Circle hypothesis with its support. `threshold_px` is the adaptive
/// threshold that produced the inlier set, so the count can be re-verified
/// from the outside.
struct ScoredCircle {
    CircleHypothesis circle;
    std::vector<std::uint32_t> inliers;
    std::int64_t score = 0;
    double threshold_px = 0.0;
};

/// Gradient direction must be radial up to this angle (mod pi, so inward
/// and outward gradients both qualify).
inline constexpr double kDirectionToleranceRad = 0.39269908169872414;  // 22.5 deg

/// Circumscribed circle of three points. Throws Collinear when the triangle
/// area is below 1e-9 px^2.
CircleHypothesis circle_from_3_points(PixelPoint p1, PixelPoint p2, PixelPoint p3);

/// Inlier indices of a circle hypothesis under threshold t: the radial
/// residual |dist - R| must be within t and the gradient direction must be
/// radial within kDirectionToleranceRad.
std::vector<std::uint32_t> circle_inliers(const std::vector<EdgePoint>& points,
                                          const CircleHypothesis& circle, double t);

/// 3-point RANSAC over the edge points with the adaptive threshold.
/// Deterministic for a fixed seed and independent of cfg.threads: iteration
/// i draws from a generator seeded with rng_seed ^ i, and the candidate
/// reduction scans hypotheses in iteration order. Returns up to
/// candidate_count circles after non-maximum suppression, best first.
/// Throws TooFewPoints (< 3) or NoCircleFound.
std::vector<ScoredCircle> ransac_circles(const std::vector<EdgePoint>& points,
                                         const CameraIntrinsics& k, double sphere_radius,
                                         const RansacConfig& cfg);

}  // namespace spherecal
