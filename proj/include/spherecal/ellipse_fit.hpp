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

#include <span>
#include <vector>

#include "spherecal/circle_ransac.hpp"
#include "spherecal/conic.hpp"
#include "spherecal/edge_map.hpp"

namespace spherecal {

/// Sub-pixel edge sample found along a radial scan line.
struct RadialProfilePoint {
    PixelPoint position;
    double magnitude = 0.0;
};

/// Ellipse hypothesis in pixel space. conic and geom always describe the
/// same curve; support counts the final inliers.
struct EllipseCandidate {
    Conic conic;
    EllipseGeom geom;
    int support = 0;
    std::vector<std::uint32_t> inliers;
};

inline constexpr int kRadialRays = 360;
inline constexpr double kRadialStepPx = 0.25;
inline constexpr double kEllipseInlierTolPx = 2.0;

/// Radial search half-width around the circle radius.
inline double radial_half_width(double circle_radius) {
    return std::max(5.0, 0.25 * circle_radius);
}

/// For each of kRadialRays directions from the circle center, scans the
/// gradient magnitude (bilinear, kRadialStepPx steps) over
/// [R - half, R + half] and keeps the position of the maximum when it
/// exceeds tau. Rays leaving the image or staying below tau contribute
/// nothing. Throws TooFewProfilePoints when fewer than 8 rays produce a
/// sample.
std::vector<RadialProfilePoint> collect_radial_points(const GradientField& field,
                                                      const CircleHypothesis& circle,
                                                      double tau);

/// Direct least-squares ellipse fit: minimizes the algebraic error under
/// the elliptic constraint 4AC - B^2 = 1, solved with the Halir-Flusser
/// block decomposition of the constrained eigenproblem. Input points are
/// centered and isotropically scaled internally; the result is mapped back
/// through the exact coefficient substitution, so the fit commutes with
/// similarity transforms of the data. The returned conic always satisfies
/// B^2 - 4AC < 0. Throws DegenerateInput / NoEllipseSolution.
Conic fit_ellipse_direct(std::span<const PixelPoint> pts);

/// Indices of points within `tol` Sampson distance of the conic.
std::vector<std::uint32_t> ellipse_inliers(std::span<const RadialProfilePoint> points,
                                           const Conic& c, double tol);

/// 5-point RANSAC over radial profile points. Deterministic for a fixed
/// seed (iteration i uses rng_seed ^ i). The best hypothesis is refit on
/// its consensus set and the support re-verified against the refit curve.
/// Throws TooFewPoints (< 5) or NoConsensus (best support < 8).
EllipseCandidate ransac_ellipse(const std::vector<RadialProfilePoint>& points, double inlier_tol,
                                const RansacConfig& cfg);

/// Clusters candidates by geometric similarity and averages the largest
/// cluster: cx, cy, a, b arithmetically, the angle circularly mod pi. Ties
/// between equal-size clusters go to the larger total support.
EllipseGeom merge_candidates(const std::vector<EllipseCandidate>& cands);

}  // namespace spherecal
