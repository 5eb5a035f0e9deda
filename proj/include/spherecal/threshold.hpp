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

#include "spherecal/camera.hpp"
#include "spherecal/errors.hpp"

namespace spherecal {

/// Circle in pixel coordinates, the working model for the first RANSAC stage.
struct CircleHypothesis {
    PixelPoint center;
    double radius = 1.0;  // pixels
};

/// Intermediate quantities of the adaptive threshold computation.
///   alpha  angle between the viewing cone axis and the image plane
///   beta   half-angle of the tangent cone, arcsin(r/d)
///   theta  angle between the +x axis and the ellipse major axis
///   d      estimated camera-to-sphere distance
///   s      predicted major/minor axis ratio after pixel scaling, >= 1
///   t      inlier threshold in pixels, noise slack included
struct ThresholdContext {
    double alpha = 0.0;
    double beta = 0.0;
    double theta = 0.0;
    double d = 0.0;
    double s = 1.0;
    double t = 0.0;
};

/// One-pixel slack added on top of the geometric threshold to absorb edge
/// localization noise.
inline constexpr double kNoiseSlackPx = 1.0;

/// Conservative fallback fraction of the circle radius used when the
/// adaptive computation is degenerate (sphere too close, alpha <= beta).
inline constexpr double kFallbackThresholdFraction = 0.05;

/// The geometric axis ratio diverges as alpha approaches beta. Beyond this
/// bound the section is far from circular, the circle-as-noisy-ellipse
/// premise no longer holds, and the computation reports ConeDegenerate
/// instead of an exploding threshold. Realistic poses (distance >= 2 radii,
/// offsets to 40 degrees) stay below 1.5.
inline constexpr double kMaxAxisRatio = 1.6;

/// Distance estimate from the fitted circle radius: d = r * f / R.
double estimate_distance(double circle_radius_px, double sphere_radius, double focal_px);

/// Angle between the back-projected ray through x and the image plane, in
/// (0, pi/2]. Exactly pi/2 at the principal point (the in-plane direction
/// vanishes there, so the limit value is used).
double compute_alpha(PixelPoint x, const CameraIntrinsics& k);

/// Tangent-cone half-angle arcsin(r/d). Throws SphereTooClose when d <= r.
double compute_beta(double sphere_radius, double distance);

/// Major/minor axis ratio of the cone section cut by the image plane:
///
///   a/b = cos(beta) / sqrt(sin^2(alpha) cos^2(beta) - cos^2(alpha) sin^2(beta))
///
/// Derived from the section geometry: the cone axis pierces the plane at a
/// point splitting the major axis into a1, a2 with a1/a2 =
/// sin(alpha+beta)/sin(alpha-beta), and b^2 = a1 a2 sin^2(alpha). Equals 1
/// iff alpha = pi/2. Throws ConeDegenerate when alpha <= beta (the section
/// is unbounded).
double axis_ratio(double alpha, double beta);

/// Angle between the +x axis and the radial direction from the principal
/// point to x, in [0, pi]. The ellipse major axis lies on that radial line.
/// Throws UndefinedAtPrincipalPoint when x is the principal point.
double compute_theta(PixelPoint x, const CameraIntrinsics& k);

/// Axis ratio corrected for anisotropic pixel scales:
///   s = (a/b) * sqrt((us^2 cos^2 t + vs^2 sin^2 t) / (us^2 sin^2 t + vs^2 cos^2 t))
/// May drop below 1 when the scaling swaps major and minor axis.
double scaled_ratio(double a_over_b, double theta, double us, double vs);

/// Inlier threshold from the predicted ratio: t = (s - 1) R / (s + 1),
/// equivalently s = (R + t) / (R - t). Requires s >= 1.
double threshold(double s, double circle_radius_px);

/// Full adaptive threshold for one circle hypothesis. Composes the distance
/// estimate, the cone angles, the pixel-scale correction and the noise
/// slack. Throws SphereTooClose / ConeDegenerate for poses outside the
/// model's validity; callers fall back to kFallbackThresholdFraction * R.
ThresholdContext adaptive_threshold(const CircleHypothesis& c, const CameraIntrinsics& k,
                                    double sphere_radius);

}  // namespace spherecal
