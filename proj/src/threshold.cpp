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

#include "spherecal/threshold.hpp"

#include <algorithm>
#include <cmath>

namespace spherecal {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double estimate_distance(double circle_radius_px, double sphere_radius, double focal_px) {
    return sphere_radius * focal_px / circle_radius_px;
}

double compute_alpha(PixelPoint x, const CameraIntrinsics& k) {
    const NormalizedPoint w = normalize(x, k);
    const double n = std::hypot(w.u, w.v);
    if (n == 0.0) return kPi / 2.0;
    // Angle between (-wu, -wv, -1) and the in-plane unit vector toward the
    // principal point; equals atan(1 / |w|).
    return std::atan2(1.0, n);
}

double compute_beta(double sphere_radius, double distance) {
    if (!(distance > sphere_radius)) {
        throw error(errc::sphere_too_close, "distance must exceed the sphere radius");
    }
    return std::asin(sphere_radius / distance);
}

double axis_ratio(double alpha, double beta) {
    if (!(alpha > beta)) {
        throw error(errc::cone_degenerate, "cone axis too shallow for a bounded section");
    }
    const double cb = std::cos(beta);
    // sin^2(a)cos^2(b) - cos^2(a)sin^2(b) = sin(a-b) sin(a+b)
    const double denom = std::sin(alpha - beta) * std::sin(alpha + beta);
    return cb / std::sqrt(denom);
}

double compute_theta(PixelPoint x, const CameraIntrinsics& k) {
    const NormalizedPoint w = normalize(x, k);
    const double n = std::hypot(w.u, w.v);
    if (n == 0.0) {
        throw error(errc::undefined_at_principal_point, "major axis direction undefined");
    }
    return std::acos(std::clamp(w.u / n, -1.0, 1.0));
}

double scaled_ratio(double a_over_b, double theta, double us, double vs) {
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    const double num = us * us * ct * ct + vs * vs * st * st;
    const double den = us * us * st * st + vs * vs * ct * ct;
    return a_over_b * std::sqrt(num / den);
}

double threshold(double s, double circle_radius_px) {
    return (s - 1.0) * circle_radius_px / (s + 1.0);
}

ThresholdContext adaptive_threshold(const CircleHypothesis& c, const CameraIntrinsics& k,
                                    double sphere_radius) {
    ThresholdContext ctx;
    const double f = (k.fu + k.fv) / 2.0;
    ctx.d = estimate_distance(c.radius, sphere_radius, f);
    ctx.alpha = compute_alpha(c.center, k);
    ctx.beta = compute_beta(sphere_radius, ctx.d);

    const NormalizedPoint w = normalize(c.center, k);
    double s;
    if (std::hypot(w.u, w.v) == 0.0) {
        // At the principal point the section is a circle in normalized
        // coordinates; its pixel image has axes along u and v.
        ctx.theta = 0.0;
        s = scaled_ratio(1.0, 0.0, k.us, k.vs);
    } else {
        ctx.theta = compute_theta(c.center, k);
        const double geometric = axis_ratio(ctx.alpha, ctx.beta);
        if (geometric > kMaxAxisRatio) {
            throw error(errc::cone_degenerate,
                        "predicted ratio beyond the circle approximation");
        }
        s = scaled_ratio(geometric, ctx.theta, k.us, k.vs);
    }
    // Anisotropic scaling can swap major and minor axis; the threshold only
    // cares about the ratio >= 1.
    ctx.s = std::max(s, 1.0 / s);
    ctx.t = threshold(ctx.s, c.radius) + kNoiseSlackPx;
    return ctx;
}

}  // namespace spherecal
