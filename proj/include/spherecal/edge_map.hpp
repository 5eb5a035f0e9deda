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

#include <vector>

#include "spherecal/image.hpp"

namespace spherecal {

/// Per-pixel Sobel gradients. gx/gy are exact integer responses of the
/// standard 3x3 kernels; the one-pixel border is zero.
struct GradientField {
    int width = 0;
    int height = 0;
    std::vector<int> gx;
    std::vector<int> gy;
    std::vector<double> magnitude;  // sqrt(gx^2 + gy^2)
    std::vector<double> direction;  // atan2(gy, gx), in [-pi, pi)

    double mag_at(int u, int v) const {
        return magnitude[static_cast<std::size_t>(v) * width + u];
    }

    /// Bilinear magnitude sample; (u, v) must satisfy 0 <= u <= width-1,
    /// 0 <= v <= height-1.
    double mag_bilinear(double u, double v) const;
};

/// Strong edge sample on the integer grid. `direction` is the gradient
/// (contour-normal) direction.
struct EdgePoint {
    int u = 0;
    int v = 0;
    double magnitude = 0.0;
    double direction = 0.0;
};

struct StrongPoints {
    std::vector<EdgePoint> points;  // sorted by (v, u)
    double tau = 0.0;               // magnitude threshold actually applied
};

/// 3x3 Sobel over the whole image. Throws ImageTooSmall below 3x3.
GradientField sobel(const GrayImage& img);

/// Thresholds the gradient magnitudes adaptively (90th percentile of the
/// nonzero magnitudes, floored at 40) and keeps only the strongest point in
/// every 3x3 window cell. Deterministic: output sorted by (v, u). Throws
/// NoEdges when nothing survives.
StrongPoints extract_strong_points(const GradientField& field);

inline constexpr int kSparsifyWindow = 3;
inline constexpr double kMagnitudeFloor = 40.0;
inline constexpr double kMagnitudePercentile = 0.90;

}  // namespace spherecal
