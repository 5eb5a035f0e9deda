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

#include "spherecal/edge_map.hpp"

#include <algorithm>
#include <cmath>

namespace spherecal {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double GradientField::mag_bilinear(double u, double v) const {
    const int iu = static_cast<int>(std::floor(u));
    const int iv = static_cast<int>(std::floor(v));
    const int u1 = std::min(iu + 1, width - 1);
    const int v1 = std::min(iv + 1, height - 1);
    const double fu = u - iu;
    const double fv = v - iv;
    const double m00 = mag_at(iu, iv);
    const double m10 = mag_at(u1, iv);
    const double m01 = mag_at(iu, v1);
    const double m11 = mag_at(u1, v1);
    return m00 * (1 - fu) * (1 - fv) + m10 * fu * (1 - fv) + m01 * (1 - fu) * fv +
           m11 * fu * fv;
}

GradientField sobel(const GrayImage& img) {
    if (img.width < 3 || img.height < 3) {
        throw error(errc::image_too_small, "Sobel needs at least 3x3");
    }
    GradientField f;
    f.width = img.width;
    f.height = img.height;
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    f.gx.assign(n, 0);
    f.gy.assign(n, 0);
    f.magnitude.assign(n, 0.0);
    f.direction.assign(n, 0.0);

    for (int v = 1; v < img.height - 1; ++v) {
        for (int u = 1; u < img.width - 1; ++u) {
            const int tl = img.at(u - 1, v - 1), tc = img.at(u, v - 1), tr = img.at(u + 1, v - 1);
            const int ml = img.at(u - 1, v), mr = img.at(u + 1, v);
            const int bl = img.at(u - 1, v + 1), bc = img.at(u, v + 1), br = img.at(u + 1, v + 1);
            const int gx = (tr + 2 * mr + br) - (tl + 2 * ml + bl);
            const int gy = (bl + 2 * bc + br) - (tl + 2 * tc + tr);
            const std::size_t idx = static_cast<std::size_t>(v) * img.width + u;
            f.gx[idx] = gx;
            f.gy[idx] = gy;
            f.magnitude[idx] = std::sqrt(static_cast<double>(gx) * gx + static_cast<double>(gy) * gy);
            double dir = std::atan2(static_cast<double>(gy), static_cast<double>(gx));
            if (dir >= kPi) dir = -kPi;
            f.direction[idx] = dir;
        }
    }
    return f;
}

StrongPoints extract_strong_points(const GradientField& field) {
    std::vector<double> nonzero;
    nonzero.reserve(field.magnitude.size() / 4);
    for (double m : field.magnitude) {
        if (m > 0.0) nonzero.push_back(m);
    }
    if (nonzero.empty()) {
        throw error(errc::no_edges, "image has no gradient at all");
    }
    const std::size_t idx =
        static_cast<std::size_t>(kMagnitudePercentile * static_cast<double>(nonzero.size() - 1));
    std::nth_element(nonzero.begin(), nonzero.begin() + static_cast<std::ptrdiff_t>(idx),
                     nonzero.end());
    const double tau = std::max(kMagnitudeFloor, nonzero[idx]);

    // One survivor per 3x3 grid cell: highest magnitude, ties to the
    // smallest (v, u).
    const int cells_x = (field.width + kSparsifyWindow - 1) / kSparsifyWindow;
    const int cells_y = (field.height + kSparsifyWindow - 1) / kSparsifyWindow;
    std::vector<std::int32_t> best(static_cast<std::size_t>(cells_x) * cells_y, -1);

    for (int v = 0; v < field.height; ++v) {
        for (int u = 0; u < field.width; ++u) {
            const std::size_t i = static_cast<std::size_t>(v) * field.width + u;
            if (field.magnitude[i] < tau) continue;
            const std::size_t cell =
                static_cast<std::size_t>(v / kSparsifyWindow) * cells_x + u / kSparsifyWindow;
            const std::int32_t cur = best[cell];
            if (cur < 0 || field.magnitude[i] > field.magnitude[static_cast<std::size_t>(cur)]) {
                best[cell] = static_cast<std::int32_t>(i);
            }
        }
    }

    StrongPoints out;
    out.tau = tau;
    for (std::int32_t i : best) {
        if (i < 0) continue;
        const std::size_t idx2 = static_cast<std::size_t>(i);
        EdgePoint p;
        p.u = static_cast<int>(idx2 % field.width);
        p.v = static_cast<int>(idx2 / field.width);
        p.magnitude = field.magnitude[idx2];
        p.direction = field.direction[idx2];
        out.points.push_back(p);
    }
    std::sort(out.points.begin(), out.points.end(), [](const EdgePoint& a, const EdgePoint& b) {
        return a.v != b.v ? a.v < b.v : a.u < b.u;
    });
    if (out.points.empty()) {
        throw error(errc::no_edges, "no edge magnitude reached the threshold");
    }
    return out;
}

}  // namespace spherecal
