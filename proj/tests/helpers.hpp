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

// Test-only oracles, kept independent of the library code paths they check.

#pragma once

#include <cmath>
#include <vector>

#include "spherecal/conic.hpp"
#include "spherecal/rng.hpp"
#include "spherecal/sphere_projection.hpp"

namespace testing_oracles {

constexpr double kPi = 3.14159265358979323846;

/// Coefficient vectors equal up to a nonzero scale factor.
inline bool conics_proportional(const spherecal::Conic& a, const spherecal::Conic& b,
                                double tol = 1e-9) {
    const auto ca = a.coeffs();
    const auto cb = b.coeffs();
    const double na = ca.norm(), nb = cb.norm();
    if (!(na > 0.0) || !(nb > 0.0)) return false;
    const Eigen::Matrix<double, 6, 1> ua = ca / na;
    Eigen::Matrix<double, 6, 1> ub = cb / nb;
    if (ua.dot(ub) < 0.0) ub = -ub;
    return (ua - ub).norm() <= tol;
}

struct OracleAxes {
    double cx, cy, a, b;
};

/// Semi-axes by brute force: the conic center comes from a hand-written
/// 2x2 Cramer solve, and along each direction e the contour radius is
/// sqrt(-Q(center) / (e^T M e)) because the gradient vanishes at the
/// center. Extremes over a dense angle sweep with ternary refinement.
inline OracleAxes sampled_axes(const spherecal::Conic& c) {
    const double det = c.A * c.C - 0.25 * c.B * c.B;
    const double cx = (-0.5 * c.D * c.C + 0.25 * c.E * c.B) / det;
    const double cy = (-0.5 * c.E * c.A + 0.25 * c.D * c.B) / det;
    const double q0 = c.A * cx * cx + c.B * cx * cy + c.C * cy * cy + c.D * cx + c.E * cy + c.F;

    auto rho = [&](double phi) {
        const double ex = std::cos(phi), ey = std::sin(phi);
        const double quad = c.A * ex * ex + c.B * ex * ey + c.C * ey * ey;
        return std::sqrt(-q0 / quad);
    };

    const int n = 4096;
    double best_max = -1.0, best_min = 1e300;
    double arg_max = 0.0, arg_min = 0.0;
    for (int i = 0; i < n; ++i) {
        const double phi = kPi * i / n;  // rho has period pi
        const double r = rho(phi);
        if (r > best_max) {
            best_max = r;
            arg_max = phi;
        }
        if (r < best_min) {
            best_min = r;
            arg_min = phi;
        }
    }
    auto refine = [&](double phi0, bool maximize) {
        double lo = phi0 - kPi / n, hi = phi0 + kPi / n;
        for (int it = 0; it < 200; ++it) {
            const double m1 = lo + (hi - lo) / 3.0;
            const double m2 = hi - (hi - lo) / 3.0;
            const bool keep_left = maximize ? rho(m1) > rho(m2) : rho(m1) < rho(m2);
            if (keep_left) hi = m2; else lo = m1;
        }
        return rho((lo + hi) / 2.0);
    };
    return {cx, cy, refine(arg_max, true), refine(arg_min, false)};
}

/// Independent cone-plane intersection: apex at the origin, axis at angle
/// `alpha` above the plane z = 1, half-angle `beta`. A point X lies on the
/// cone iff (X . axis)^2 = cos^2(beta) |X|^2; restricting to z = 1 gives an
/// implicit conic whose axes the sampling oracle measures.
inline double cone_section_ratio(double alpha, double beta) {
    const double ca = std::cos(alpha), sa = std::sin(alpha), cb = std::cos(beta);
    spherecal::Conic c;
    c.A = ca * ca - cb * cb;
    c.B = 0.0;
    c.C = -cb * cb;
    c.D = 2.0 * ca * sa;
    c.E = 0.0;
    c.F = sa * sa - cb * cb;
    const OracleAxes ax = sampled_axes(c);
    return ax.a / ax.b;
}

/// Random sphere with depth in [z_lo, z_hi] and angular offset up to
/// max_offax radians off the optical axis.
inline spherecal::Sphere random_sphere(spherecal::SplitMix64& rng, double radius, double z_lo,
                                       double z_hi, double max_offax) {
    spherecal::Sphere s;
    s.radius = radius;
    const double z = rng.next_range(z_lo, z_hi);
    const double off = rng.next_range(0.0, max_offax);
    const double az = rng.next_range(0.0, 2.0 * kPi);
    s.center = Eigen::Vector3d(z * std::tan(off) * std::cos(az),
                               z * std::tan(off) * std::sin(az), z);
    return s;
}

/// Exact points on a geometric ellipse, uniform in the parametric angle.
inline std::vector<spherecal::PixelPoint> ellipse_points(const spherecal::EllipseGeom& g, int n,
                                                         double phase = 0.0) {
    std::vector<spherecal::PixelPoint> pts;
    const double ca = std::cos(g.angle), sa = std::sin(g.angle);
    for (int i = 0; i < n; ++i) {
        const double t = phase + 2.0 * kPi * i / n;
        const double eu = g.a * std::cos(t), ev = g.b * std::sin(t);
        pts.push_back({g.cx + eu * ca - ev * sa, g.cy + eu * sa + ev * ca});
    }
    return pts;
}

}  // namespace testing_oracles
