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

#include <Eigen/Core>

#include "spherecal/camera.hpp"
#include "spherecal/errors.hpp"

namespace spherecal {

/// Implicit conic A x^2 + B xy + C y^2 + D x + E y + F = 0.
///
/// The coefficient vector is only defined up to a nonzero scale. Stored
/// conics are canonicalized with `normalized()`: unit Euclidean norm and
/// F >= 0 (falling back to the first nonzero coefficient when F == 0), so
/// two conics describing the same curve compare equal.
struct Conic {
    double A = 0.0, B = 0.0, C = 0.0, D = 0.0, E = 0.0, F = 0.0;

    /// Symmetric matrix form T: [x y 1] T [x y 1]^T = 0.
    Eigen::Matrix3d matrix() const {
        Eigen::Matrix3d t;
        t << A, B / 2.0, D / 2.0,
             B / 2.0, C, E / 2.0,
             D / 2.0, E / 2.0, F;
        return t;
    }

    double evaluate(double x, double y) const {
        return A * x * x + B * x * y + C * y * y + D * x + E * y + F;
    }

    Eigen::Matrix<double, 6, 1> coeffs() const {
        Eigen::Matrix<double, 6, 1> c;
        c << A, B, C, D, E, F;
        return c;
    }

    static Conic from_coeffs(const Eigen::Matrix<double, 6, 1>& c) {
        return {c[0], c[1], c[2], c[3], c[4], c[5]};
    }

    /// Canonical representative under the scale ambiguity.
    Conic normalized() const;

    /// True when the quadratic part is elliptic (B^2 - 4AC < 0); sign and
    /// scale independent.
    bool is_elliptic() const { return B * B - 4.0 * A * C < 0.0; }
};

/// Geometric ellipse parameters: center, semi-major a >= semi-minor b > 0,
/// major-axis angle against the +x axis in [-pi/2, pi/2).
struct EllipseGeom {
    double cx = 0.0;
    double cy = 0.0;
    double a = 1.0;
    double b = 1.0;
    double angle = 0.0;
};

/// Decomposes a real, non-degenerate ellipse. Throws NotAnEllipse when the
/// conic is not elliptic, is degenerate, or has no real points.
EllipseGeom conic_to_geom(const Conic& c);

/// Inverse of conic_to_geom up to conic scale.
Conic geom_to_conic(const EllipseGeom& e);

/// Tangent line of the conic at an incident point, as a homogeneous
/// 3-vector l = T p. Throws PointNotOnConic when the residual |p^T T p|
/// exceeds 1e-8 relative to ||T|| ||p||^2.
Eigen::Vector3d tangent_line(const Conic& c, NormalizedPoint p);

/// Axis-aligned affine change of coordinates: original = (fx*x + cx, fy*y + cy)
/// where (x, y) are frame coordinates. Models both the data normalization
/// used by the direct ellipse fit and the pixel <-> normalized-image map.
struct AxisFrame {
    double fx = 1.0;
    double fy = 1.0;
    double cx = 0.0;
    double cy = 0.0;
};

inline AxisFrame intrinsics_frame(const CameraIntrinsics& k) {
    return {k.fu, k.fv, k.u0, k.v0};
}

/// Rewrites a conic given in frame coordinates into original coordinates.
/// Linear in the coefficients; does not re-canonicalize.
Conic push_conic(const Conic& in_frame, const AxisFrame& f);

/// Rewrites a conic given in original coordinates into frame coordinates.
Conic pull_conic(const Conic& in_original, const AxisFrame& f);

/// First-order (Sampson) approximation of the geometric distance from a
/// point to the conic: |Q(p)| / ||grad Q(p)||. Scale invariant.
double sampson_distance(const Conic& c, double x, double y);

/// Signed variant: positive on one side of the curve, negative on the
/// other. The sign convention follows the stored coefficient signs.
double sampson_signed(const Conic& c, double x, double y);

}  // namespace spherecal
