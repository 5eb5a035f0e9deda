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

#include "spherecal/conic.hpp"
#include "spherecal/errors.hpp"

namespace spherecal {

/// Sphere in camera coordinates.
struct Sphere {
    Eigen::Vector3d center = Eigen::Vector3d(0.0, 0.0, 1.0);
    double radius = 1.0;
};

/// Raw silhouette conic coefficients in normalized image coordinates.
///
/// A ray z*(u, v, 1) grazes the sphere exactly when the quadratic
/// intersection equation has a double root; collecting the vanishing
/// discriminant in (u, v) gives
///   A = r^2 - y0^2 - z0^2      B = 2 x0 y0      C = r^2 - x0^2 - z0^2
///   D = 2 x0 z0                E = 2 y0 z0      F = r^2 - x0^2 - y0^2
/// No scale canonicalization is applied.
Eigen::Matrix<double, 6, 1> silhouette_coeffs(const Eigen::Vector3d& center, double radius);

/// Derivative of silhouette_coeffs with respect to the center.
Eigen::Matrix<double, 6, 3> silhouette_coeffs_jacobian(const Eigen::Vector3d& center,
                                                       double radius);

/// Silhouette of the sphere as a canonicalized conic in normalized image
/// coordinates. The result is always an ellipse for z0 > r. Throws
/// DegenerateSphere when the camera touches or is inside the z <= r slab.
Conic project_sphere(const Sphere& s);

}  // namespace spherecal
