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

#include "spherecal/sphere_projection.hpp"

namespace spherecal {

Eigen::Matrix<double, 6, 1> silhouette_coeffs(const Eigen::Vector3d& c, double r) {
    const double x0 = c.x(), y0 = c.y(), z0 = c.z();
    Eigen::Matrix<double, 6, 1> k;
    k << r * r - y0 * y0 - z0 * z0,
         2.0 * x0 * y0,
         r * r - x0 * x0 - z0 * z0,
         2.0 * x0 * z0,
         2.0 * y0 * z0,
         r * r - x0 * x0 - y0 * y0;
    return k;
}

Eigen::Matrix<double, 6, 3> silhouette_coeffs_jacobian(const Eigen::Vector3d& c, double) {
    const double x0 = c.x(), y0 = c.y(), z0 = c.z();
    Eigen::Matrix<double, 6, 3> j;
    j <<       0.0, -2.0 * y0, -2.0 * z0,
         2.0 * y0,  2.0 * x0,       0.0,
        -2.0 * x0,       0.0, -2.0 * z0,
         2.0 * z0,       0.0,  2.0 * x0,
               0.0,  2.0 * z0,  2.0 * y0,
        -2.0 * x0, -2.0 * y0,       0.0;
    return j;
}

Conic project_sphere(const Sphere& s) {
    if (!(s.radius > 0.0)) {
        throw error(errc::degenerate_sphere, "radius must be positive");
    }
    if (!(s.center.z() > s.radius)) {
        throw error(errc::degenerate_sphere, "sphere must lie strictly in front of the camera");
    }
    return Conic::from_coeffs(silhouette_coeffs(s.center, s.radius)).normalized();
}

}  // namespace spherecal
