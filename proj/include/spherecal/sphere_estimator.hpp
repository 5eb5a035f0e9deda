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
#include <span>
#include <vector>

#include "spherecal/camera.hpp"
#include "spherecal/conic.hpp"
#include "spherecal/sphere_projection.hpp"

namespace spherecal {

/// Plane through a point p with unit normal n. Every silhouette tangent
/// plane also passes through the camera center, and the sphere center sits
/// at signed distance n^T (p - x0) = r behind it.
struct TangentPlane {
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    Eigen::Vector3d n = Eigen::Vector3d::UnitZ();
};

struct SphereEstimate {
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    double residual_rms = 0.0;  // pixels; NaN for the linear-only estimate
    enum class Method { linear, refined } method = Method::linear;
    bool converged = true;
};

/// Optional trace of the refinement, for diagnostics and tests.
struct LmTrace {
    std::vector<double> accepted_costs;
    int iterations = 0;
};

inline constexpr int kTangentPlaneSamples = 360;

/// Samples n_samples contour points of the ellipse (uniform parametric
/// angle) and builds the tangent plane at each: the plane spanned by the
/// back-projected contour ray and the in-plane contour tangent. Normals are
/// unit length and point away from the ellipse interior, so
/// n^T (p - x0) = +r for the true sphere. Throws NotAnEllipse.
std::vector<TangentPlane> tangent_planes(const Conic& normalized_conic, int n_samples);

/// Least-squares solution of the tangent-plane system: rows n_i^T, right
/// side n_i^T p_i - r. Normal equations with a symmetric 3x3 solve; falls
/// back to a complete orthogonal decomposition when the condition number
/// exceeds 1e6. Throws RankDeficient beyond 1e8 (or with fewer than 3
/// planes of full rank), TooFewPoints below 3 planes.
Eigen::Vector3d solve_linear(std::span<const TangentPlane> planes, double sphere_radius);

/// Residual vector of the image-space cost: the Sampson distance of every
/// detected pixel point to the silhouette conic of the candidate sphere,
/// mapped to pixel coordinates.
Eigen::VectorXd lm_residuals(const Eigen::Vector3d& center, double sphere_radius,
                             std::span<const PixelPoint> points, const CameraIntrinsics& k);

/// Analytic Jacobian of lm_residuals with respect to the center.
Eigen::MatrixXd lm_jacobian(const Eigen::Vector3d& center, double sphere_radius,
                            std::span<const PixelPoint> points, const CameraIntrinsics& k);

/// Levenberg-Marquardt refinement of the sphere center under the
/// image-space cost. Damping starts at 1e-3, x10 on rejection, /10 on
/// acceptance; stops on relative cost change < 1e-12, step norm < 1e-10 or
/// 100 iterations (then converged = false). Steps that would put the
/// center at z <= r are rejected. Accepted steps never increase the cost.
/// Throws DivergedBehindCamera when the initial center violates z > r,
/// TooFewPoints below 6 points.
SphereEstimate refine_lm(const Eigen::Vector3d& initial, double sphere_radius,
                         std::span<const PixelPoint> points, const CameraIntrinsics& k,
                         LmTrace* trace = nullptr);

/// Closed-form initial estimate: pixel ellipse -> normalized conic ->
/// tangent planes -> linear solve.
SphereEstimate estimate_sphere_linear(const EllipseGeom& pixel_ellipse,
                                      const CameraIntrinsics& k, double sphere_radius);

/// Full estimate: linear initialization followed by LM refinement against
/// the detected contour points.
SphereEstimate estimate_sphere(const EllipseGeom& pixel_ellipse, const CameraIntrinsics& k,
                               double sphere_radius, std::span<const PixelPoint> detected_points,
                               LmTrace* trace = nullptr);

}  // namespace spherecal
