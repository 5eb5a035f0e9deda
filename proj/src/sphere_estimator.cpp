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

#include "spherecal/sphere_estimator.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace spherecal {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::vector<TangentPlane> tangent_planes(const Conic& normalized_conic, int n_samples) {
    const EllipseGeom g = conic_to_geom(normalized_conic);  // throws NotAnEllipse
    const Eigen::Matrix3d t = normalized_conic.matrix();
    const double ca = std::cos(g.angle);
    const double sa = std::sin(g.angle);
    const Eigen::Vector3d interior(g.cx, g.cy, 1.0);

    std::vector<TangentPlane> planes;
    planes.reserve(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) {
        const double phi = 2.0 * kPi * i / n_samples;
        const double eu = g.a * std::cos(phi);
        const double ev = g.b * std::sin(phi);
        const Eigen::Vector3d q(g.cx + eu * ca - ev * sa, g.cy + eu * sa + ev * ca, 1.0);

        // The tangent line T q, read as a 3-vector, is normal to the plane
        // spanned by the contour ray q and the in-plane tangent direction.
        Eigen::Vector3d n = t * q;
        if (n.dot(interior) > 0.0) n = -n;
        n.normalize();

        planes.push_back({q, n});
    }
    return planes;
}

Eigen::Vector3d solve_linear(std::span<const TangentPlane> planes, double sphere_radius) {
    const auto m = static_cast<Eigen::Index>(planes.size());
    if (m < 3) {
        throw error(errc::too_few_points, "need at least 3 tangent planes");
    }
    Eigen::MatrixXd normals(m, 3);
    Eigen::VectorXd rhs(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        normals.row(i) = planes[static_cast<std::size_t>(i)].n.transpose();
        rhs(i) = planes[static_cast<std::size_t>(i)].n.dot(planes[static_cast<std::size_t>(i)].p) -
                 sphere_radius;
    }

    const Eigen::Matrix3d ntn = normals.transpose() * normals;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(ntn);
    const double lo = eig.eigenvalues()(0);
    const double hi = eig.eigenvalues()(2);
    if (!(lo > 0.0) || std::sqrt(hi / lo) > 1e8) {
        throw error(errc::rank_deficient, "tangent-plane normals do not span 3D");
    }
    if (std::sqrt(hi / lo) > 1e6) {
        return normals.completeOrthogonalDecomposition().solve(rhs);
    }
    return ntn.ldlt().solve(normals.transpose() * rhs);
}

namespace {

// Pixel-space silhouette coefficients (raw, no canonicalization: the
// Sampson residual is scale invariant, and canonicalizing would make the
// coefficients non-smooth in the center).
Eigen::Matrix<double, 6, 1> pixel_silhouette(const Eigen::Vector3d& center, double r,
                                             const AxisFrame& frame) {
    const Conic norm = Conic::from_coeffs(silhouette_coeffs(center, r));
    return push_conic(norm, frame).coeffs();
}

struct ResidualWorkspace {
    Eigen::VectorXd residuals;
    Eigen::MatrixXd jacobian;  // empty unless requested
};

ResidualWorkspace eval_residuals(const Eigen::Vector3d& center, double r,
                                 std::span<const PixelPoint> points, const AxisFrame& frame,
                                 bool want_jacobian) {
    const auto m = static_cast<Eigen::Index>(points.size());
    ResidualWorkspace w;
    w.residuals.resize(m);
    const Eigen::Matrix<double, 6, 1> c = pixel_silhouette(center, r, frame);

    Eigen::Matrix<double, 6, 3> dc_dcenter;
    if (want_jacobian) {
        w.jacobian.resize(m, 3);
        const Eigen::Matrix<double, 6, 3> jn = silhouette_coeffs_jacobian(center, r);
        // push_conic is linear in the coefficients, so columns map through it.
        for (int k = 0; k < 3; ++k) {
            const Conic col = Conic::from_coeffs(jn.col(k));
            dc_dcenter.col(k) = push_conic(col, frame).coeffs();
        }
    }

    for (Eigen::Index i = 0; i < m; ++i) {
        const double x = points[static_cast<std::size_t>(i)].u;
        const double y = points[static_cast<std::size_t>(i)].v;
        const Eigen::Matrix<double, 6, 1> z{x * x, x * y, y * y, x, y, 1.0};
        const double q = z.dot(c);
        const double qx = 2.0 * c(0) * x + c(1) * y + c(3);
        const double qy = c(1) * x + 2.0 * c(2) * y + c(4);
        const double g = std::max(std::hypot(qx, qy), 1e-300);
        w.residuals(i) = q / g;
        if (want_jacobian) {
            // d(q/g)/dc = z/g - q (qx dqx + qy dqy) / g^3
            const Eigen::Matrix<double, 6, 1> dqx{2.0 * x, y, 0.0, 1.0, 0.0, 0.0};
            const Eigen::Matrix<double, 6, 1> dqy{0.0, x, 2.0 * y, 0.0, 1.0, 0.0};
            const Eigen::Matrix<double, 6, 1> dres =
                z / g - q * (qx * dqx + qy * dqy) / (g * g * g);
            w.jacobian.row(i) = (dres.transpose() * dc_dcenter);
        }
    }
    return w;
}

}  // namespace

Eigen::VectorXd lm_residuals(const Eigen::Vector3d& center, double sphere_radius,
                             std::span<const PixelPoint> points, const CameraIntrinsics& k) {
    return eval_residuals(center, sphere_radius, points, intrinsics_frame(k), false).residuals;
}

Eigen::MatrixXd lm_jacobian(const Eigen::Vector3d& center, double sphere_radius,
                            std::span<const PixelPoint> points, const CameraIntrinsics& k) {
    return eval_residuals(center, sphere_radius, points, intrinsics_frame(k), true).jacobian;
}

SphereEstimate refine_lm(const Eigen::Vector3d& initial, double sphere_radius,
                         std::span<const PixelPoint> points, const CameraIntrinsics& k,
                         LmTrace* trace) {
    if (!(initial.z() > sphere_radius)) {
        throw error(errc::diverged_behind_camera, "initial center must satisfy z > r");
    }
    if (points.size() < 6) {
        throw error(errc::too_few_points, "refinement needs at least 6 contour points");
    }
    const AxisFrame frame = intrinsics_frame(k);

    Eigen::Vector3d center = initial;
    ResidualWorkspace w = eval_residuals(center, sphere_radius, points, frame, true);
    double cost = w.residuals.squaredNorm();
    if (trace) trace->accepted_costs.push_back(cost);

    double lambda = 1e-3;
    bool converged = false;
    int iter = 0;
    for (; iter < 100; ++iter) {
        const Eigen::Matrix3d jtj = w.jacobian.transpose() * w.jacobian;
        const Eigen::Vector3d jtr = w.jacobian.transpose() * w.residuals;

        bool accepted = false;
        while (lambda <= 1e14) {
            Eigen::Matrix3d damped = jtj;
            for (int d = 0; d < 3; ++d) {
                damped(d, d) += lambda * std::max(jtj(d, d), 1e-30);
            }
            const Eigen::Vector3d step = damped.ldlt().solve(-jtr);
            const Eigen::Vector3d trial = center + step;
            if (trial.z() > sphere_radius) {
                const Eigen::VectorXd trial_res =
                    eval_residuals(trial, sphere_radius, points, frame, false).residuals;
                const double trial_cost = trial_res.squaredNorm();
                if (trial_cost <= cost) {
                    const double drop = cost - trial_cost;
                    center = trial;
                    cost = trial_cost;
                    lambda = std::max(lambda / 10.0, 1e-12);
                    accepted = true;
                    if (trace) trace->accepted_costs.push_back(cost);
                    if (drop <= 1e-12 * std::max(cost, 1e-300) || step.norm() < 1e-10) {
                        converged = true;
                    }
                    break;
                }
            }
            lambda *= 10.0;
        }
        if (!accepted) {
            // No improving step exists at any damping: stationary point.
            converged = true;
            break;
        }
        if (converged) break;
        w = eval_residuals(center, sphere_radius, points, frame, true);
    }
    if (trace) trace->iterations = iter;

    SphereEstimate est;
    est.center = center;
    est.residual_rms = std::sqrt(cost / static_cast<double>(points.size()));
    est.method = SphereEstimate::Method::refined;
    est.converged = converged;
    return est;
}

SphereEstimate estimate_sphere_linear(const EllipseGeom& pixel_ellipse,
                                      const CameraIntrinsics& k, double sphere_radius) {
    const Conic pixel_conic = geom_to_conic(pixel_ellipse);
    const Conic norm = pull_conic(pixel_conic, intrinsics_frame(k)).normalized();
    const std::vector<TangentPlane> planes = tangent_planes(norm, kTangentPlaneSamples);
    SphereEstimate est;
    est.center = solve_linear(planes, sphere_radius);
    est.residual_rms = std::numeric_limits<double>::quiet_NaN();
    est.method = SphereEstimate::Method::linear;
    return est;
}

SphereEstimate estimate_sphere(const EllipseGeom& pixel_ellipse, const CameraIntrinsics& k,
                               double sphere_radius, std::span<const PixelPoint> detected_points,
                               LmTrace* trace) {
    const SphereEstimate linear = estimate_sphere_linear(pixel_ellipse, k, sphere_radius);
    return refine_lm(linear.center, sphere_radius, detected_points, k, trace);
}

}  // namespace spherecal
