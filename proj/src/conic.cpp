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

#include "spherecal/conic.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace spherecal {

namespace {

constexpr double kPi = 3.14159265358979323846;

double wrap_half_pi(double angle) {
    while (angle < -kPi / 2.0) angle += kPi;
    while (angle >= kPi / 2.0) angle -= kPi;
    return angle;
}

}  // namespace

Conic Conic::normalized() const {
    const Eigen::Matrix<double, 6, 1> c = coeffs();
    const double n = c.norm();
    if (!(n > 0.0)) {
        throw error(errc::degenerate_input, "all conic coefficients are zero");
    }
    double s = 1.0 / n;
    // Sign convention: F >= 0 when nonzero, otherwise the first nonzero
    // coefficient in A..E order becomes positive.
    double lead = F;
    if (lead == 0.0) {
        for (double v : {A, B, C, D, E}) {
            if (v != 0.0) {
                lead = v;
                break;
            }
        }
    }
    if (lead < 0.0) s = -s;
    return {A * s, B * s, C * s, D * s, E * s, F * s};
}

EllipseGeom conic_to_geom(const Conic& c) {
    const double disc = c.B * c.B - 4.0 * c.A * c.C;
    if (!(disc < 0.0)) {
        throw error(errc::not_an_ellipse, "quadratic part is not elliptic");
    }
    if (c.matrix().determinant() == 0.0) {
        throw error(errc::not_an_ellipse, "degenerate conic (det T = 0)");
    }

    // Center solves grad Q = 0.
    Eigen::Matrix2d m;
    m << c.A, c.B / 2.0, c.B / 2.0, c.C;
    const Eigen::Vector2d center = m.ldlt().solve(Eigen::Vector2d(-c.D / 2.0, -c.E / 2.0));

    // Value at the center gives the centered form  xi^T m xi = -Fc.
    const double fc = c.evaluate(center.x(), center.y());

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(m);
    const Eigen::Vector2d lambda = eig.eigenvalues();
    const double s0 = -fc / lambda(0);
    const double s1 = -fc / lambda(1);
    if (!(s0 > 0.0) || !(s1 > 0.0)) {
        throw error(errc::not_an_ellipse, "conic has no real points");
    }

    EllipseGeom g;
    g.cx = center.x();
    g.cy = center.y();
    int major = s0 >= s1 ? 0 : 1;
    g.a = std::sqrt(s0 >= s1 ? s0 : s1);
    g.b = std::sqrt(s0 >= s1 ? s1 : s0);

    // Equal eigenvalues make the axis direction arbitrary; report 0.
    if (std::abs(lambda(1) - lambda(0)) <=
        1e-14 * (std::abs(lambda(0)) + std::abs(lambda(1)))) {
        g.angle = 0.0;
    } else {
        const Eigen::Vector2d axis = eig.eigenvectors().col(major);
        g.angle = wrap_half_pi(std::atan2(axis.y(), axis.x()));
    }
    return g;
}

Conic geom_to_conic(const EllipseGeom& e) {
    const double co = std::cos(e.angle);
    const double si = std::sin(e.angle);
    const double ia = 1.0 / (e.a * e.a);
    const double ib = 1.0 / (e.b * e.b);

    Conic c;
    c.A = co * co * ia + si * si * ib;
    c.B = 2.0 * co * si * (ia - ib);
    c.C = si * si * ia + co * co * ib;
    c.D = -(2.0 * c.A * e.cx + c.B * e.cy);
    c.E = -(c.B * e.cx + 2.0 * c.C * e.cy);
    c.F = c.A * e.cx * e.cx + c.B * e.cx * e.cy + c.C * e.cy * e.cy - 1.0;
    return c.normalized();
}

Eigen::Vector3d tangent_line(const Conic& c, NormalizedPoint p) {
    const Eigen::Matrix3d t = c.matrix();
    const Eigen::Vector3d hp(p.u, p.v, 1.0);
    const double residual = std::abs(hp.dot(t * hp));
    const double scale = t.norm() * hp.squaredNorm();
    if (residual > 1e-8 * scale) {
        throw error(errc::point_not_on_conic, "residual exceeds tolerance");
    }
    return t * hp;
}

// With q = push_conic(p, f):  q(fx*x + cx, fy*y + cy) = p(x, y), so q
// describes in original coordinates the curve p describes in frame
// coordinates.
Conic push_conic(const Conic& in_frame, const AxisFrame& f) {
    Conic out;
    out.A = in_frame.A / (f.fx * f.fx);
    out.B = in_frame.B / (f.fx * f.fy);
    out.C = in_frame.C / (f.fy * f.fy);
    out.D = (in_frame.D - 2.0 * out.A * f.fx * f.cx - out.B * f.fx * f.cy) / f.fx;
    out.E = (in_frame.E - 2.0 * out.C * f.fy * f.cy - out.B * f.fy * f.cx) / f.fy;
    out.F = in_frame.F - out.A * f.cx * f.cx - out.B * f.cx * f.cy - out.C * f.cy * f.cy -
            out.D * f.cx - out.E * f.cy;
    return out;
}

// Forward coefficient substitution: out(x, y) = in(fx*x + cx, fy*y + cy).
Conic pull_conic(const Conic& in_original, const AxisFrame& f) {
    const double a = in_original.A, b = in_original.B, c = in_original.C;
    const double d = in_original.D, e = in_original.E, ff = in_original.F;
    Conic out;
    out.A = a * f.fx * f.fx;
    out.B = b * f.fx * f.fy;
    out.C = c * f.fy * f.fy;
    out.D = 2.0 * a * f.fx * f.cx + b * f.fx * f.cy + d * f.fx;
    out.E = b * f.fy * f.cx + 2.0 * c * f.fy * f.cy + e * f.fy;
    out.F = a * f.cx * f.cx + b * f.cx * f.cy + c * f.cy * f.cy + d * f.cx + e * f.cy + ff;
    return out;
}

double sampson_signed(const Conic& c, double x, double y) {
    const double q = c.evaluate(x, y);
    const double gx = 2.0 * c.A * x + c.B * y + c.D;
    const double gy = c.B * x + 2.0 * c.C * y + c.E;
    const double g = std::hypot(gx, gy);
    return q / std::max(g, 1e-300);
}

double sampson_distance(const Conic& c, double x, double y) {
    return std::abs(sampson_signed(c, x, y));
}

}  // namespace spherecal
