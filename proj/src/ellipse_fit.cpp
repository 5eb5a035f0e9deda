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

#include "spherecal/ellipse_fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>

#include "spherecal/rng.hpp"

namespace spherecal {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::vector<RadialProfilePoint> collect_radial_points(const GradientField& field,
                                                      const CircleHypothesis& circle,
                                                      double tau) {
    const double half = radial_half_width(circle.radius);
    const double lo = std::max(0.0, circle.radius - half);
    const double hi = circle.radius + half;

    std::vector<RadialProfilePoint> out;
    int rays_with_sample = 0;
    for (int k = 0; k < kRadialRays; ++k) {
        const double phi = 2.0 * kPi * k / kRadialRays;
        const double cphi = std::cos(phi);
        const double sphi = std::sin(phi);
        double best_mag = tau;  // strict: only samples above tau count
        double best_u = 0.0, best_v = 0.0;
        bool found = false;
        for (double rho = lo; rho <= hi; rho += kRadialStepPx) {
            const double u = circle.center.u + rho * cphi;
            const double v = circle.center.v + rho * sphi;
            if (u < 0.0 || v < 0.0 || u > field.width - 1 || v > field.height - 1) continue;
            const double m = field.mag_bilinear(u, v);
            if (m > best_mag) {
                best_mag = m;
                best_u = u;
                best_v = v;
                found = true;
            }
        }
        if (found) {
            out.push_back({{best_u, best_v}, best_mag});
            ++rays_with_sample;
        }
    }
    if (rays_with_sample < 8) {
        throw error(errc::too_few_profile_points,
                    "only " + std::to_string(rays_with_sample) + " rays produced a sample");
    }
    return out;
}

Conic fit_ellipse_direct(std::span<const PixelPoint> pts) {
    const std::size_t n = pts.size();
    if (n < 5) {
        throw error(errc::degenerate_input, "ellipse fit needs at least 5 points");
    }

    // Center and scale so typical coordinates are O(1); the result is
    // mapped back exactly afterwards.
    double mx = 0.0, my = 0.0;
    for (const PixelPoint& p : pts) {
        mx += p.u;
        my += p.v;
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double rms = 0.0;
    for (const PixelPoint& p : pts) {
        const double du = p.u - mx, dv = p.v - my;
        rms += du * du + dv * dv;
    }
    rms = std::sqrt(rms / static_cast<double>(n));
    if (!(rms > 1e-12)) {
        throw error(errc::degenerate_input, "points are coincident");
    }
    const double scale = std::sqrt(2.0) / rms;
    const AxisFrame frame{1.0 / scale, 1.0 / scale, mx, my};

    // Halir-Flusser block form: split the design matrix into the quadratic
    // part D1 = [x^2 xy y^2] and the linear part D2 = [x y 1].
    Eigen::Matrix3d s1 = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d s2 = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d s3 = Eigen::Matrix3d::Zero();
    for (const PixelPoint& p : pts) {
        const double x = (p.u - mx) * scale;
        const double y = (p.v - my) * scale;
        Eigen::Vector3d d1(x * x, x * y, y * y);
        Eigen::Vector3d d2(x, y, 1.0);
        s1 += d1 * d1.transpose();
        s2 += d1 * d2.transpose();
        s3 += d2 * d2.transpose();
    }

    Eigen::FullPivLU<Eigen::Matrix3d> lu(s3);
    if (!lu.isInvertible()) {
        throw error(errc::degenerate_input, "points are collinear or otherwise degenerate");
    }
    const Eigen::Matrix3d t = -lu.solve(s2.transpose());
    const Eigen::Matrix3d m2 = s1 + s2 * t;

    // Premultiplied by C1^-1 for constraint 4AC - B^2 = 1.
    Eigen::Matrix3d reduced;
    reduced.row(0) = m2.row(2) / 2.0;
    reduced.row(1) = -m2.row(1);
    reduced.row(2) = m2.row(0) / 2.0;

    Eigen::EigenSolver<Eigen::Matrix3d> eig(reduced);
    if (eig.info() != Eigen::Success) {
        throw error(errc::no_ellipse_solution, "eigensolver failed");
    }

    // Exactly one eigenvector satisfies the elliptic constraint on
    // non-degenerate data; pick the best-conditioned one.
    int pick = -1;
    double pick_value = 0.0;
    for (int i = 0; i < 3; ++i) {
        const Eigen::Vector3cd col = eig.eigenvectors().col(i);
        if (col.imag().norm() > 1e-9 * col.norm()) continue;
        const Eigen::Vector3d a1 = col.real();
        const double cond = 4.0 * a1(0) * a1(2) - a1(1) * a1(1);
        const double rel = cond / a1.squaredNorm();
        if (rel > pick_value) {
            pick_value = rel;
            pick = i;
        }
    }
    if (pick < 0) {
        throw error(errc::no_ellipse_solution, "no elliptic solution for this point set");
    }

    const Eigen::Vector3d a1 = eig.eigenvectors().col(pick).real();
    const Eigen::Vector3d a2 = t * a1;
    Conic scaled{a1(0), a1(1), a1(2), a2(0), a2(1), a2(2)};
    const Conic fitted = push_conic(scaled, frame).normalized();
    if (!fitted.is_elliptic()) {
        throw error(errc::no_ellipse_solution, "fit degenerated to a non-ellipse");
    }
    return fitted;
}

std::vector<std::uint32_t> ellipse_inliers(std::span<const RadialProfilePoint> points,
                                           const Conic& c, double tol) {
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (sampson_distance(c, points[i].position.u, points[i].position.v) <= tol) {
            out.push_back(static_cast<std::uint32_t>(i));
        }
    }
    return out;
}

EllipseCandidate ransac_ellipse(const std::vector<RadialProfilePoint>& points, double inlier_tol,
                                const RansacConfig& cfg) {
    const std::size_t n = points.size();
    if (n < 5) {
        throw error(errc::too_few_points, "ellipse RANSAC needs at least 5 points");
    }

    std::int64_t best_score = -1;
    Conic best_conic;
    std::array<PixelPoint, 5> sample;

    for (std::uint64_t iter = 0; iter < cfg.iterations; ++iter) {
        SplitMix64 rng(cfg.rng_seed ^ iter);
        std::array<std::uint64_t, 5> idx{};
        for (int j = 0; j < 5; ++j) {
            std::uint64_t candidate = rng.next_below(n);
            bool fresh = false;
            while (!fresh) {
                fresh = true;
                for (int q = 0; q < j; ++q) {
                    if (idx[q] == candidate) {
                        candidate = rng.next_below(n);
                        fresh = false;
                        break;
                    }
                }
            }
            idx[j] = candidate;
            sample[j] = points[candidate].position;
        }

        Conic c;
        try {
            c = fit_ellipse_direct(std::span<const PixelPoint>(sample.data(), 5));
        } catch (const error&) {
            continue;
        }
        std::int64_t score = 0;
        for (const RadialProfilePoint& p : points) {
            if (sampson_distance(c, p.position.u, p.position.v) <= inlier_tol) ++score;
        }
        if (score > best_score) {
            best_score = score;
            best_conic = c;
        }
    }

    if (best_score < 8) {
        throw error(errc::no_consensus,
                    "best support " + std::to_string(std::max<std::int64_t>(best_score, 0)));
    }

    // Refit on the consensus set, then re-verify support against the refit
    // curve so the reported inliers are consistent with the returned conic.
    std::vector<std::uint32_t> consensus = ellipse_inliers(points, best_conic, inlier_tol);
    std::vector<PixelPoint> consensus_pts;
    consensus_pts.reserve(consensus.size());
    for (std::uint32_t i : consensus) consensus_pts.push_back(points[i].position);
    Conic refined = best_conic;
    try {
        refined = fit_ellipse_direct(consensus_pts);
    } catch (const error&) {
        // keep the hypothesis conic
    }

    EllipseCandidate cand;
    cand.conic = refined;
    cand.geom = conic_to_geom(refined);
    cand.inliers = ellipse_inliers(points, refined, inlier_tol);
    cand.support = static_cast<int>(cand.inliers.size());
    if (cand.support < 8) {
        throw error(errc::no_consensus, "consensus collapsed after refit");
    }
    return cand;
}

namespace {

double angle_diff_mod_pi(double a, double b) {
    double d = std::fmod(std::abs(a - b), kPi);
    return std::min(d, kPi - d);
}

bool similar(const EllipseCandidate& lhs, const EllipseCandidate& rhs) {
    const double mean_lhs = (lhs.geom.a + lhs.geom.b) / 2.0;
    const double mean_rhs = (rhs.geom.a + rhs.geom.b) / 2.0;
    const double cdist = std::hypot(lhs.geom.cx - rhs.geom.cx, lhs.geom.cy - rhs.geom.cy);
    if (cdist >= 0.1 * std::min(mean_lhs, mean_rhs)) return false;
    if (std::abs(lhs.geom.a - rhs.geom.a) >= 0.1 * std::min(lhs.geom.a, rhs.geom.a)) return false;
    if (std::abs(lhs.geom.b - rhs.geom.b) >= 0.1 * std::min(lhs.geom.b, rhs.geom.b)) return false;
    // Near-circular members have no meaningful orientation.
    const bool lhs_round = lhs.geom.a / lhs.geom.b < 1.05;
    const bool rhs_round = rhs.geom.a / rhs.geom.b < 1.05;
    if (!lhs_round && !rhs_round &&
        angle_diff_mod_pi(lhs.geom.angle, rhs.geom.angle) >= 10.0 * kPi / 180.0) {
        return false;
    }
    return true;
}

}  // namespace

EllipseGeom merge_candidates(const std::vector<EllipseCandidate>& cands) {
    if (cands.empty()) {
        throw error(errc::too_few_points, "no candidates to merge");
    }
    const std::size_t n = cands.size();

    // Single-link clustering via union-find.
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (similar(cands[i], cands[j])) parent[find(i)] = find(j);
        }
    }

    std::vector<std::size_t> cluster_size(n, 0);
    std::vector<std::int64_t> cluster_support(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = find(i);
        cluster_size[root]++;
        cluster_support[root] += cands[i].support;
    }
    std::size_t best_root = find(0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = find(i);
        if (cluster_size[root] > cluster_size[best_root] ||
            (cluster_size[root] == cluster_size[best_root] &&
             cluster_support[root] > cluster_support[best_root])) {
            best_root = root;
        }
    }

    EllipseGeom avg;
    avg.cx = avg.cy = avg.a = avg.b = 0.0;
    double sin2 = 0.0, cos2 = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (find(i) != best_root) continue;
        avg.cx += cands[i].geom.cx;
        avg.cy += cands[i].geom.cy;
        avg.a += cands[i].geom.a;
        avg.b += cands[i].geom.b;
        sin2 += std::sin(2.0 * cands[i].geom.angle);
        cos2 += std::cos(2.0 * cands[i].geom.angle);
        ++count;
    }
    const double inv = 1.0 / static_cast<double>(count);
    avg.cx *= inv;
    avg.cy *= inv;
    avg.a *= inv;
    avg.b *= inv;
    double angle = 0.5 * std::atan2(sin2, cos2);
    while (angle < -kPi / 2.0) angle += kPi;
    while (angle >= kPi / 2.0) angle -= kPi;
    avg.angle = angle;
    return avg;
}

}  // namespace spherecal
