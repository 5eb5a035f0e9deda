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

#include "spherecal/circle_ransac.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "spherecal/parallel.hpp"
#include "spherecal/rng.hpp"

namespace spherecal {

CircleHypothesis circle_from_3_points(PixelPoint p1, PixelPoint p2, PixelPoint p3) {
    const double ax = p2.u - p1.u, ay = p2.v - p1.v;
    const double bx = p3.u - p1.u, by = p3.v - p1.v;
    const double cross = ax * by - ay * bx;
    if (std::abs(cross) <= 2e-9) {  // twice the triangle area
        throw error(errc::collinear_points, "cannot circumscribe collinear points");
    }
    const double a2 = ax * ax + ay * ay;
    const double b2 = bx * bx + by * by;
    const double cx = p1.u + (by * a2 - ay * b2) / (2.0 * cross);
    const double cy = p1.v + (ax * b2 - bx * a2) / (2.0 * cross);
    CircleHypothesis c;
    c.center = {cx, cy};
    c.radius = std::hypot(p1.u - cx, p1.v - cy);
    return c;
}

namespace {

struct PointSoA {
    std::vector<double> x, y, cosd, sind;
};

PointSoA make_soa(const std::vector<EdgePoint>& points) {
    PointSoA s;
    const std::size_t n = points.size();
    s.x.resize(n);
    s.y.resize(n);
    s.cosd.resize(n);
    s.sind.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.x[i] = points[i].u;
        s.y[i] = points[i].v;
        s.cosd[i] = std::cos(points[i].direction);
        s.sind[i] = std::sin(points[i].direction);
    }
    return s;
}

const double kCosDirTol = std::cos(kDirectionToleranceRad);

std::int64_t count_inliers(const PointSoA& s, const CircleHypothesis& c, double t) {
    std::int64_t count = 0;
    const double cx = c.center.u, cy = c.center.v, r = c.radius;
    const std::size_t n = s.x.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = s.x[i] - cx;
        const double dy = s.y[i] - cy;
        const double dist = std::sqrt(dx * dx + dy * dy);
        if (std::abs(dist - r) > t) continue;
        // |cos(angle between gradient and radial direction)| >= cos(tol)
        const double dot = s.cosd[i] * dx + s.sind[i] * dy;
        if (std::abs(dot) >= kCosDirTol * dist && dist > 0.0) ++count;
    }
    return count;
}

struct Hypothesis {
    std::uint64_t iter = 0;
    CircleHypothesis circle;
    double threshold_px = 0.0;
    std::int64_t score = -1;
};

// Algebraic least-squares circle (Kasa fit) over selected points.
CircleHypothesis fit_circle_lsq(const std::vector<EdgePoint>& points,
                                const std::vector<std::uint32_t>& idx) {
    Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
    Eigen::Vector3d atb = Eigen::Vector3d::Zero();
    for (std::uint32_t i : idx) {
        const double x = points[i].u, y = points[i].v;
        const Eigen::Vector3d row(x, y, 1.0);
        ata += row * row.transpose();
        atb += row * -(x * x + y * y);
    }
    const Eigen::Vector3d sol = ata.ldlt().solve(atb);
    CircleHypothesis c;
    c.center = {-sol(0) / 2.0, -sol(1) / 2.0};
    const double r2 = c.center.u * c.center.u + c.center.v * c.center.v - sol(2);
    if (!(r2 > 0.0)) {
        throw error(errc::degenerate_input, "circle refit collapsed");
    }
    c.radius = std::sqrt(r2);
    return c;
}

bool is_duplicate(const CircleHypothesis& a, const CircleHypothesis& b) {
    const double rmin = std::min(a.radius, b.radius);
    const double cdist = std::hypot(a.center.u - b.center.u, a.center.v - b.center.v);
    return cdist < 0.5 * rmin && std::abs(a.radius - b.radius) < 0.3 * rmin;
}

// Score first, larger radius on ties, iteration index as the final
// deterministic tie-break.
bool better(const Hypothesis& a, const Hypothesis& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.circle.radius != b.circle.radius) return a.circle.radius > b.circle.radius;
    return a.iter < b.iter;
}

// Greedy suppression over score-sorted hypotheses; survivors keep order.
std::vector<Hypothesis> suppress(std::vector<Hypothesis> pool, std::size_t keep) {
    std::sort(pool.begin(), pool.end(), better);
    std::vector<Hypothesis> out;
    for (const Hypothesis& h : pool) {
        bool dup = false;
        for (const Hypothesis& kept : out) {
            if (is_duplicate(h.circle, kept.circle)) {
                dup = true;
                break;
            }
        }
        if (!dup) {
            out.push_back(h);
            if (out.size() >= keep) break;
        }
    }
    return out;
}

}  // namespace

std::vector<std::uint32_t> circle_inliers(const std::vector<EdgePoint>& points,
                                          const CircleHypothesis& circle, double t) {
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double dx = points[i].u - circle.center.u;
        const double dy = points[i].v - circle.center.v;
        const double dist = std::hypot(dx, dy);
        if (std::abs(dist - circle.radius) > t || dist <= 0.0) continue;
        const double dot = std::cos(points[i].direction) * dx + std::sin(points[i].direction) * dy;
        if (std::abs(dot) >= kCosDirTol * dist) out.push_back(static_cast<std::uint32_t>(i));
    }
    return out;
}

std::vector<ScoredCircle> ransac_circles(const std::vector<EdgePoint>& points,
                                         const CameraIntrinsics& k, double sphere_radius,
                                         const RansacConfig& cfg) {
    const std::size_t n = points.size();
    if (n < 3) {
        throw error(errc::too_few_points, "circle RANSAC needs at least 3 points");
    }
    const PointSoA soa = make_soa(points);

    // Circles wildly larger than the data spread cannot be a sphere image.
    double min_x = soa.x[0], max_x = soa.x[0], min_y = soa.y[0], max_y = soa.y[0];
    for (std::size_t i = 1; i < n; ++i) {
        min_x = std::min(min_x, soa.x[i]);
        max_x = std::max(max_x, soa.x[i]);
        min_y = std::min(min_y, soa.y[i]);
        max_y = std::max(max_y, soa.y[i]);
    }
    const double max_radius = 2.0 * std::hypot(max_x - min_x, max_y - min_y);

    const std::int64_t floor_score = std::max<std::int64_t>(
        6, static_cast<std::int64_t>(std::ceil(cfg.min_inlier_fraction * static_cast<double>(n))));
    const std::int64_t early_exit_score =
        static_cast<std::int64_t>(0.6 * static_cast<double>(n));

    const int threads = resolve_threads(cfg.threads);
    constexpr std::uint64_t kChunk = 8192;
    constexpr std::size_t kPoolCompactLimit = 100'000;
    constexpr std::size_t kPoolKeep = 4096;

    std::vector<Hypothesis> pool;
    Hypothesis best;  // best seen, floor or not (for the error message)

    std::vector<Hypothesis> chunk(kChunk);
    for (std::uint64_t chunk_begin = 0; chunk_begin < cfg.iterations; chunk_begin += kChunk) {
        const std::uint64_t chunk_end = std::min(cfg.iterations, chunk_begin + kChunk);
        const std::uint64_t m = chunk_end - chunk_begin;

        parallel_for(0, m, threads, [&](std::uint64_t j) {
            const std::uint64_t iter = chunk_begin + j;
            Hypothesis& h = chunk[j];
            h = Hypothesis{};
            h.iter = iter;

            SplitMix64 rng(cfg.rng_seed ^ iter);
            const std::uint64_t i0 = rng.next_below(n);
            std::uint64_t i1 = rng.next_below(n);
            while (i1 == i0) i1 = rng.next_below(n);
            std::uint64_t i2 = rng.next_below(n);
            while (i2 == i0 || i2 == i1) i2 = rng.next_below(n);

            CircleHypothesis circle;
            try {
                circle = circle_from_3_points({soa.x[i0], soa.y[i0]}, {soa.x[i1], soa.y[i1]},
                                              {soa.x[i2], soa.y[i2]});
            } catch (const error&) {
                return;  // collinear sample
            }
            if (!(circle.radius >= 1.0) || !(circle.radius <= max_radius)) return;

            double t;
            try {
                t = adaptive_threshold(circle, k, sphere_radius).t;
            } catch (const error& e) {
                if (e.code() == errc::sphere_too_close) {
                    // the circle is larger than any sphere image can be:
                    // the distance estimate puts the camera inside the
                    // sphere. Not a usable hypothesis.
                    return;
                }
                // cone too shallow for the adaptive model (extreme close
                // pose): conservative fixed fraction of the radius
                t = kFallbackThresholdFraction * circle.radius + kNoiseSlackPx;
            }
            h.circle = circle;
            h.threshold_px = t;
            h.score = count_inliers(soa, circle, t);
        });

        for (std::uint64_t j = 0; j < m; ++j) {
            const Hypothesis& h = chunk[j];
            if (h.score < 0) continue;
            if (best.score < 0 || better(h, best)) best = h;
            if (h.score >= floor_score) pool.push_back(h);
        }
        if (pool.size() > kPoolCompactLimit) {
            pool = suppress(std::move(pool), kPoolKeep);
        }
        if (best.score >= early_exit_score && best.score >= floor_score) break;
    }

    if (pool.empty()) {
        throw error(errc::no_circle_found,
                    "best support " + std::to_string(std::max<std::int64_t>(best.score, 0)) +
                        " below required " + std::to_string(floor_score));
    }

    std::vector<Hypothesis> winners =
        suppress(std::move(pool), static_cast<std::size_t>(cfg.candidate_count));

    auto threshold_for = [&](const CircleHypothesis& c) {
        try {
            return adaptive_threshold(c, k, sphere_radius).t;
        } catch (const error&) {
            return kFallbackThresholdFraction * c.radius + kNoiseSlackPx;
        }
    };

    std::vector<ScoredCircle> out;
    out.reserve(winners.size());
    for (const Hypothesis& h : winners) {
        ScoredCircle sc;
        sc.circle = h.circle;
        sc.threshold_px = h.threshold_px;
        sc.inliers = circle_inliers(points, h.circle, h.threshold_px);
        sc.score = static_cast<std::int64_t>(sc.inliers.size());

        // Consensus refit: a least-squares circle over the inliers reaches
        // sub-pixel accuracy where the 3-point sample cannot. Kept only
        // when it does not lose support.
        try {
            const CircleHypothesis refit = fit_circle_lsq(points, sc.inliers);
            const double t = threshold_for(refit);
            std::vector<std::uint32_t> inliers = circle_inliers(points, refit, t);
            if (static_cast<std::int64_t>(inliers.size()) >= sc.score) {
                sc.circle = refit;
                sc.threshold_px = t;
                sc.inliers = std::move(inliers);
                sc.score = static_cast<std::int64_t>(sc.inliers.size());
            }
        } catch (const error&) {
            // keep the sampled hypothesis
        }
        out.push_back(std::move(sc));
    }
    return out;
}

}  // namespace spherecal
