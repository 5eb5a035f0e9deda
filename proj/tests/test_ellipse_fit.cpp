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

#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "spherecal/ellipse_fit.hpp"
#include "spherecal/rng.hpp"

using namespace spherecal;
using namespace testing_oracles;

namespace {

std::vector<RadialProfilePoint> to_profile(const std::vector<PixelPoint>& pts) {
    std::vector<RadialProfilePoint> out;
    out.reserve(pts.size());
    for (const PixelPoint& p : pts) out.push_back({p, 100.0});
    return out;
}

GrayImage disk_image(int w, int h, double cx, double cy, double radius) {
    GrayImage img = GrayImage::filled(w, h, 30);
    for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
            if (std::hypot(u - cx, v - cy) <= radius) img.at(u, v) = 210;
        }
    }
    return img;
}

}  // namespace

TEST_CASE("direct fit recovers the unit circle from exact points") {
    const EllipseGeom circle{0.0, 0.0, 1.0, 1.0, 0.0};
    const auto pts = ellipse_points(circle, 7);
    const Conic c = fit_ellipse_direct(pts);
    CHECK(conics_proportional(c, Conic{1.0, 0.0, 1.0, 0.0, 0.0, -1.0}, 1e-10));
    for (const PixelPoint& p : pts) {
        CHECK(std::abs(c.evaluate(p.u, p.v)) < 1e-10);
    }
}

TEST_CASE("direct fit recovers a general ellipse from 100 exact points") {
    const EllipseGeom gt{300.0, 200.0, 120.0, 80.0, 0.5};
    const Conic c = fit_ellipse_direct(ellipse_points(gt, 100));
    const EllipseGeom g = conic_to_geom(c);
    CHECK(g.cx == doctest::Approx(gt.cx).epsilon(1e-6));
    CHECK(g.cy == doctest::Approx(gt.cy).epsilon(1e-6));
    CHECK(g.a == doctest::Approx(gt.a).epsilon(1e-6));
    CHECK(g.b == doctest::Approx(gt.b).epsilon(1e-6));
    CHECK(g.angle == doctest::Approx(gt.angle).epsilon(1e-6));
}

TEST_CASE("direct fit is translation equivariant") {
    const EllipseGeom gt{300.0, 200.0, 120.0, 80.0, 0.5};
    auto pts = ellipse_points(gt, 64);
    const EllipseGeom base = conic_to_geom(fit_ellipse_direct(pts));
    for (PixelPoint& p : pts) {
        p.u += 1000.0;
        p.v += 1000.0;
    }
    const EllipseGeom moved = conic_to_geom(fit_ellipse_direct(pts));
    CHECK(moved.cx - base.cx == doctest::Approx(1000.0).epsilon(1e-6));
    CHECK(moved.cy - base.cy == doctest::Approx(1000.0).epsilon(1e-6));
    CHECK(moved.a == doctest::Approx(base.a).epsilon(1e-6));
    CHECK(moved.b == doctest::Approx(base.b).epsilon(1e-6));
    CHECK(moved.angle == doctest::Approx(base.angle).epsilon(1e-6));
}

TEST_CASE("direct fit is scale equivariant") {
    const EllipseGeom gt{10.0, -4.0, 7.0, 3.0, -0.7};
    auto pts = ellipse_points(gt, 48);
    const EllipseGeom base = conic_to_geom(fit_ellipse_direct(pts));
    for (PixelPoint& p : pts) {
        p.u *= 250.0;
        p.v *= 250.0;
    }
    const EllipseGeom scaled = conic_to_geom(fit_ellipse_direct(pts));
    CHECK(scaled.cx == doctest::Approx(base.cx * 250.0).epsilon(1e-6));
    CHECK(scaled.cy == doctest::Approx(base.cy * 250.0).epsilon(1e-6));
    CHECK(scaled.a == doctest::Approx(base.a * 250.0).epsilon(1e-6));
    CHECK(scaled.b == doctest::Approx(base.b * 250.0).epsilon(1e-6));
    CHECK(scaled.angle == doctest::Approx(base.angle).epsilon(1e-6));
}

TEST_CASE("direct fit always returns an elliptic conic") {
    SplitMix64 rng(13);
    for (int trial = 0; trial < 500; ++trial) {
        EllipseGeom g;
        g.cx = rng.next_range(-1000.0, 1000.0);
        g.cy = rng.next_range(-1000.0, 1000.0);
        g.b = rng.next_range(1.0, 150.0);
        g.a = g.b * rng.next_range(1.0, 5.0);
        g.angle = rng.next_range(-kPi / 2.0, kPi / 2.0);
        const int n = 5 + static_cast<int>(rng.next_below(60));
        auto pts = ellipse_points(g, n, rng.next_double());
        // mild noise half the time; the constraint must hold regardless
        if (trial % 2 == 1) {
            for (PixelPoint& p : pts) {
                p.u += rng.next_gaussian() * 0.05 * g.b;
                p.v += rng.next_gaussian() * 0.05 * g.b;
            }
        }
        try {
            const Conic c = fit_ellipse_direct(pts);
            CHECK(c.is_elliptic());
        } catch (const error& e) {
            // degenerate noise draws may legitimately fail, but never with
            // a non-elliptic result
            CHECK((e.code() == errc::no_ellipse_solution || e.code() == errc::degenerate_input));
        }
    }
}

TEST_CASE("direct fit rejects degenerate input") {
    std::vector<PixelPoint> four{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    CHECK_THROWS_AS(fit_ellipse_direct(four), error);

    std::vector<PixelPoint> line;
    for (int i = 0; i < 10; ++i) line.push_back({static_cast<double>(i), 2.0});
    CHECK_THROWS_AS(fit_ellipse_direct(line), error);

    std::vector<PixelPoint> same(8, PixelPoint{3.0, 4.0});
    CHECK_THROWS_AS(fit_ellipse_direct(same), error);
}

TEST_CASE("sampson distance basics") {
    const Conic circle{1.0, 0.0, 1.0, 0.0, 0.0, -4.0};  // radius 2
    // |Q|/|grad Q| at (3, 0): |9 - 4| / |(6, 0)|
    CHECK(sampson_distance(circle, 3.0, 0.0) == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
    // close to the curve the proxy approaches the geometric distance
    CHECK(sampson_distance(circle, 2.05, 0.0) == doctest::Approx(0.05).epsilon(0.02));
    // scale invariance
    const Conic scaled{-7.0, 0.0, -7.0, 0.0, 0.0, 28.0};
    CHECK(sampson_distance(scaled, 3.0, 0.0) ==
          doctest::Approx(sampson_distance(circle, 3.0, 0.0)).epsilon(1e-12));
    // the gradient vanishes at the center; the guarded result is huge
    CHECK(sampson_distance(circle, 0.0, 0.0) > 1e100);
}

TEST_CASE("radial collection finds the contour of a rendered disk") {
    const double cx = 150.0, cy = 140.0, radius = 80.0;
    const GradientField f = sobel(disk_image(300, 300, cx, cy, radius));
    const CircleHypothesis hyp{{cx + 2.0, cy - 3.0}, radius + 4.0};
    const auto pts = collect_radial_points(f, hyp, 40.0);
    CHECK(pts.size() >= 324);  // >= 90% of the rays
    int close = 0;
    for (const RadialProfilePoint& p : pts) {
        if (std::abs(std::hypot(p.position.u - cx, p.position.v - cy) - radius) <= 1.0) ++close;
    }
    CHECK(close >= static_cast<int>(0.9 * pts.size()));
}

TEST_CASE("radial collection is invariant to a contrast doubling") {
    GrayImage low = GrayImage::filled(200, 200, 10);
    GrayImage high = GrayImage::filled(200, 200, 10);
    for (int v = 0; v < 200; ++v) {
        for (int u = 0; u < 200; ++u) {
            if (std::hypot(u - 100.0, v - 95.0) <= 50.0) {
                low.at(u, v) = 10 + 100;
                high.at(u, v) = 10 + 200;
            }
        }
    }
    const CircleHypothesis hyp{{100.0, 95.0}, 50.0};
    const auto a = collect_radial_points(sobel(low), hyp, 40.0);
    const auto b = collect_radial_points(sobel(high), hyp, 40.0);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].position.u == doctest::Approx(b[i].position.u).epsilon(1e-12));
        CHECK(a[i].position.v == doctest::Approx(b[i].position.v).epsilon(1e-12));
    }
}

TEST_CASE("circle outside the image yields TooFewProfilePoints") {
    const GradientField f = sobel(GrayImage::filled(64, 64, 0));
    try {
        collect_radial_points(f, {{500.0, 500.0}, 30.0}, 40.0);
        FAIL("expected TooFewProfilePoints");
    } catch (const error& e) {
        CHECK(e.code() == errc::too_few_profile_points);
    }
}

TEST_CASE("ransac_ellipse recovers the curve under outliers") {
    const EllipseGeom gt{200.0, 150.0, 90.0, 60.0, 0.4};
    auto pts = ellipse_points(gt, 60);
    SplitMix64 rng(21);
    for (int i = 0; i < 15; ++i) {
        const double phi = rng.next_range(0.0, 2.0 * kPi);
        const double rad = rng.next_range(10.0, 40.0);
        PixelPoint p = pts[rng.next_below(60)];
        pts.push_back({p.u + rad * std::cos(phi), p.v + rad * std::sin(phi)});
    }
    RansacConfig cfg;
    cfg.iterations = 2000;
    cfg.rng_seed = 5;
    const EllipseCandidate cand = ransac_ellipse(to_profile(pts), 2.0, cfg);
    CHECK(std::hypot(cand.geom.cx - gt.cx, cand.geom.cy - gt.cy) < 0.5);
    CHECK(cand.geom.a == doctest::Approx(gt.a).epsilon(0.01));
    CHECK(cand.geom.b == doctest::Approx(gt.b).epsilon(0.01));
    CHECK(cand.support >= 60);
    // conic and geom describe the same curve
    const Conic back = geom_to_conic(cand.geom);
    CHECK(conics_proportional(back, cand.conic, 1e-8));
}

TEST_CASE("ransac_ellipse without outliers equals the direct fit") {
    const EllipseGeom gt{80.0, 90.0, 50.0, 30.0, -0.8};
    const auto pts = ellipse_points(gt, 40);
    RansacConfig cfg;
    cfg.iterations = 500;
    cfg.rng_seed = 3;
    const EllipseCandidate cand = ransac_ellipse(to_profile(pts), 2.0, cfg);
    CHECK(cand.support == 40);
    const Conic direct = fit_ellipse_direct(pts);
    CHECK(conics_proportional(cand.conic, direct, 1e-9));
}

TEST_CASE("ransac_ellipse is deterministic") {
    const EllipseGeom gt{100.0, 100.0, 40.0, 25.0, 0.2};
    auto profile = to_profile(ellipse_points(gt, 50));
    RansacConfig cfg;
    cfg.iterations = 800;
    cfg.rng_seed = 11;
    const EllipseCandidate a = ransac_ellipse(profile, 2.0, cfg);
    const EllipseCandidate b = ransac_ellipse(profile, 2.0, cfg);
    CHECK(a.conic.coeffs() == b.conic.coeffs());
    CHECK(a.support == b.support);
    CHECK(a.inliers == b.inliers);
}

TEST_CASE("ransac_ellipse consensus re-verifies below the tolerance") {
    const EllipseGeom gt{120.0, 80.0, 70.0, 45.0, 1.1};
    auto pts = ellipse_points(gt, 70);
    SplitMix64 rng(31);
    for (PixelPoint& p : pts) {
        p.u += rng.next_gaussian() * 0.3;
        p.v += rng.next_gaussian() * 0.3;
    }
    RansacConfig cfg;
    cfg.iterations = 1500;
    cfg.rng_seed = 8;
    const auto profile = to_profile(pts);
    const EllipseCandidate cand = ransac_ellipse(profile, 2.0, cfg);
    double worst = 0.0;
    for (std::uint32_t i : cand.inliers) {
        worst = std::max(worst, sampson_distance(cand.conic, profile[i].position.u,
                                                 profile[i].position.v));
    }
    CHECK(worst <= 2.0);
    CHECK(cand.inliers == ellipse_inliers(profile, cand.conic, 2.0));
}

TEST_CASE("merge_candidates basics") {
    EllipseCandidate a;
    a.geom = {100.0, 100.0, 50.0, 30.0, 0.3};
    a.support = 40;
    CHECK_THROWS_AS(merge_candidates({}), error);
    const EllipseGeom only = merge_candidates({a});
    CHECK(only.cx == a.geom.cx);
    CHECK(only.a == a.geom.a);

    EllipseCandidate b = a;
    b.geom.cx += 0.5;
    b.support = 38;
    EllipseCandidate c = a;
    c.geom.cy -= 0.5;
    c.support = 35;
    EllipseCandidate far_off;
    far_off.geom = {400.0, 400.0, 80.0, 20.0, -1.2};
    far_off.support = 90;
    const EllipseGeom merged = merge_candidates({a, b, c, far_off});
    CHECK(merged.cx == doctest::Approx((a.geom.cx * 2 + b.geom.cx) / 3.0));
    CHECK(merged.cy == doctest::Approx((a.geom.cy * 2 + c.geom.cy) / 3.0));
    CHECK(merged.a == doctest::Approx(50.0));
}

TEST_CASE("merge averages angles circularly around the wrap") {
    EllipseCandidate a;
    a.geom = {0.0, 0.0, 20.0, 10.0, 89.0 * kPi / 180.0};
    a.support = 10;
    EllipseCandidate b;
    b.geom = {0.0, 0.0, 20.0, 10.0, -89.0 * kPi / 180.0};
    b.support = 10;
    const EllipseGeom merged = merge_candidates({a, b});
    CHECK(std::abs(merged.angle) == doctest::Approx(kPi / 2.0).epsilon(1e-9));
}
