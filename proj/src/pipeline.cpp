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

#include "spherecal/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace spherecal {

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

// Derived seed for the ellipse stage of candidate k; keeps the two RANSAC
// stages statistically independent while remaining reproducible.
std::uint64_t ellipse_stage_seed(std::uint64_t base, std::size_t candidate) {
    return base ^ (0x9E3779B97F4A7C15ULL * (candidate + 1));
}

nlohmann::ordered_json ellipse_to_json(const EllipseGeom& g) {
    return {{"cx", g.cx}, {"cy", g.cy}, {"a", g.a}, {"b", g.b}, {"angle", g.angle}};
}

nlohmann::ordered_json detection_to_json(const DetectionResult& r, bool with_timings) {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["ellipse"] = ellipse_to_json(r.ellipse);
    j["support"] = r.support;
    j["edge_points"] = r.edge_points;
    j["circle_candidates"] = r.circle_candidates;
    j["ellipse_candidates"] = r.ellipse_candidates;
    if (with_timings) {
        j["timings_ms"] = {{"edges", r.timings.edges_ms},
                           {"circle_ransac", r.timings.circles_ms},
                           {"ellipse_fit", r.timings.ellipse_ms},
                           {"total", r.timings.total_ms}};
    }
    return j;
}

}  // namespace

DetectionResult detect_ellipse(const GrayImage& img, const CameraIntrinsics& k,
                               double sphere_radius, const DetectOptions& opts) {
    const auto t_start = std::chrono::steady_clock::now();
    DetectionResult result;

    const GradientField field = sobel(img);
    const StrongPoints strong = extract_strong_points(field);
    result.edge_points = static_cast<int>(strong.points.size());
    result.tau = strong.tau;
    result.timings.edges_ms = ms_since(t_start);

    const auto t_circles = std::chrono::steady_clock::now();
    RansacConfig circle_cfg;
    circle_cfg.iterations = opts.iterations;
    circle_cfg.rng_seed = opts.seed;
    circle_cfg.threads = opts.threads;
    const std::vector<ScoredCircle> circles =
        ransac_circles(strong.points, k, sphere_radius, circle_cfg);
    result.circle_candidates = static_cast<int>(circles.size());
    result.timings.circles_ms = ms_since(t_circles);

    const auto t_ellipse = std::chrono::steady_clock::now();
    std::vector<EllipseCandidate> candidates;
    std::vector<std::vector<RadialProfilePoint>> candidate_points;
    for (std::size_t i = 0; i < circles.size(); ++i) {
        try {
            std::vector<RadialProfilePoint> profile =
                collect_radial_points(field, circles[i].circle, strong.tau);
            RansacConfig ellipse_cfg;
            ellipse_cfg.iterations = kEllipseRansacIterations;
            ellipse_cfg.rng_seed = ellipse_stage_seed(opts.seed, i);
            EllipseCandidate cand = ransac_ellipse(profile, kEllipseInlierTolPx, ellipse_cfg);
            candidates.push_back(std::move(cand));
            candidate_points.push_back(std::move(profile));
        } catch (const error&) {
            // candidate circle did not develop into an ellipse; fine
        }
    }
    if (candidates.empty()) {
        throw error(errc::no_detection, "no circle candidate developed into an ellipse");
    }
    result.ellipse_candidates = static_cast<int>(candidates.size());
    result.ellipse = merge_candidates(candidates);

    // Contour points for downstream refinement: the strongest candidate's
    // radial samples that are consistent with the merged ellipse.
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        if (candidates[i].support > candidates[best].support) best = i;
    }
    result.support = candidates[best].support;
    const Conic merged_conic = geom_to_conic(result.ellipse);
    for (const RadialProfilePoint& p : candidate_points[best]) {
        if (sampson_distance(merged_conic, p.position.u, p.position.v) <= kEllipseInlierTolPx) {
            result.contour_points.push_back(p.position);
        }
    }
    result.timings.ellipse_ms = ms_since(t_ellipse);
    result.timings.total_ms = ms_since(t_start);
    return result;
}

SphereEstimate estimate_in_image(const GrayImage& img, const CameraIntrinsics& k,
                                 double sphere_radius, const DetectOptions& opts,
                                 DetectionResult* detection_out) {
    DetectionResult detection = detect_ellipse(img, k, sphere_radius, opts);
    SphereEstimate est = estimate_sphere(detection.ellipse, k, sphere_radius,
                                         detection.contour_points);
    if (detection_out) *detection_out = std::move(detection);
    return est;
}

std::string detection_json(const DetectionResult& result, bool with_timings) {
    return detection_to_json(result, with_timings).dump(2) + "\n";
}

std::string estimate_json(const DetectionResult& result, const SphereEstimate& est,
                          bool with_timings) {
    nlohmann::ordered_json j = detection_to_json(result, with_timings);
    j["center"] = {est.center.x(), est.center.y(), est.center.z()};
    j["residual_rms"] = est.residual_rms;
    j["method"] = est.method == SphereEstimate::Method::refined ? "refined" : "linear";
    j["converged"] = est.converged;
    return j.dump(2) + "\n";
}

BatchReport run_batch(const std::vector<NamedScene>& scenes, const DetectOptions& opts) {
    BatchReport report;
    for (const NamedScene& ns : scenes) {
        SceneOutcome outcome;
        outcome.name = ns.name;
        outcome.gt_center = ns.scene.sphere.center;
        outcome.depth = ns.scene.sphere.center.z();
        try {
            const GrayImage img = render_disk(ns.scene);
            DetectionResult detection;
            const SphereEstimate est =
                estimate_in_image(img, ns.scene.k, ns.scene.sphere.radius, opts, &detection);
            outcome.est_center = est.center;
            outcome.euclidean_error = (est.center - ns.scene.sphere.center).norm();
            outcome.relative_error = outcome.euclidean_error / outcome.depth;
            outcome.ok = true;
            ++report.succeeded;
        } catch (const error& e) {
            outcome.error_code = errc_name(e.code());
        }
        report.scenes.push_back(std::move(outcome));
    }
    return report;
}

std::string batch_json(const BatchReport& report) {
    std::vector<double> errors;
    for (const SceneOutcome& s : report.scenes) {
        if (s.ok) errors.push_back(s.euclidean_error);
    }
    std::sort(errors.begin(), errors.end());

    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["count"] = report.scenes.size();
    j["succeeded"] = report.succeeded;
    if (!errors.empty()) {
        double mean = 0.0;
        for (double e : errors) mean += e;
        mean /= static_cast<double>(errors.size());
        const std::size_t mid = errors.size() / 2;
        const double median = errors.size() % 2 == 1
                                  ? errors[mid]
                                  : (errors[mid - 1] + errors[mid]) / 2.0;
        j["errors"] = {{"mean", mean}, {"median", median}, {"max", errors.back()}};
    } else {
        j["errors"] = nullptr;
    }
    j["scenes"] = nlohmann::ordered_json::array();
    for (const SceneOutcome& s : report.scenes) {
        nlohmann::ordered_json js;
        js["name"] = s.name;
        js["ok"] = s.ok;
        if (s.ok) {
            js["gt_center"] = {s.gt_center.x(), s.gt_center.y(), s.gt_center.z()};
            js["est_center"] = {s.est_center.x(), s.est_center.y(), s.est_center.z()};
            js["euclidean_error"] = s.euclidean_error;
            js["depth"] = s.depth;
            js["relative_error"] = s.relative_error;
        } else {
            js["error"] = s.error_code;
        }
        j["scenes"].push_back(std::move(js));
    }
    return j.dump(2) + "\n";
}

CameraIntrinsics intrinsics_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw error(errc::parse_error, std::string("intrinsics JSON: ") + e.what());
    }
    try {
        CameraIntrinsics k;
        k.fu = j.at("fu").get<double>();
        k.fv = j.at("fv").get<double>();
        k.u0 = j.at("u0").get<double>();
        k.v0 = j.at("v0").get<double>();
        k.us = j.value("us", 1.0);
        k.vs = j.value("vs", 1.0);
        if (!k.valid()) {
            throw error(errc::usage, "intrinsics out of range (need fu, fv, us, vs > 0)");
        }
        return k;
    } catch (const nlohmann::json::exception& e) {
        throw error(errc::parse_error, std::string("intrinsics JSON: ") + e.what());
    }
}

CameraIntrinsics load_intrinsics(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error(errc::parse_error, "cannot open intrinsics file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return intrinsics_from_json_text(buf.str());
}

}  // namespace spherecal
