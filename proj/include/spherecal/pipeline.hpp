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

#include <optional>
#include <string>

#include "spherecal/ellipse_fit.hpp"
#include "spherecal/sphere_estimator.hpp"
#include "spherecal/synth.hpp"

namespace spherecal {

struct DetectOptions {
    std::uint64_t seed = 0;
    std::uint64_t iterations = 1'000'000;
    int threads = 1;  // 0 = hardware concurrency
};

struct StageTimings {
    double edges_ms = 0.0;
    double circles_ms = 0.0;
    double ellipse_ms = 0.0;
    double total_ms = 0.0;
};

struct DetectionResult {
    EllipseGeom ellipse;                 // pixel space
    int support = 0;                     // inliers of the strongest merged member
    int edge_points = 0;
    int circle_candidates = 0;
    int ellipse_candidates = 0;
    double tau = 0.0;
    std::vector<PixelPoint> contour_points;  // final inlier positions, LM input
    StageTimings timings;
};

/// Fixed number of hypotheses for the second (5-point ellipse) RANSAC
/// stage; the consensus among radial profile points is large, so a modest
/// budget suffices.
inline constexpr std::uint64_t kEllipseRansacIterations = 2000;

/// Full detection pipeline: Sobel edges -> sparse strong points -> 3-point
/// circle RANSAC with the adaptive threshold -> radial profile collection
/// around every candidate circle -> 5-point ellipse RANSAC -> similarity
/// clustering and averaging.
DetectionResult detect_ellipse(const GrayImage& img, const CameraIntrinsics& k,
                               double sphere_radius, const DetectOptions& opts);

/// Detection followed by 3D estimation.
SphereEstimate estimate_in_image(const GrayImage& img, const CameraIntrinsics& k,
                                 double sphere_radius, const DetectOptions& opts,
                                 DetectionResult* detection_out = nullptr);

/// Canonical JSON documents written by the command-line tool. When
/// `with_timings` is false, the output contains no volatile fields and is
/// byte-identical for identical inputs and seeds.
std::string detection_json(const DetectionResult& result, bool with_timings);
std::string estimate_json(const DetectionResult& result, const SphereEstimate& est,
                          bool with_timings);

struct SceneOutcome {
    std::string name;
    bool ok = false;
    std::string error_code;  // empty when ok
    double euclidean_error = 0.0;
    double depth = 0.0;
    double relative_error = 0.0;
    Eigen::Vector3d gt_center = Eigen::Vector3d::Zero();
    Eigen::Vector3d est_center = Eigen::Vector3d::Zero();
};

struct BatchReport {
    std::vector<SceneOutcome> scenes;
    int succeeded = 0;
};

/// Renders and evaluates every scene; per-scene failures are recorded, not
/// fatal.
BatchReport run_batch(const std::vector<NamedScene>& scenes, const DetectOptions& opts);
std::string batch_json(const BatchReport& report);

/// Reads intrinsics JSON: {fu, fv, u0, v0, us, vs} with us, vs optional.
CameraIntrinsics intrinsics_from_json_text(const std::string& text);
CameraIntrinsics load_intrinsics(const std::string& path);

}  // namespace spherecal
