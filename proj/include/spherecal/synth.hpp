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

#include <string>
#include <vector>

#include "spherecal/camera.hpp"
#include "spherecal/conic.hpp"
#include "spherecal/image.hpp"
#include "spherecal/sphere_projection.hpp"

namespace spherecal {

/// Fully specified ground-truth scene: camera, sphere, raster layout and
/// noise. `noise_sigma` is pixels for contour sampling and intensity levels
/// for rasterization.
struct SyntheticScene {
    CameraIntrinsics k;
    Sphere sphere;
    int width = 384;
    int height = 384;
    int fg = 200;
    int bg = 40;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
};

struct EvalReport {
    Eigen::Vector3d gt_center = Eigen::Vector3d::Zero();
    Eigen::Vector3d est_center = Eigen::Vector3d::Zero();
    double euclidean_error = 0.0;
    EllipseGeom gt_ellipse;
    EllipseGeom est_ellipse;
    double detect_ms = 0.0;
    double estimate_ms = 0.0;
};

/// Ground-truth silhouette ellipse of the scene in pixel coordinates.
EllipseGeom scene_ellipse(const SyntheticScene& scene);

/// n exact contour points of the silhouette (uniform parametric angle),
/// optionally displaced by isotropic Gaussian noise of noise_sigma pixels
/// (seeded). Throws SilhouetteOutsideImage when the silhouette does not
/// touch the image at all.
std::vector<PixelPoint> sample_contour(const SyntheticScene& scene, int n = 360);

/// Anti-aliased filled silhouette (4x4 supersampling), foreground over
/// background, plus optional additive Gaussian intensity noise (seeded,
/// clamped to [0, 255]). Deterministic for a fixed scene.
GrayImage render_disk(const SyntheticScene& scene);

/// Euclidean-error report for an estimate against the scene ground truth.
EvalReport evaluate(const SyntheticScene& scene, const Eigen::Vector3d& est_center,
                    const EllipseGeom& est_ellipse);

/// JSON (de)serialization of the scene config. Schema:
/// {fu, fv, u0, v0, us, vs, width, height, sphere:{x,y,z,r}, fg, bg,
///  noise_sigma, seed}
SyntheticScene scene_from_json_text(const std::string& text);
std::string scene_to_json_text(const SyntheticScene& scene);
SyntheticScene load_scene(const std::string& path);

struct NamedScene {
    std::string name;
    SyntheticScene scene;
};

/// The reproducible 100-scene evaluation grid: depths {2, 5, 10, 30, 100} r
/// x angular offsets {0, 10, 20, 30, 40} deg x 4 seeds. Cameras are sized
/// per scene so the silhouette has a ~100 px mean radius and sits inside
/// the 384x384 raster.
std::vector<NamedScene> standard_grid(double noise_sigma);

}  // namespace spherecal
