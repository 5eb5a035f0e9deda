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

#include "spherecal/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "spherecal/rng.hpp"

namespace spherecal {

namespace {

constexpr double kPi = 3.14159265358979323846;

Conic scene_pixel_conic(const SyntheticScene& scene) {
    const Conic norm = project_sphere(scene.sphere);
    return push_conic(norm, intrinsics_frame(scene.k)).normalized();
}

bool bbox_touches_image(const EllipseGeom& g, int width, int height) {
    const double ca = std::cos(g.angle), sa = std::sin(g.angle);
    const double ext_u = std::hypot(g.a * ca, g.b * sa);
    const double ext_v = std::hypot(g.a * sa, g.b * ca);
    return g.cx + ext_u >= 0.0 && g.cx - ext_u <= width - 1.0 && g.cy + ext_v >= 0.0 &&
           g.cy - ext_v <= height - 1.0;
}

}  // namespace

EllipseGeom scene_ellipse(const SyntheticScene& scene) {
    return conic_to_geom(scene_pixel_conic(scene));
}

std::vector<PixelPoint> sample_contour(const SyntheticScene& scene, int n) {
    const EllipseGeom g = scene_ellipse(scene);
    if (!bbox_touches_image(g, scene.width, scene.height)) {
        throw error(errc::silhouette_outside_image, "silhouette misses the raster entirely");
    }
    const double ca = std::cos(g.angle), sa = std::sin(g.angle);
    SplitMix64 rng(scene.seed);
    std::vector<PixelPoint> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double phi = 2.0 * kPi * i / n;
        const double eu = g.a * std::cos(phi);
        const double ev = g.b * std::sin(phi);
        PixelPoint p{g.cx + eu * ca - ev * sa, g.cy + eu * sa + ev * ca};
        if (scene.noise_sigma > 0.0) {
            p.u += scene.noise_sigma * rng.next_gaussian();
            p.v += scene.noise_sigma * rng.next_gaussian();
        }
        pts.push_back(p);
    }
    return pts;
}

GrayImage render_disk(const SyntheticScene& scene) {
    const Conic conic = scene_pixel_conic(scene);
    const EllipseGeom g = conic_to_geom(conic);
    if (!bbox_touches_image(g, scene.width, scene.height)) {
        throw error(errc::silhouette_outside_image, "silhouette misses the raster entirely");
    }
    // Interior = sign of the conic at the center.
    const double interior_sign = conic.evaluate(g.cx, g.cy) > 0.0 ? 1.0 : -1.0;

    GrayImage img = GrayImage::filled(scene.width, scene.height, 0);
    const double span = static_cast<double>(scene.fg - scene.bg);
    for (int v = 0; v < scene.height; ++v) {
        for (int u = 0; u < scene.width; ++u) {
            // Supersample only near the boundary; the Sampson distance is an
            // accurate proxy there and pixels further than 2 px are uniform.
            const double d = sampson_signed(conic, u, v) * interior_sign;
            double coverage;
            if (d > 2.0) {
                coverage = 1.0;
            } else if (d < -2.0) {
                coverage = 0.0;
            } else {
                int hits = 0;
                for (int sy = 0; sy < 4; ++sy) {
                    for (int sx = 0; sx < 4; ++sx) {
                        const double x = u + (sx + 0.5) / 4.0 - 0.5;
                        const double y = v + (sy + 0.5) / 4.0 - 0.5;
                        if (conic.evaluate(x, y) * interior_sign > 0.0) ++hits;
                    }
                }
                coverage = hits / 16.0;
            }
            const double value = scene.bg + span * coverage;
            img.at(u, v) = static_cast<std::uint8_t>(std::lround(value));
        }
    }
    if (scene.noise_sigma > 0.0) {
        SplitMix64 rng(scene.seed ^ 0x6E0153ULL);
        for (std::size_t i = 0; i < img.pixels.size(); ++i) {
            const double noisy = img.pixels[i] + scene.noise_sigma * rng.next_gaussian();
            img.pixels[i] = static_cast<std::uint8_t>(std::lround(std::clamp(noisy, 0.0, 255.0)));
        }
    }
    return img;
}

EvalReport evaluate(const SyntheticScene& scene, const Eigen::Vector3d& est_center,
                    const EllipseGeom& est_ellipse) {
    EvalReport r;
    r.gt_center = scene.sphere.center;
    r.est_center = est_center;
    r.euclidean_error = (r.gt_center - r.est_center).norm();
    r.gt_ellipse = scene_ellipse(scene);
    r.est_ellipse = est_ellipse;
    return r;
}

SyntheticScene scene_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw error(errc::parse_error, std::string("scene JSON: ") + e.what());
    }
    try {
        SyntheticScene s;
        s.k.fu = j.at("fu").get<double>();
        s.k.fv = j.at("fv").get<double>();
        s.k.u0 = j.at("u0").get<double>();
        s.k.v0 = j.at("v0").get<double>();
        s.k.us = j.value("us", 1.0);
        s.k.vs = j.value("vs", 1.0);
        s.width = j.at("width").get<int>();
        s.height = j.at("height").get<int>();
        const auto& sp = j.at("sphere");
        s.sphere.center = Eigen::Vector3d(sp.at("x").get<double>(), sp.at("y").get<double>(),
                                          sp.at("z").get<double>());
        s.sphere.radius = sp.at("r").get<double>();
        s.fg = j.value("fg", 200);
        s.bg = j.value("bg", 40);
        s.noise_sigma = j.value("noise_sigma", 0.0);
        s.seed = j.value("seed", std::uint64_t{0});
        if (!s.k.valid() || s.width < 3 || s.height < 3 || !(s.sphere.radius > 0.0) ||
            s.fg < 0 || s.fg > 255 || s.bg < 0 || s.bg > 255 || s.noise_sigma < 0.0) {
            throw error(errc::usage, "scene config out of range");
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw error(errc::parse_error, std::string("scene JSON: ") + e.what());
    }
}

std::string scene_to_json_text(const SyntheticScene& s) {
    nlohmann::ordered_json j;
    j["fu"] = s.k.fu;
    j["fv"] = s.k.fv;
    j["u0"] = s.k.u0;
    j["v0"] = s.k.v0;
    j["us"] = s.k.us;
    j["vs"] = s.k.vs;
    j["width"] = s.width;
    j["height"] = s.height;
    j["sphere"] = {{"x", s.sphere.center.x()},
                   {"y", s.sphere.center.y()},
                   {"z", s.sphere.center.z()},
                   {"r", s.sphere.radius}};
    j["fg"] = s.fg;
    j["bg"] = s.bg;
    j["noise_sigma"] = s.noise_sigma;
    j["seed"] = s.seed;
    return j.dump(2) + "\n";
}

SyntheticScene load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error(errc::parse_error, "cannot open scene file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return scene_from_json_text(buf.str());
}

std::vector<NamedScene> standard_grid(double noise_sigma) {
    const double depths[] = {2.0, 5.0, 10.0, 30.0, 100.0};
    const double offsets_deg[] = {0.0, 10.0, 20.0, 30.0, 40.0};
    const double sphere_radius = 0.15;

    std::vector<NamedScene> out;
    out.reserve(100);
    for (int di = 0; di < 5; ++di) {
        for (int oi = 0; oi < 5; ++oi) {
            for (int si = 1; si <= 4; ++si) {
                const std::uint64_t seed =
                    0x5CE4EULL ^ (static_cast<std::uint64_t>(di) << 24) ^
                    (static_cast<std::uint64_t>(oi) << 16) ^ static_cast<std::uint64_t>(si);
                SplitMix64 rng(seed);

                SyntheticScene s;
                s.width = 384;
                s.height = 384;
                s.seed = seed;
                s.noise_sigma = noise_sigma;
                s.bg = static_cast<int>(20 + rng.next_below(41));    // 20..60
                s.fg = static_cast<int>(180 + rng.next_below(56));   // 180..235

                const double z0 = depths[di] * sphere_radius;
                const double off = offsets_deg[oi] * kPi / 180.0;
                const double azimuth = rng.next_range(0.0, 2.0 * kPi);
                s.sphere.radius = sphere_radius;
                s.sphere.center = Eigen::Vector3d(z0 * std::tan(off) * std::cos(azimuth),
                                                  z0 * std::tan(off) * std::sin(azimuth), z0);

                // Focal length for a ~100 px mean silhouette radius, shrunk
                // if needed so the silhouette fits the raster with margin,
                // and a principal point that centers it (plus jitter).
                const double d = s.sphere.center.norm();
                s.k.fu = s.k.fv = 1.0;
                s.k.u0 = s.k.v0 = 0.0;
                const EllipseGeom gn = scene_ellipse(s);  // normalized units
                const double ca = std::cos(gn.angle), sa = std::sin(gn.angle);
                const double ext_u = std::hypot(gn.a * ca, gn.b * sa);
                const double ext_v = std::hypot(gn.a * sa, gn.b * ca);
                double f = 100.0 * d / sphere_radius;
                f = std::min(f, (s.width / 2.0 - 20.0) / ext_u);
                f = std::min(f, (s.height / 2.0 - 20.0) / ext_v);
                s.k.fu = s.k.fv = std::round(f);
                const EllipseGeom g = scene_ellipse(s);
                s.k.u0 = std::round(s.width / 2.0 - g.cx + rng.next_range(-15.0, 15.0));
                s.k.v0 = std::round(s.height / 2.0 - g.cy + rng.next_range(-15.0, 15.0));

                char name[64];
                std::snprintf(name, sizeof(name), "d%03d_o%02d_s%d",
                              static_cast<int>(depths[di]), static_cast<int>(offsets_deg[oi]), si);
                out.push_back({name, s});
            }
        }
    }
    return out;
}

}  // namespace spherecal
