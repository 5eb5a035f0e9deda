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

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "spherecal/pipeline.hpp"

namespace fs = std::filesystem;
using namespace spherecal;

namespace {

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw error(errc::usage, "cannot open output file: " + out_path);
        out << text;
    }
}

struct CommonArgs {
    std::string image;
    std::string intrinsics;
    double radius = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t iterations = 1'000'000;
    int threads = 1;
    std::string out;
    bool json_only = false;

    void attach(CLI::App* cmd, bool needs_radius) {
        cmd->add_option("--image", image, "input image (binary PGM/PPM)")->required();
        cmd->add_option("--intrinsics", intrinsics, "camera intrinsics JSON")->required();
        auto* r = cmd->add_option("--radius", radius, "sphere radius (scene length units)");
        if (needs_radius) r->required();
        cmd->add_option("--seed", seed, "RANSAC seed (default 0)");
        cmd->add_option("--iterations", iterations, "circle RANSAC iterations (default 1000000)");
        cmd->add_option("--threads", threads, "worker threads, 0 = all cores (default 1)");
        cmd->add_option("--out", out, "write JSON here instead of stdout");
        cmd->add_flag("--json-only", json_only,
                      "suppress human output and volatile fields (timings)");
    }

    DetectOptions options() const {
        DetectOptions o;
        o.seed = seed;
        o.iterations = iterations;
        o.threads = threads;
        return o;
    }
};

int run_detect(const CommonArgs& args) {
    if (!(args.radius > 0.0)) throw error(errc::usage, "--radius must be positive");
    const GrayImage img = read_pnm_file(args.image);
    const CameraIntrinsics k = load_intrinsics(args.intrinsics);
    const DetectionResult result = detect_ellipse(img, k, args.radius, args.options());
    emit(detection_json(result, !args.json_only), args.out);
    if (!args.json_only) {
        std::cerr << "ellipse: center (" << result.ellipse.cx << ", " << result.ellipse.cy
                  << ") axes (" << result.ellipse.a << ", " << result.ellipse.b << ") support "
                  << result.support << "\n";
    }
    return 0;
}

int run_estimate(const CommonArgs& args) {
    if (!(args.radius > 0.0)) throw error(errc::usage, "--radius must be positive");
    const GrayImage img = read_pnm_file(args.image);
    const CameraIntrinsics k = load_intrinsics(args.intrinsics);
    DetectionResult detection;
    const SphereEstimate est =
        estimate_in_image(img, k, args.radius, args.options(), &detection);
    emit(estimate_json(detection, est, !args.json_only), args.out);
    if (!args.json_only) {
        std::cerr << "center: (" << est.center.x() << ", " << est.center.y() << ", "
                  << est.center.z() << "), residual rms " << est.residual_rms << " px\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sphere silhouette detection and 3D center estimation for calibrated cameras"};
    app.require_subcommand(1);

    CommonArgs detect_args;
    CLI::App* detect = app.add_subcommand("detect", "detect the silhouette ellipse in an image");
    detect_args.attach(detect, true);

    CommonArgs estimate_args;
    CLI::App* estimate =
        app.add_subcommand("estimate", "detect and estimate the 3D sphere center");
    estimate_args.attach(estimate, true);

    std::string scene_path, out_image, out_gt, grid, grid_dir;
    double grid_noise = 0.0;
    CLI::App* synth = app.add_subcommand("synth", "render a ground-truth scene");
    synth->add_option("--scene", scene_path, "scene config JSON");
    synth->add_option("--out-image", out_image, "output PGM path");
    synth->add_option("--out-gt", out_gt, "output ground-truth JSON path");
    synth->add_option("--grid", grid, "write a named scene batch instead ('standard')");
    synth->add_option("--out-dir", grid_dir, "output directory for --grid");
    synth->add_option("--noise-sigma", grid_noise, "intensity noise for --grid scenes");

    std::string eval_dir, eval_out;
    std::uint64_t eval_seed = 0;
    std::uint64_t eval_iterations = 1'000'000;
    int eval_threads = 1;
    CLI::App* evalc = app.add_subcommand("eval", "run estimation over a directory of scenes");
    evalc->add_option("--dir", eval_dir, "directory of scene config JSONs")->required();
    evalc->add_option("--out", eval_out, "write the report here instead of stdout");
    evalc->add_option("--seed", eval_seed, "RANSAC seed (default 0)");
    evalc->add_option("--iterations", eval_iterations, "circle RANSAC iterations");
    evalc->add_option("--threads", eval_threads, "worker threads, 0 = all cores");

    try {
        app.parse(argc, argv);

        if (*detect) return run_detect(detect_args);
        if (*estimate) return run_estimate(estimate_args);

        if (*synth) {
            if (!grid.empty()) {
                if (grid != "standard") throw error(errc::usage, "unknown grid: " + grid);
                if (grid_dir.empty()) throw error(errc::usage, "--grid requires --out-dir");
                fs::create_directories(grid_dir);
                for (const NamedScene& ns : standard_grid(grid_noise)) {
                    std::ofstream cfg(fs::path(grid_dir) / (ns.name + ".json"));
                    cfg << scene_to_json_text(ns.scene);
                }
                std::cerr << "wrote 100 scene configs to " << grid_dir << "\n";
                return 0;
            }
            if (scene_path.empty()) throw error(errc::usage, "synth needs --scene or --grid");
            const SyntheticScene scene = load_scene(scene_path);
            const GrayImage img = render_disk(scene);
            if (out_image.empty()) throw error(errc::usage, "synth needs --out-image");
            write_pgm_file(img, out_image);
            const EllipseGeom gt = scene_ellipse(scene);
            nlohmann::ordered_json j;
            j["schema"] = 1;
            j["scene"] = nlohmann::ordered_json::parse(scene_to_json_text(scene));
            j["gt"] = {{"center",
                        {scene.sphere.center.x(), scene.sphere.center.y(),
                         scene.sphere.center.z()}},
                       {"radius", scene.sphere.radius},
                       {"ellipse",
                        {{"cx", gt.cx}, {"cy", gt.cy}, {"a", gt.a}, {"b", gt.b},
                         {"angle", gt.angle}}}};
            emit(j.dump(2) + "\n", out_gt);
            return 0;
        }

        if (*evalc) {
            std::vector<NamedScene> scenes;
            if (!fs::is_directory(eval_dir)) {
                throw error(errc::usage, "not a directory: " + eval_dir);
            }
            std::vector<fs::path> files;
            for (const auto& entry : fs::directory_iterator(eval_dir)) {
                if (entry.path().extension() == ".json") files.push_back(entry.path());
            }
            std::sort(files.begin(), files.end());
            for (const fs::path& p : files) {
                scenes.push_back({p.stem().string(), load_scene(p.string())});
            }
            if (scenes.empty()) throw error(errc::usage, "no scene configs in " + eval_dir);
            DetectOptions opts;
            opts.seed = eval_seed;
            opts.iterations = eval_iterations;
            opts.threads = eval_threads;
            const BatchReport report = run_batch(scenes, opts);
            emit(batch_json(report), eval_out);
            std::cerr << report.succeeded << "/" << report.scenes.size() << " scenes succeeded\n";
            return 0;
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
