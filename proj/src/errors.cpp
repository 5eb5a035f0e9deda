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

#include "spherecal/errors.hpp"

namespace spherecal {

const char* errc_name(errc code) {
    switch (code) {
        case errc::usage: return "Usage";
        case errc::parse_error: return "ParseError";
        case errc::image_too_small: return "ImageTooSmall";
        case errc::no_edges: return "NoEdges";
        case errc::collinear_points: return "Collinear";
        case errc::too_few_points: return "TooFewPoints";
        case errc::no_circle_found: return "NoCircleFound";
        case errc::too_few_profile_points: return "TooFewProfilePoints";
        case errc::degenerate_input: return "DegenerateInput";
        case errc::no_ellipse_solution: return "NoEllipseSolution";
        case errc::no_consensus: return "NoConsensus";
        case errc::no_detection: return "NoDetection";
        case errc::degenerate_sphere: return "DegenerateSphere";
        case errc::not_an_ellipse: return "NotAnEllipse";
        case errc::point_not_on_conic: return "PointNotOnConic";
        case errc::sphere_too_close: return "SphereTooClose";
        case errc::cone_degenerate: return "ConeDegenerate";
        case errc::undefined_at_principal_point: return "UndefinedAtPrincipalPoint";
        case errc::rank_deficient: return "RankDeficient";
        case errc::diverged_behind_camera: return "DivergedBehindCamera";
        case errc::silhouette_outside_image: return "SilhouetteOutsideImage";
    }
    return "Unknown";
}

int exit_code_for(errc code) {
    switch (code) {
        case errc::usage:
            return 2;
        case errc::parse_error:
            return 3;
        case errc::image_too_small:
        case errc::no_edges:
        case errc::collinear_points:
        case errc::too_few_points:
        case errc::no_circle_found:
        case errc::too_few_profile_points:
        case errc::degenerate_input:
        case errc::no_ellipse_solution:
        case errc::no_consensus:
        case errc::no_detection:
            return 4;
        default:
            return 5;
    }
}

}  // namespace spherecal
