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

#include <stdexcept>
#include <string>

namespace spherecal {

enum class errc {
    usage,
    parse_error,
    image_too_small,
    no_edges,
    collinear_points,
    too_few_points,
    no_circle_found,
    too_few_profile_points,
    degenerate_input,
    no_ellipse_solution,
    no_consensus,
    no_detection,
    degenerate_sphere,
    not_an_ellipse,
    point_not_on_conic,
    sphere_too_close,
    cone_degenerate,
    undefined_at_principal_point,
    rank_deficient,
    diverged_behind_camera,
    silhouette_outside_image,
};

const char* errc_name(errc code);

/// All recoverable failures carry a machine-readable code plus a context message.
class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const { return code_; }

private:
    errc code_;
};

/// Process exit code groups used by the command-line tool.
int exit_code_for(errc code);

}  // namespace spherecal
