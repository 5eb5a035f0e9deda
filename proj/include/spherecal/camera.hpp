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

#include "spherecal/errors.hpp"

namespace spherecal {

/// Sub-pixel image location.
struct PixelPoint {
    double u = 0.0;
    double v = 0.0;
};

/// Point on the z = 1 plane in camera coordinates.
struct NormalizedPoint {
    double u = 0.0;
    double v = 0.0;
};

/// Pinhole camera parameters. `us`/`vs` are the horizontal/vertical pixel
/// scale factors used by the threshold model; square pixels are 1:1.
struct CameraIntrinsics {
    double fu = 1.0;
    double fv = 1.0;
    double u0 = 0.0;
    double v0 = 0.0;
    double us = 1.0;
    double vs = 1.0;

    bool valid() const { return fu > 0.0 && fv > 0.0 && us > 0.0 && vs > 0.0; }
};

inline NormalizedPoint normalize(PixelPoint p, const CameraIntrinsics& k) {
    return {(p.u - k.u0) / k.fu, (p.v - k.v0) / k.fv};
}

inline PixelPoint denormalize(NormalizedPoint p, const CameraIntrinsics& k) {
    return {k.fu * p.u + k.u0, k.fv * p.v + k.v0};
}

}  // namespace spherecal
