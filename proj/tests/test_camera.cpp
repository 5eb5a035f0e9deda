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

#include "spherecal/camera.hpp"
#include "spherecal/rng.hpp"

using namespace spherecal;

TEST_CASE("normalize maps the principal point to the origin") {
    CameraIntrinsics k{100.0, 120.0, 320.0, 240.0, 1.0, 1.0};
    const NormalizedPoint n = normalize({320.0, 240.0}, k);
    CHECK(n.u == 0.0);
    CHECK(n.v == 0.0);

    const NormalizedPoint one = normalize({320.0 + 100.0, 240.0}, k);
    CHECK(one.u == doctest::Approx(1.0));
    CHECK(one.v == 0.0);
}

TEST_CASE("normalize with narrow-field intrinsics") {
    CameraIntrinsics k{4529.0, 4529.0, 659.0, 619.0, 1.0, 1.0};
    const NormalizedPoint n = normalize({659.0, 619.0}, k);
    CHECK(n.u == 0.0);
    CHECK(n.v == 0.0);
}

TEST_CASE("denormalize basics") {
    CameraIntrinsics k{2.0, 4.0, 10.0, 20.0, 1.0, 1.0};
    const PixelPoint p0 = denormalize({0.0, 0.0}, k);
    CHECK(p0.u == 10.0);
    CHECK(p0.v == 20.0);

    const PixelPoint p1 = denormalize({1.0, 1.0}, k);
    CHECK(p1.u == doctest::Approx(12.0));
    CHECK(p1.v == doctest::Approx(24.0));
}

TEST_CASE("normalize/denormalize round-trip on random points") {
    SplitMix64 rng(7);
    CameraIntrinsics k{812.5, 790.25, 331.0, 251.5, 1.0, 1.0};
    for (int i = 0; i < 200; ++i) {
        const PixelPoint p{rng.next_range(-2000.0, 2000.0), rng.next_range(-2000.0, 2000.0)};
        const PixelPoint back = denormalize(normalize(p, k), k);
        CHECK(back.u == doctest::Approx(p.u).epsilon(1e-12));
        CHECK(back.v == doctest::Approx(p.v).epsilon(1e-12));
    }
}
