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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "spherecal/errors.hpp"

namespace spherecal {

/// 8-bit grayscale image, row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    std::uint8_t at(int u, int v) const { return pixels[static_cast<std::size_t>(v) * width + u]; }
    std::uint8_t& at(int u, int v) { return pixels[static_cast<std::size_t>(v) * width + u]; }

    static GrayImage filled(int width, int height, std::uint8_t value);
};

/// Reads a binary PGM (P5) or PPM (P6) with maxval 255. PPM input is
/// converted with BT.601 luma (0.299 R + 0.587 G + 0.114 B, rounded to
/// nearest). '#' comments are allowed in the header. Throws ParseError on
/// anything else.
GrayImage read_pnm(std::istream& in);
GrayImage read_pnm_file(const std::string& path);

/// Writes binary P5 with maxval 255.
void write_pgm(const GrayImage& img, std::ostream& out);
void write_pgm_file(const GrayImage& img, const std::string& path);

}  // namespace spherecal
