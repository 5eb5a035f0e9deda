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

#include "spherecal/image.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

namespace spherecal {

GrayImage GrayImage::filled(int width, int height, std::uint8_t value) {
    GrayImage img;
    img.width = width;
    img.height = height;
    img.pixels.assign(static_cast<std::size_t>(width) * height, value);
    return img;
}

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
    std::string tok;
    int ch;
    while ((ch = in.get()) != std::char_traits<char>::eof()) {
        if (ch == '#') {
            while (ch != '\n' && ch != std::char_traits<char>::eof()) ch = in.get();
            continue;
        }
        if (std::isspace(ch)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(static_cast<char>(ch));
    }
    return tok;
}

int parse_positive(const std::string& tok, const char* what) {
    if (tok.empty()) throw error(errc::parse_error, std::string("missing ") + what);
    long value = 0;
    for (char c : tok) {
        if (c < '0' || c > '9') {
            throw error(errc::parse_error, std::string("non-numeric ") + what);
        }
        value = value * 10 + (c - '0');
        if (value > std::numeric_limits<int>::max()) {
            throw error(errc::parse_error, std::string("overflow in ") + what);
        }
    }
    if (value <= 0) throw error(errc::parse_error, std::string("non-positive ") + what);
    return static_cast<int>(value);
}

}  // namespace

GrayImage read_pnm(std::istream& in) {
    const std::string magic = next_token(in);
    if (magic != "P5" && magic != "P6") {
        throw error(errc::parse_error, "expected binary PGM (P5) or PPM (P6) magic");
    }
    const int width = parse_positive(next_token(in), "width");
    const int height = parse_positive(next_token(in), "height");
    const int maxval = parse_positive(next_token(in), "maxval");
    if (maxval != 255) {
        throw error(errc::parse_error, "only maxval 255 is supported");
    }
    // Exactly one whitespace byte separates the header from raster data; the
    // token reader has already consumed it.

    GrayImage img;
    img.width = width;
    img.height = height;
    const std::size_t count = static_cast<std::size_t>(width) * height;

    if (magic == "P5") {
        img.pixels.resize(count);
        in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(count));
        if (static_cast<std::size_t>(in.gcount()) != count) {
            throw error(errc::parse_error, "truncated PGM raster");
        }
    } else {
        std::vector<std::uint8_t> rgb(count * 3);
        in.read(reinterpret_cast<char*>(rgb.data()), static_cast<std::streamsize>(rgb.size()));
        if (static_cast<std::size_t>(in.gcount()) != rgb.size()) {
            throw error(errc::parse_error, "truncated PPM raster");
        }
        img.pixels.resize(count);
        for (std::size_t i = 0; i < count; ++i) {
            const double y = 0.299 * rgb[3 * i] + 0.587 * rgb[3 * i + 1] + 0.114 * rgb[3 * i + 2];
            img.pixels[i] = static_cast<std::uint8_t>(std::lround(y));
        }
    }
    return img;
}

GrayImage read_pnm_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error(errc::parse_error, "cannot open image file: " + path);
    return read_pnm(in);
}

void write_pgm(const GrayImage& img, std::ostream& out) {
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
}

void write_pgm_file(const GrayImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error(errc::parse_error, "cannot open output file: " + path);
    write_pgm(img, out);
}

}  // namespace spherecal
