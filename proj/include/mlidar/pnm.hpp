// Copyright 2026 The mlidar Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <iosfwd>

#include "mlidar/image.hpp"

namespace mlidar::pnm {

// Binary PNM codecs. Only the two variants the scene format uses are
// supported: P6 RGB with maxval 255, and P5 gray with maxval 65535 stored
// big-endian. Header errors throw MalformedHeader naming the file.

RgbImage ReadPpm(const std::filesystem::path& path);
void WritePpm(const std::filesystem::path& path, const RgbImage& image);

Image<std::uint16_t> ReadPgm16(const std::filesystem::path& path);
void WritePgm16(const std::filesystem::path& path,
                const Image<std::uint16_t>& image);

/// Width and height from a P5/P6 header without reading the raster.
struct Header {
  char kind = 0;  // '5' or '6'
  int width = 0;
  int height = 0;
  int maxval = 0;
};
Header ReadHeader(std::istream& in, const std::string& name);

/// Depth in meters <-> 16-bit millimeters. 0 stays 0; values are rounded to
/// the nearest millimeter and clamped to 65535.
Image<std::uint16_t> DepthToMillimeters(const DepthMap& depth);
DepthMap MillimetersToDepth(const Image<std::uint16_t>& mm);

void WriteDepthPgm(const std::filesystem::path& path, const DepthMap& depth);
DepthMap ReadDepthPgm(const std::filesystem::path& path);

}  // namespace mlidar::pnm
