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

#include "mlidar/pnm.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <string>

namespace mlidar::pnm {
namespace {

[[noreturn]] void Malformed(const std::string& name, const std::string& what) {
  throw Error(ErrorCode::kMalformedHeader, name + ": " + what);
}

void SkipSpaceAndComments(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (c != EOF && std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

int ReadHeaderInt(std::istream& in, const std::string& name, const char* what) {
  SkipSpaceAndComments(in);
  long value = 0;
  int digits = 0;
  while (std::isdigit(in.peek())) {
    value = value * 10 + (in.get() - '0');
    if (value > 1 << 24) Malformed(name, std::string(what) + " too large");
    ++digits;
  }
  if (digits == 0) Malformed(name, std::string("missing ") + what);
  return static_cast<int>(value);
}

std::ifstream OpenIn(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kMissingFile, "cannot open " + path.string());
  }
  return in;
}

std::ofstream OpenOut(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kMissingFile, "cannot write " + path.string());
  }
  return out;
}

}  // namespace

Header ReadHeader(std::istream& in, const std::string& name) {
  Header h;
  if (in.get() != 'P') Malformed(name, "bad magic");
  const int kind = in.get();
  if (kind != '5' && kind != '6') Malformed(name, "expected P5 or P6");
  h.kind = static_cast<char>(kind);
  h.width = ReadHeaderInt(in, name, "width");
  h.height = ReadHeaderInt(in, name, "height");
  h.maxval = ReadHeaderInt(in, name, "maxval");
  // Exactly one whitespace byte separates the header from the raster.
  if (!std::isspace(in.get())) Malformed(name, "missing raster separator");
  if (h.width <= 0 || h.height <= 0) Malformed(name, "empty image");
  return h;
}

RgbImage ReadPpm(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  const std::string name = path.string();
  const Header h = ReadHeader(in, name);
  if (h.kind != '6') Malformed(name, "expected P6");
  if (h.maxval != 255) Malformed(name, "expected maxval 255");
  RgbImage img(h.width, h.height, 3);
  in.read(reinterpret_cast<char*>(img.data().data()),
          static_cast<std::streamsize>(img.data().size()));
  if (in.gcount() != static_cast<std::streamsize>(img.data().size())) {
    Malformed(name, "truncated raster");
  }
  return img;
}

void WritePpm(const std::filesystem::path& path, const RgbImage& image) {
  if (image.channels() != 3) {
    throw Error(ErrorCode::kInvalidArgument, "PPM needs 3 channels");
  }
  auto out = OpenOut(path);
  out << "P6\n" << image.width() << ' ' << image.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.data().data()),
            static_cast<std::streamsize>(image.data().size()));
}

Image<std::uint16_t> ReadPgm16(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  const std::string name = path.string();
  const Header h = ReadHeader(in, name);
  if (h.kind != '5') Malformed(name, "expected P5");
  if (h.maxval != 65535) Malformed(name, "expected maxval 65535");
  Image<std::uint16_t> img(h.width, h.height, 1);
  std::vector<unsigned char> raw(img.pixel_count() * 2);
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
    Malformed(name, "truncated raster");
  }
  auto& d = img.data();
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = static_cast<std::uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1]);
  }
  return img;
}

void WritePgm16(const std::filesystem::path& path,
                const Image<std::uint16_t>& image) {
  auto out = OpenOut(path);
  out << "P5\n" << image.width() << ' ' << image.height() << "\n65535\n";
  std::vector<unsigned char> raw(image.pixel_count() * 2);
  const auto& d = image.data();
  for (std::size_t i = 0; i < d.size(); ++i) {
    raw[2 * i] = static_cast<unsigned char>(d[i] >> 8);
    raw[2 * i + 1] = static_cast<unsigned char>(d[i] & 0xff);
  }
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
}

Image<std::uint16_t> DepthToMillimeters(const DepthMap& depth) {
  Image<std::uint16_t> mm(depth.width(), depth.height(), 1);
  for (std::size_t i = 0; i < mm.data().size(); ++i) {
    const double v = depth.data()[i];
    if (!(v > 0.0)) continue;
    const double q = std::round(v * 1000.0);
    mm.data()[i] = static_cast<std::uint16_t>(q > 65535.0 ? 65535.0 : q);
  }
  return mm;
}

DepthMap MillimetersToDepth(const Image<std::uint16_t>& mm) {
  DepthMap depth(mm.width(), mm.height(), 1);
  for (std::size_t i = 0; i < mm.data().size(); ++i) {
    depth.data()[i] = mm.data()[i] / 1000.0;
  }
  return depth;
}

void WriteDepthPgm(const std::filesystem::path& path, const DepthMap& depth) {
  WritePgm16(path, DepthToMillimeters(depth));
}

DepthMap ReadDepthPgm(const std::filesystem::path& path) {
  return MillimetersToDepth(ReadPgm16(path));
}

}  // namespace mlidar::pnm
