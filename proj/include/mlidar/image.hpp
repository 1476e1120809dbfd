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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mlidar/error.hpp"

namespace mlidar {

/// Row-major interleaved image. Pixel (x, y) channel c lives at
/// ((y * width + x) * channels + c).
template <typename T>
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels = 1, T fill = T{})
      : width_(width), height_(height), channels_(channels) {
    if (width < 0 || height < 0 || channels < 1) {
      throw Error(ErrorCode::kInvalidArgument, "bad image dimensions");
    }
    data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * height_;
  }
  bool empty() const { return data_.empty(); }

  bool contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }
  bool same_shape(int w, int h) const { return w == width_ && h == height_; }
  template <typename U>
  bool same_shape(const Image<U>& other) const {
    return other.width() == width_ && other.height() == height_;
  }

  T& at(int x, int y, int c = 0) { return data_[index(x, y, c)]; }
  const T& at(int x, int y, int c = 0) const { return data_[index(x, y, c)]; }

  std::span<T> row(int y) {
    return {data_.data() + index(0, y, 0),
            static_cast<std::size_t>(width_) * channels_};
  }
  std::span<const T> row(int y) const {
    return {data_.data() + index(0, y, 0),
            static_cast<std::size_t>(width_) * channels_};
  }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  bool operator==(const Image&) const = default;

 private:
  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 1;
  std::vector<T> data_;
};

using RgbImage = Image<std::uint8_t>;   // 3 channels
using GrayImage = Image<std::uint8_t>;  // 1 channel
using DepthMap = Image<double>;         // meters, 0 = invalid / unsampled
using Mask = Image<std::uint8_t>;       // nonzero = selected

/// Half-open pixel rectangle [x0, x1) x [y0, y1).
struct PixelRect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  long area() const {
    return empty() ? 0 : static_cast<long>(width()) * height();
  }
  bool empty() const { return x1 <= x0 || y1 <= y0; }
  bool contains(int x, int y) const {
    return x >= x0 && x < x1 && y >= y0 && y < y1;
  }
  bool within(int width, int height) const {
    return x0 >= 0 && y0 >= 0 && x1 <= width && y1 <= height && !empty();
  }
  bool operator==(const PixelRect&) const = default;
};

inline PixelRect Intersect(const PixelRect& a, const PixelRect& b) {
  PixelRect r{a.x0 > b.x0 ? a.x0 : b.x0, a.y0 > b.y0 ? a.y0 : b.y0,
              a.x1 < b.x1 ? a.x1 : b.x1, a.y1 < b.y1 ? a.y1 : b.y1};
  if (r.empty()) return {};
  return r;
}

inline double IntersectionOverUnion(const PixelRect& a, const PixelRect& b) {
  const long inter = Intersect(a, b).area();
  const long uni = a.area() + b.area() - inter;
  return uni > 0 ? static_cast<double>(inter) / uni : 0.0;
}

inline Mask MaskFromRect(int width, int height, const PixelRect& rect) {
  Mask mask(width, height, 1, 0);
  for (int y = rect.y0 < 0 ? 0 : rect.y0; y < rect.y1 && y < height; ++y) {
    for (int x = rect.x0 < 0 ? 0 : rect.x0; x < rect.x1 && x < width; ++x) {
      mask.at(x, y) = 1;
    }
  }
  return mask;
}

/// Integer luma, (77 R + 150 G + 29 B + 128) >> 8.
GrayImage ToGray(const RgbImage& rgb);

}  // namespace mlidar
