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

#include "mlidar/image.hpp"

namespace mlidar {

GrayImage ToGray(const RgbImage& rgb) {
  if (rgb.channels() != 3) {
    throw Error(ErrorCode::kInvalidArgument, "ToGray expects a 3-channel image");
  }
  GrayImage gray(rgb.width(), rgb.height(), 1);
  const auto& src = rgb.data();
  auto& dst = gray.data();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const unsigned r = src[3 * i];
    const unsigned g = src[3 * i + 1];
    const unsigned b = src[3 * i + 2];
    dst[i] = static_cast<std::uint8_t>((77 * r + 150 * g + 29 * b + 128) >> 8);
  }
  return gray;
}

}  // namespace mlidar
