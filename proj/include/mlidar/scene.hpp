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
#include <vector>

#include "mlidar/image.hpp"

namespace mlidar {

/// Mirror direction: azimuth theta and elevation phi, radians.
struct Direction {
  double theta = 0.0;
  double phi = 0.0;
};

/// Pinhole intrinsics shared by the camera and the co-located mirror. Integer
/// pixel coordinates are pixel centers; the image spans [-0.5, W - 0.5].
struct Intrinsics {
  int width = 0;
  int height = 0;
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;

  void Validate() const;

  /// Square-pixel intrinsics with the principal point at the image center
  /// and the given horizontal apex FOV.
  static Intrinsics FromHorizontalFov(int width, int height, double fov_rad);

  Direction DirectionOf(double x, double y) const;
  /// Continuous pixel position of a direction.
  void Project(const Direction& d, double& x, double& y) const;
  /// Nearest pixel; false when the direction falls outside the image.
  bool PixelOf(const Direction& d, int& x, int& y) const;

  double horizontal_fov() const;
};

struct SceneMeta {
  Intrinsics intrinsics;
  double fps = 30.0;
  double z_max_m = 3.0;
  double mirror_fov_deg = 25.0;
};

struct SceneFrame {
  RgbImage rgb;
  DepthMap depth;  // meters, 0 = invalid
  int index = 0;
  double timestamp_s = 0.0;
};

struct SceneSequence {
  SceneMeta meta;
  std::vector<SceneFrame> frames;

  /// Checks shared dimensions, depth range and strictly increasing time.
  void Validate() const;
};

/// Loads NNNN.ppm / NNNN.pgm pairs plus meta.json from `dir`. Depth is stored
/// in millimeters and converted to meters.
SceneSequence LoadScene(const std::filesystem::path& dir);

/// Writes the layout LoadScene reads. Depth is quantized to 1 mm.
void SaveScene(const std::filesystem::path& dir, const SceneSequence& scene);

std::string FrameStem(int index);

}  // namespace mlidar
