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

#include <array>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <vector>

#include "mlidar/scene.hpp"

namespace mlidar::synthetic {

enum class TextureKind { kFlat, kChecker, kNoise };

struct Texture {
  TextureKind kind = TextureKind::kFlat;
  std::array<std::uint8_t, 3> color_a{128, 128, 128};
  std::array<std::uint8_t, 3> color_b{32, 32, 32};  // second checker color
  double cell_m = 0.05;                             // checker / noise cell
  double noise_amplitude = 60.0;                    // gray levels, +-
};

enum class PrimitiveKind {
  kPlane,  // fronto-parallel, infinite, at z0
  kQuad,   // fronto-parallel rectangle [x0, x1] x [y0, y1] at z0
  kBox,    // axis-aligned box [x0, x1] x [y0, y1] x [z0, z1]
};

/// Geometry in camera coordinates (meters, +z forward, +y down), positions
/// at frame 0. Each primitive translates by `velocity` every frame.
struct Primitive {
  PrimitiveKind kind = PrimitiveKind::kPlane;
  double x0 = 0.0, x1 = 0.0;
  double y0 = 0.0, y1 = 0.0;
  double z0 = 1.0, z1 = 1.0;
  Texture texture;
  std::array<double, 3> velocity_m_per_frame{0.0, 0.0, 0.0};
};

struct SyntheticSpec {
  int width = 160;
  int height = 120;
  double camera_fov_deg = 25.0;  // horizontal apex
  double mirror_fov_deg = 25.0;
  int frames = 1;
  double fps = 30.0;
  double z_max_m = 3.0;
  std::vector<Primitive> primitives;

  Intrinsics intrinsics() const;
};

/// Z-buffer render of every frame. Depth is quantized to 1 mm; anything
/// beyond z_max or hitting nothing is 0. Throws EmptyScene when no primitive
/// is visible in any frame. Deterministic in (spec, seed).
SceneSequence Generate(const SyntheticSpec& spec, std::uint64_t seed);

nlohmann::json ToJson(const SyntheticSpec& spec);
SyntheticSpec FromJson(const nlohmann::json& j);

// Presets used by the CLI and the test suites.

/// One textured fronto-parallel plane at `z_m` filling the view.
SyntheticSpec FrontoPlane(double z_m, int width = 160, int height = 120);

/// Near quad covering the left half at `near_m` over a far plane at `far_m`.
SyntheticSpec TwoPlanes(double near_m, double far_m, int width = 160,
                        int height = 120);

/// Bright box moving `px_per_frame` to the right over a textured backdrop.
/// The box is `box_px` pixels square at depth 1.5 m and enters from the left
/// after the first frame.
SyntheticSpec MovingBox(int frames, int px_per_frame, int box_px = 64,
                        int width = 320, int height = 240);

/// Textured backdrop plus several colored boxes and quads at random depths.
SyntheticSpec RandomClutter(std::uint64_t seed, int width = 160,
                            int height = 120);

}  // namespace mlidar::synthetic
