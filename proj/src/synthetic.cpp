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

#include "mlidar/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mlidar/random.hpp"

namespace mlidar::synthetic {
namespace {

using nlohmann::json;

constexpr double kDegToRad = std::numbers::pi / 180.0;

struct Hit {
  double depth = std::numeric_limits<double>::infinity();
  double u = 0.0;  // texture coordinates on the hit face, meters
  double v = 0.0;
  int primitive = -1;
};

std::uint8_t Clamp8(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
}

std::array<std::uint8_t, 3> Shade(const Texture& tex, double u, double v,
                                  std::uint64_t cell_seed) {
  const long iu = static_cast<long>(std::floor(u / tex.cell_m));
  const long iv = static_cast<long>(std::floor(v / tex.cell_m));
  switch (tex.kind) {
    case TextureKind::kFlat:
      return tex.color_a;
    case TextureKind::kChecker:
      return ((iu + iv) & 1) ? tex.color_b : tex.color_a;
    case TextureKind::kNoise: {
      const std::uint64_t h = MixSeed(
          MixSeed(cell_seed, static_cast<std::uint64_t>(iu)),
          static_cast<std::uint64_t>(iv));
      const double n = (static_cast<double>(h >> 11) * 0x1.0p-53) * 2.0 - 1.0;
      const double shift = n * tex.noise_amplitude;
      return {Clamp8(tex.color_a[0] + shift), Clamp8(tex.color_a[1] + shift),
              Clamp8(tex.color_a[2] + shift)};
    }
  }
  return tex.color_a;
}

// Ray through the pixel is (dx, dy, 1); the returned depth is the hit's z.
void Intersect(const Primitive& p, const std::array<double, 3>& offset,
               double dx, double dy, int index, Hit& best) {
  const double ox = offset[0];
  const double oy = offset[1];
  const double oz = offset[2];
  switch (p.kind) {
    case PrimitiveKind::kPlane: {
      const double z = p.z0 + oz;
      if (z > 0.0 && z < best.depth) {
        best = {z, dx * z - ox, dy * z - oy, index};
      }
      return;
    }
    case PrimitiveKind::kQuad: {
      const double z = p.z0 + oz;
      if (!(z > 0.0) || z >= best.depth) return;
      const double x = dx * z;
      const double y = dy * z;
      if (x >= p.x0 + ox && x <= p.x1 + ox && y >= p.y0 + oy &&
          y <= p.y1 + oy) {
        best = {z, x - (p.x0 + ox), y - (p.y0 + oy), index};
      }
      return;
    }
    case PrimitiveKind::kBox: {
      const double lo[3] = {p.x0 + ox, p.y0 + oy, p.z0 + oz};
      const double hi[3] = {p.x1 + ox, p.y1 + oy, p.z1 + oz};
      const double dir[3] = {dx, dy, 1.0};
      double t_near = -std::numeric_limits<double>::infinity();
      double t_far = std::numeric_limits<double>::infinity();
      int axis = -1;
      for (int a = 0; a < 3; ++a) {
        if (dir[a] == 0.0) {
          if (lo[a] > 0.0 || hi[a] < 0.0) return;
          continue;
        }
        double t0 = lo[a] / dir[a];
        double t1 = hi[a] / dir[a];
        if (t0 > t1) std::swap(t0, t1);
        if (t0 > t_near) {
          t_near = t0;
          axis = a;
        }
        t_far = std::min(t_far, t1);
      }
      if (axis < 0 || t_near > t_far || !(t_near > 0.0) ||
          t_near >= best.depth) {
        return;
      }
      const double x = dx * t_near - lo[0];
      const double y = dy * t_near - lo[1];
      const double z = t_near - lo[2];
      if (axis == 2) best = {t_near, x, y, index};
      if (axis == 0) best = {t_near, z, y, index};
      if (axis == 1) best = {t_near, x, z, index};
      return;
    }
  }
}

}  // namespace

Intrinsics SyntheticSpec::intrinsics() const {
  return Intrinsics::FromHorizontalFov(width, height,
                                       camera_fov_deg * kDegToRad);
}

SceneSequence Generate(const SyntheticSpec& spec, std::uint64_t seed) {
  if (spec.frames < 1 || !(spec.fps > 0.0) || !(spec.z_max_m > 0.0) ||
      spec.z_max_m > 65.535) {
    throw Error(ErrorCode::kInvalidArgument, "invalid synthetic scene spec");
  }
  SceneSequence seq;
  seq.meta.intrinsics = spec.intrinsics();
  seq.meta.fps = spec.fps;
  seq.meta.z_max_m = spec.z_max_m;
  seq.meta.mirror_fov_deg = spec.mirror_fov_deg;
  const Intrinsics& k = seq.meta.intrinsics;

  std::vector<std::uint64_t> cell_seeds;
  for (std::size_t i = 0; i < spec.primitives.size(); ++i) {
    cell_seeds.push_back(MixSeed(seed, i));
  }

  std::size_t visible = 0;
  for (int t = 0; t < spec.frames; ++t) {
    SceneFrame frame;
    frame.index = t;
    frame.timestamp_s = t / spec.fps;
    frame.rgb = RgbImage(k.width, k.height, 3, 0);
    frame.depth = DepthMap(k.width, k.height, 1, 0.0);
    for (int y = 0; y < k.height; ++y) {
      const double dy = (y - k.cy) / k.fy;
      for (int x = 0; x < k.width; ++x) {
        const double dx = (x - k.cx) / k.fx;
        Hit best;
        for (std::size_t i = 0; i < spec.primitives.size(); ++i) {
          const auto& p = spec.primitives[i];
          const std::array<double, 3> offset{p.velocity_m_per_frame[0] * t,
                                             p.velocity_m_per_frame[1] * t,
                                             p.velocity_m_per_frame[2] * t};
          Intersect(p, offset, dx, dy, static_cast<int>(i), best);
        }
        if (best.primitive < 0) continue;
        const auto color =
            Shade(spec.primitives[best.primitive].texture, best.u, best.v,
                  cell_seeds[best.primitive]);
        for (int c = 0; c < 3; ++c) frame.rgb.at(x, y, c) = color[c];
        const double z = std::round(best.depth * 1000.0) / 1000.0;
        if (z > 0.0 && z <= spec.z_max_m) {
          frame.depth.at(x, y) = z;
          ++visible;
        }
      }
    }
    seq.frames.push_back(std::move(frame));
  }
  if (visible == 0) {
    throw Error(ErrorCode::kEmptyScene,
                "no primitive intersects the view frustum within z_max");
  }
  return seq;
}

// --- JSON -----------------------------------------------------------------

namespace {

const char* KindName(PrimitiveKind k) {
  switch (k) {
    case PrimitiveKind::kPlane: return "plane";
    case PrimitiveKind::kQuad: return "quad";
    case PrimitiveKind::kBox: return "box";
  }
  return "plane";
}

const char* TextureName(TextureKind k) {
  switch (k) {
    case TextureKind::kFlat: return "flat";
    case TextureKind::kChecker: return "checker";
    case TextureKind::kNoise: return "noise";
  }
  return "flat";
}

}  // namespace

json ToJson(const SyntheticSpec& spec) {
  json prims = json::array();
  for (const auto& p : spec.primitives) {
    prims.push_back({{"kind", KindName(p.kind)},
                     {"x", {p.x0, p.x1}},
                     {"y", {p.y0, p.y1}},
                     {"z", {p.z0, p.z1}},
                     {"velocity_m_per_frame", p.velocity_m_per_frame},
                     {"texture",
                      {{"kind", TextureName(p.texture.kind)},
                       {"color_a", p.texture.color_a},
                       {"color_b", p.texture.color_b},
                       {"cell_m", p.texture.cell_m},
                       {"noise_amplitude", p.texture.noise_amplitude}}}});
  }
  return {{"width", spec.width},
          {"height", spec.height},
          {"camera_fov_deg", spec.camera_fov_deg},
          {"mirror_fov_deg", spec.mirror_fov_deg},
          {"frames", spec.frames},
          {"fps", spec.fps},
          {"z_max_m", spec.z_max_m},
          {"primitives", prims}};
}

SyntheticSpec FromJson(const json& j) {
  try {
    SyntheticSpec s;
    s.width = j.value("width", s.width);
    s.height = j.value("height", s.height);
    s.camera_fov_deg = j.value("camera_fov_deg", s.camera_fov_deg);
    s.mirror_fov_deg = j.value("mirror_fov_deg", s.mirror_fov_deg);
    s.frames = j.value("frames", s.frames);
    s.fps = j.value("fps", s.fps);
    s.z_max_m = j.value("z_max_m", s.z_max_m);
    for (const auto& jp : j.at("primitives")) {
      Primitive p;
      const std::string kind = jp.at("kind").get<std::string>();
      if (kind == "plane") {
        p.kind = PrimitiveKind::kPlane;
      } else if (kind == "quad") {
        p.kind = PrimitiveKind::kQuad;
      } else if (kind == "box") {
        p.kind = PrimitiveKind::kBox;
      } else {
        throw Error(ErrorCode::kInvalidArgument, "unknown primitive " + kind);
      }
      if (jp.contains("x")) {
        p.x0 = jp["x"].at(0).get<double>();
        p.x1 = jp["x"].at(1).get<double>();
      }
      if (jp.contains("y")) {
        p.y0 = jp["y"].at(0).get<double>();
        p.y1 = jp["y"].at(1).get<double>();
      }
      if (jp.contains("z")) {
        p.z0 = jp["z"].at(0).get<double>();
        p.z1 = jp["z"].size() > 1 ? jp["z"].at(1).get<double>() : p.z0;
      }
      if (jp.contains("velocity_m_per_frame")) {
        p.velocity_m_per_frame =
            jp["velocity_m_per_frame"].get<std::array<double, 3>>();
      }
      if (jp.contains("texture")) {
        const auto& jt = jp["texture"];
        const std::string tk = jt.value("kind", std::string("flat"));
        if (tk == "flat") {
          p.texture.kind = TextureKind::kFlat;
        } else if (tk == "checker") {
          p.texture.kind = TextureKind::kChecker;
        } else if (tk == "noise") {
          p.texture.kind = TextureKind::kNoise;
        } else {
          throw Error(ErrorCode::kInvalidArgument, "unknown texture " + tk);
        }
        if (jt.contains("color_a")) {
          p.texture.color_a = jt["color_a"].get<std::array<std::uint8_t, 3>>();
        }
        if (jt.contains("color_b")) {
          p.texture.color_b = jt["color_b"].get<std::array<std::uint8_t, 3>>();
        }
        p.texture.cell_m = jt.value("cell_m", p.texture.cell_m);
        p.texture.noise_amplitude =
            jt.value("noise_amplitude", p.texture.noise_amplitude);
        if (!(p.texture.cell_m > 0.0)) {
          throw Error(ErrorCode::kInvalidArgument, "texture cell must be > 0");
        }
      }
      s.primitives.push_back(p);
    }
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("bad scene spec: ") + e.what());
  }
}

// --- Presets --------------------------------------------------------------

SyntheticSpec FrontoPlane(double z_m, int width, int height) {
  SyntheticSpec s;
  s.width = width;
  s.height = height;
  s.z_max_m = std::max(3.0, z_m);
  Primitive p;
  p.kind = PrimitiveKind::kPlane;
  p.z0 = p.z1 = z_m;
  p.texture.kind = TextureKind::kChecker;
  p.texture.color_a = {200, 200, 200};
  p.texture.color_b = {60, 60, 60};
  p.texture.cell_m = 0.1;
  s.primitives.push_back(p);
  return s;
}

SyntheticSpec TwoPlanes(double near_m, double far_m, int width, int height) {
  SyntheticSpec s = FrontoPlane(far_m, width, height);
  s.z_max_m = std::max(s.z_max_m, near_m);
  Primitive q;
  q.kind = PrimitiveKind::kQuad;
  q.z0 = q.z1 = near_m;
  // Left half of the view at near_m: x in [-big, 0].
  q.x0 = -10.0 * near_m;
  q.x1 = 0.0;
  q.y0 = -10.0 * near_m;
  q.y1 = 10.0 * near_m;
  q.texture.kind = TextureKind::kFlat;
  q.texture.color_a = {220, 60, 40};
  s.primitives.push_back(q);
  return s;
}

SyntheticSpec MovingBox(int frames, int px_per_frame, int box_px, int width,
                        int height) {
  SyntheticSpec s;
  s.width = width;
  s.height = height;
  s.frames = frames;
  s.z_max_m = 3.0;
  const Intrinsics k = s.intrinsics();

  Primitive back;
  back.kind = PrimitiveKind::kPlane;
  back.z0 = back.z1 = 2.5;
  back.texture.kind = TextureKind::kNoise;
  back.texture.color_a = {60, 60, 60};
  back.texture.noise_amplitude = 15.0;
  back.texture.cell_m = 0.04;
  s.primitives.push_back(back);

  const double z = 1.5;
  const double size = box_px * z / k.fx;
  Primitive box;
  box.kind = PrimitiveKind::kQuad;
  box.z0 = box.z1 = z;
  // Starts just outside the left image edge so the first frame shows only
  // the backdrop; vertically centered.
  box.x0 = ((-box_px - 0.5) - k.cx) * z / k.fx;
  box.x1 = box.x0 + size;
  box.y0 = -size / 2.0;
  box.y1 = size / 2.0;
  box.texture.kind = TextureKind::kFlat;
  box.texture.color_a = {170, 170, 170};
  box.velocity_m_per_frame = {px_per_frame * z / k.fx, 0.0, 0.0};
  s.primitives.push_back(box);
  return s;
}

SyntheticSpec RandomClutter(std::uint64_t seed, int width, int height) {
  Rng rng(MixSeed(seed, 0xc1u));
  SyntheticSpec s;
  s.width = width;
  s.height = height;
  s.z_max_m = 3.0;
  const Intrinsics k = s.intrinsics();

  auto random_color = [&] {
    return std::array<std::uint8_t, 3>{
        static_cast<std::uint8_t>(40 + rng.Uniform() * 200),
        static_cast<std::uint8_t>(40 + rng.Uniform() * 200),
        static_cast<std::uint8_t>(40 + rng.Uniform() * 200)};
  };

  Primitive back;
  back.kind = PrimitiveKind::kPlane;
  back.z0 = back.z1 = 2.6 + 0.35 * rng.Uniform();
  back.texture.kind = TextureKind::kNoise;
  back.texture.color_a = random_color();
  back.texture.noise_amplitude = 20.0;
  back.texture.cell_m = 0.08;
  s.primitives.push_back(back);

  // Floor slab and one side wall give surfaces whose depth varies across
  // the image.
  Primitive floor;
  floor.kind = PrimitiveKind::kBox;
  floor.x0 = -3.0;
  floor.x1 = 3.0;
  floor.y0 = 0.16 + 0.08 * rng.Uniform();
  floor.y1 = floor.y0 + 0.05;
  floor.z0 = 0.3;
  floor.z1 = back.z0;
  floor.texture.kind = TextureKind::kChecker;
  floor.texture.color_a = random_color();
  floor.texture.color_b = random_color();
  floor.texture.cell_m = 0.15;
  s.primitives.push_back(floor);

  Primitive wall;
  wall.kind = PrimitiveKind::kBox;
  const double wall_x = 0.3 + 0.15 * rng.Uniform();
  const bool left = rng.Uniform() < 0.5;
  wall.x0 = left ? -wall_x - 0.05 : wall_x;
  wall.x1 = wall.x0 + 0.05;
  wall.y0 = -3.0;
  wall.y1 = 3.0;
  wall.z0 = 0.3;
  wall.z1 = back.z0;
  wall.texture.kind = TextureKind::kNoise;
  wall.texture.color_a = random_color();
  wall.texture.noise_amplitude = 20.0;
  wall.texture.cell_m = 0.1;
  s.primitives.push_back(wall);

  const int objects = 4 + static_cast<int>(rng.Uniform() * 4);
  for (int i = 0; i < objects; ++i) {
    Primitive p;
    const bool box = rng.Uniform() < 0.5;
    p.kind = box ? PrimitiveKind::kBox : PrimitiveKind::kQuad;
    const double z = 0.8 + 1.6 * rng.Uniform();
    // Pixel-space placement converted to meters at depth z.
    const double w_px = width * (0.12 + 0.3 * rng.Uniform());
    const double h_px = height * (0.12 + 0.3 * rng.Uniform());
    const double x_px = rng.Uniform() * (width - w_px);
    const double y_px = rng.Uniform() * (height - h_px);
    p.x0 = (x_px - k.cx) * z / k.fx;
    p.x1 = (x_px + w_px - k.cx) * z / k.fx;
    p.y0 = (y_px - k.cy) * z / k.fy;
    p.y1 = (y_px + h_px - k.cy) * z / k.fy;
    p.z0 = z;
    p.z1 = z + (box ? 0.1 + 0.3 * rng.Uniform() : 0.0);
    const double t = rng.Uniform();
    p.texture.kind = t < 0.4   ? TextureKind::kFlat
                     : t < 0.7 ? TextureKind::kChecker
                               : TextureKind::kNoise;
    p.texture.color_a = random_color();
    p.texture.color_b = random_color();
    p.texture.cell_m = 0.03 + 0.05 * rng.Uniform();
    p.texture.noise_amplitude = 30.0;
    s.primitives.push_back(p);
  }
  return s;
}

}  // namespace mlidar::synthetic
