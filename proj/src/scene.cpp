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

#include "mlidar/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>

#include "mlidar/pnm.hpp"

namespace mlidar {
namespace fs = std::filesystem;
using nlohmann::json;

void Intrinsics::Validate() const {
  if (width <= 0 || height <= 0 || !(fx > 0.0) || !(fy > 0.0) ||
      !std::isfinite(cx) || !std::isfinite(cy)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid camera intrinsics");
  }
}

Intrinsics Intrinsics::FromHorizontalFov(int width, int height,
                                         double fov_rad) {
  Intrinsics k;
  k.width = width;
  k.height = height;
  k.fx = (width / 2.0) / std::tan(fov_rad / 2.0);
  k.fy = k.fx;
  k.cx = (width - 1) / 2.0;
  k.cy = (height - 1) / 2.0;
  k.Validate();
  return k;
}

Direction Intrinsics::DirectionOf(double x, double y) const {
  return {std::atan((x - cx) / fx), std::atan((y - cy) / fy)};
}

void Intrinsics::Project(const Direction& d, double& x, double& y) const {
  x = cx + fx * std::tan(d.theta);
  y = cy + fy * std::tan(d.phi);
}

bool Intrinsics::PixelOf(const Direction& d, int& x, int& y) const {
  double px = 0.0;
  double py = 0.0;
  Project(d, px, py);
  if (!(px >= -0.5 && px < width - 0.5 && py >= -0.5 && py < height - 0.5)) {
    return false;
  }
  x = static_cast<int>(std::floor(px + 0.5));
  y = static_cast<int>(std::floor(py + 0.5));
  return true;
}

double Intrinsics::horizontal_fov() const {
  return std::atan((cx + 0.5) / fx) + std::atan((width - 0.5 - cx) / fx);
}

void SceneSequence::Validate() const {
  meta.intrinsics.Validate();
  const int w = meta.intrinsics.width;
  const int h = meta.intrinsics.height;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto& f = frames[i];
    if (!f.rgb.same_shape(w, h) || !f.depth.same_shape(w, h) ||
        f.rgb.channels() != 3) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "frame " + FrameStem(f.index) + " does not match " +
                      std::to_string(w) + "x" + std::to_string(h));
    }
    if (i > 0 && !(f.timestamp_s > frames[i - 1].timestamp_s)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "frame timestamps must be strictly increasing");
    }
  }
}

std::string FrameStem(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d", index);
  return buf;
}

namespace {

SceneMeta ParseMeta(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingFile, "missing " + path.string());
  json j;
  try {
    in >> j;
    SceneMeta m;
    m.intrinsics.width = j.at("width").get<int>();
    m.intrinsics.height = j.at("height").get<int>();
    m.intrinsics.fx = j.at("fx_px").get<double>();
    m.intrinsics.fy = j.at("fy_px").get<double>();
    m.intrinsics.cx = j.at("cx_px").get<double>();
    m.intrinsics.cy = j.at("cy_px").get<double>();
    m.fps = j.at("fps").get<double>();
    m.z_max_m = j.at("z_max_m").get<double>();
    m.mirror_fov_deg = j.at("mirror_fov_deg").get<double>();
    m.intrinsics.Validate();
    if (!(m.fps > 0.0) || !(m.z_max_m > 0.0) || !(m.mirror_fov_deg > 0.0)) {
      throw Error(ErrorCode::kMalformedHeader, path.string() + ": bad values");
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedHeader, path.string() + ": " + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kMalformedHeader) throw;
    throw Error(ErrorCode::kMalformedHeader, path.string() + ": " + e.what());
  }
}

bool ParseStem(const fs::path& p, int& index) {
  const std::string stem = p.stem().string();
  if (stem.empty() || stem.size() > 9) return false;
  if (!std::all_of(stem.begin(), stem.end(),
                   [](char c) { return c >= '0' && c <= '9'; })) {
    return false;
  }
  index = std::stoi(stem);
  return true;
}

}  // namespace

SceneSequence LoadScene(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::kMissingFile, "no scene directory " + dir.string());
  }
  SceneSequence seq;
  seq.meta = ParseMeta(dir / "meta.json");

  std::map<int, fs::path> ppm;
  std::map<int, fs::path> pgm;
  for (const auto& entry : fs::directory_iterator(dir)) {
    int index = 0;
    if (!entry.is_regular_file() || !ParseStem(entry.path(), index)) continue;
    const auto ext = entry.path().extension();
    if (ext == ".ppm") ppm[index] = entry.path();
    if (ext == ".pgm") pgm[index] = entry.path();
  }
  for (const auto& [index, path] : ppm) {
    if (!pgm.count(index)) {
      throw Error(ErrorCode::kMissingPair, path.string() + " has no depth .pgm");
    }
  }
  for (const auto& [index, path] : pgm) {
    if (!ppm.count(index)) {
      throw Error(ErrorCode::kMissingPair, path.string() + " has no RGB .ppm");
    }
  }

  const int w = seq.meta.intrinsics.width;
  const int h = seq.meta.intrinsics.height;
  for (const auto& [index, rgb_path] : ppm) {
    SceneFrame f;
    f.index = index;
    f.timestamp_s = index / seq.meta.fps;
    f.rgb = pnm::ReadPpm(rgb_path);
    f.depth = pnm::ReadDepthPgm(pgm.at(index));
    if (!f.rgb.same_shape(f.depth)) {
      throw Error(ErrorCode::kDimensionMismatch,
                  pgm.at(index).string() + " is " +
                      std::to_string(f.depth.width()) + "x" +
                      std::to_string(f.depth.height()) + " but " +
                      rgb_path.string() + " is " +
                      std::to_string(f.rgb.width()) + "x" +
                      std::to_string(f.rgb.height()));
    }
    if (!f.rgb.same_shape(w, h)) {
      throw Error(ErrorCode::kDimensionMismatch,
                  rgb_path.string() + " does not match meta.json dimensions");
    }
    seq.frames.push_back(std::move(f));
  }
  return seq;
}

void SaveScene(const fs::path& dir, const SceneSequence& scene) {
  scene.Validate();
  fs::create_directories(dir);
  const auto& k = scene.meta.intrinsics;
  json j = {{"width", k.width},       {"height", k.height},
            {"fps", scene.meta.fps},  {"z_max_m", scene.meta.z_max_m},
            {"fx_px", k.fx},          {"fy_px", k.fy},
            {"cx_px", k.cx},          {"cy_px", k.cy},
            {"mirror_fov_deg", scene.meta.mirror_fov_deg}};
  std::ofstream out(dir / "meta.json");
  if (!out) {
    throw Error(ErrorCode::kMissingFile, "cannot write " + dir.string());
  }
  out << j.dump(2) << '\n';
  for (const auto& f : scene.frames) {
    const std::string stem = FrameStem(f.index);
    pnm::WritePpm(dir / (stem + ".ppm"), f.rgb);
    pnm::WriteDepthPgm(dir / (stem + ".pgm"), f.depth);
  }
}

}  // namespace mlidar
