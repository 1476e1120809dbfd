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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <nlohmann/json.hpp>
#include <set>
#include <string>
#include <unistd.h>

#include "mlidar/error.hpp"
#include "mlidar/pnm.hpp"
#include "mlidar/scene.hpp"
#include "mlidar/synthetic.hpp"

using namespace mlidar;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() /
           ("mlidar_scene_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void WriteMeta(const fs::path& dir, int w, int h) {
  nlohmann::json j = {{"width", w},        {"height", h},
                      {"fps", 30.0},       {"z_max_m", 3.0},
                      {"fx_px", 100.0},    {"fy_px", 100.0},
                      {"cx_px", (w - 1) / 2.0}, {"cy_px", (h - 1) / 2.0},
                      {"mirror_fov_deg", 25.0}};
  std::ofstream(dir / "meta.json") << j.dump();
}

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInvalidArgument;
}

PixelRect DepthBox(const DepthMap& d, double z) {
  PixelRect r{d.width(), d.height(), 0, 0};
  for (int y = 0; y < d.height(); ++y) {
    for (int x = 0; x < d.width(); ++x) {
      if (std::abs(d.at(x, y) - z) < 1e-9) {
        r.x0 = std::min(r.x0, x);
        r.y0 = std::min(r.y0, y);
        r.x1 = std::max(r.x1, x + 1);
        r.y1 = std::max(r.y1, y + 1);
      }
    }
  }
  return r;
}

}  // namespace

TEST_CASE("depth PGM stores millimeters big-endian") {
  TempDir t("pgm");
  Image<std::uint16_t> mm(2, 1, 1, 0);
  mm.at(0, 0) = 1500;
  mm.at(1, 0) = 258;
  pnm::WritePgm16(t.path / "a.pgm", mm);
  const std::string bytes = Slurp(t.path / "a.pgm");
  CHECK(bytes.substr(0, 2) == "P5");
  const std::string tail = bytes.substr(bytes.size() - 4);
  CHECK(static_cast<unsigned char>(tail[0]) == 0x05);
  CHECK(static_cast<unsigned char>(tail[1]) == 0xdc);
  CHECK(static_cast<unsigned char>(tail[2]) == 0x01);
  CHECK(static_cast<unsigned char>(tail[3]) == 0x02);
  auto depth = pnm::ReadDepthPgm(t.path / "a.pgm");
  CHECK(depth.at(0, 0) == 1.5);
  CHECK(depth.at(1, 0) == 0.258);
}

TEST_CASE("load a hand-written scene") {
  TempDir t("hand");
  WriteMeta(t.path, 4, 3);
  pnm::WritePpm(t.path / "0000.ppm", RgbImage(4, 3, 3, 9));
  Image<std::uint16_t> mm(4, 3, 1, 0);
  pnm::WritePgm16(t.path / "0000.pgm", mm);
  auto seq = LoadScene(t.path);
  REQUIRE(seq.frames.size() == 1);
  CHECK(std::all_of(seq.frames[0].depth.data().begin(),
                    seq.frames[0].depth.data().end(),
                    [](double v) { return v == 0.0; }));
  mm.at(1, 1) = 1500;
  pnm::WritePgm16(t.path / "0000.pgm", mm);
  CHECK(LoadScene(t.path).frames[0].depth.at(1, 1) == 1.5);
}

TEST_CASE("scene loading errors") {
  TempDir t("err");
  WriteMeta(t.path, 640, 480);
  pnm::WritePpm(t.path / "0000.ppm", RgbImage(640, 480, 3, 0));
  pnm::WritePgm16(t.path / "0000.pgm", Image<std::uint16_t>(320, 240, 1, 0));
  CHECK(CodeOf([&] { LoadScene(t.path); }) == ErrorCode::kDimensionMismatch);

  pnm::WritePgm16(t.path / "0000.pgm", Image<std::uint16_t>(640, 480, 1, 0));
  pnm::WritePpm(t.path / "0001.ppm", RgbImage(640, 480, 3, 0));
  CHECK(CodeOf([&] { LoadScene(t.path); }) == ErrorCode::kMissingPair);
  try {
    LoadScene(t.path);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("0001.ppm") != std::string::npos);
  }
  fs::remove(t.path / "0001.ppm");

  std::ofstream(t.path / "0000.pgm") << "P2\n640 480\n65535\n";
  CHECK(CodeOf([&] { LoadScene(t.path); }) == ErrorCode::kMalformedHeader);

  fs::remove(t.path / "meta.json");
  CHECK(CodeOf([&] { LoadScene(t.path); }) == ErrorCode::kMissingFile);
  CHECK(CodeOf([&] { LoadScene(t.path / "nope"); }) == ErrorCode::kMissingFile);
}

TEST_CASE("save and load round trip") {
  TempDir t("rt");
  auto seq = synthetic::Generate(synthetic::RandomClutter(4), 4);
  seq.frames.push_back(seq.frames[0]);
  seq.frames[1].index = 1;
  seq.frames[1].timestamp_s = 1.0 / seq.meta.fps;
  SaveScene(t.path, seq);
  auto back = LoadScene(t.path);
  REQUIRE(back.frames.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back.frames[i].rgb == seq.frames[i].rgb);
    CHECK(back.frames[i].depth == seq.frames[i].depth);
    CHECK(back.frames[i].index == seq.frames[i].index);
  }
  CHECK(back.meta.intrinsics.fx == seq.meta.intrinsics.fx);
  CHECK(back.meta.z_max_m == seq.meta.z_max_m);
}

TEST_CASE("fronto-parallel plane renders constant depth") {
  auto seq = synthetic::Generate(synthetic::FrontoPlane(2.0), 0);
  REQUIRE(seq.frames.size() == 1);
  for (double v : seq.frames[0].depth.data()) CHECK(v == 2.0);
  for (double z : {0.5, 0.777, 1.2345, 2.9}) {
    auto d = synthetic::Generate(synthetic::FrontoPlane(z), 1).frames[0].depth;
    auto [lo, hi] = std::minmax_element(d.data().begin(), d.data().end());
    CHECK(*hi - *lo <= 1e-3 + 1e-12);
    CHECK(std::abs(*lo - z) <= 0.5e-3 + 1e-12);
  }
}

TEST_CASE("two planes give a two-valued histogram") {
  auto d = synthetic::Generate(synthetic::TwoPlanes(0.5, 3.0), 0).frames[0].depth;
  std::set<double> values(d.data().begin(), d.data().end());
  CHECK(values == std::set<double>{0.5, 3.0});
}

TEST_CASE("moving box shifts by its speed") {
  auto spec = synthetic::MovingBox(10, 10, 40);
  auto seq = synthetic::Generate(spec, 0);
  REQUIRE(seq.frames.size() == 10);
  // frame 0 shows only the backdrop
  CHECK(DepthBox(seq.frames[0].depth, 1.5).empty());
  PixelRect prev = DepthBox(seq.frames[5].depth, 1.5);
  CHECK(prev.width() == 40);
  CHECK(prev.height() == 40);
  for (int f = 6; f < 10; ++f) {
    const PixelRect r = DepthBox(seq.frames[f].depth, 1.5);
    CHECK(r.x0 - prev.x0 == 10);
    CHECK(r.x1 - prev.x1 == 10);
    CHECK(r.y0 == prev.y0);
    prev = r;
  }
  for (std::size_t i = 1; i < seq.frames.size(); ++i) {
    CHECK(seq.frames[i].timestamp_s > seq.frames[i - 1].timestamp_s);
  }
}

TEST_CASE("generation is reproducible byte for byte") {
  TempDir a("ga"), b("gb");
  auto spec = synthetic::RandomClutter(9);
  spec.frames = 2;
  SaveScene(a.path, synthetic::Generate(spec, 9));
  SaveScene(b.path, synthetic::Generate(spec, 9));
  for (const char* name : {"0000.ppm", "0000.pgm", "0001.pgm", "meta.json"}) {
    CHECK(Slurp(a.path / name) == Slurp(b.path / name));
  }
  auto c = synthetic::Generate(synthetic::RandomClutter(10), 10);
  CHECK_FALSE(c.frames[0].rgb == synthetic::Generate(spec, 9).frames[0].rgb);
}

TEST_CASE("valid depth stays within z_max") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    auto seq = synthetic::Generate(synthetic::RandomClutter(s), s);
    for (double v : seq.frames[0].depth.data()) {
      CHECK(v >= 0.0);
      CHECK(v <= seq.meta.z_max_m);
    }
  }
}

TEST_CASE("empty scene") {
  synthetic::SyntheticSpec spec;
  synthetic::Primitive far;
  far.z0 = far.z1 = 10.0;  // beyond z_max
  spec.primitives.push_back(far);
  CHECK(CodeOf([&] { synthetic::Generate(spec, 0); }) == ErrorCode::kEmptyScene);
  synthetic::SyntheticSpec none;
  CHECK(CodeOf([&] { synthetic::Generate(none, 0); }) == ErrorCode::kEmptyScene);
}

TEST_CASE("synthetic spec JSON round trip") {
  auto spec = synthetic::RandomClutter(3);
  auto back = synthetic::FromJson(synthetic::ToJson(spec));
  CHECK(synthetic::ToJson(back) == synthetic::ToJson(spec));
  CHECK(synthetic::Generate(back, 3).frames[0].depth ==
        synthetic::Generate(spec, 3).frames[0].depth);
}

TEST_CASE("pinhole mapping round trip") {
  auto k = Intrinsics::FromHorizontalFov(160, 120, 25.0 * 3.14159265358979323846 / 180.0);
  CHECK(k.horizontal_fov() == doctest::Approx(25.0 * 3.14159265358979323846 / 180.0));
  for (int y = 0; y < 120; y += 7) {
    for (int x = 0; x < 160; x += 9) {
      int px = -1, py = -1;
      REQUIRE(k.PixelOf(k.DirectionOf(x, y), px, py));
      CHECK(px == x);
      CHECK(py == y);
    }
  }
  int px, py;
  CHECK_FALSE(k.PixelOf(k.DirectionOf(-1, 5), px, py));
  CHECK_FALSE(k.PixelOf(k.DirectionOf(5, 120), px, py));
}
