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
#include <array>
#include <cmath>
#include <sstream>

#include "mlidar/foveation.hpp"
#include "mlidar/random.hpp"

using namespace mlidar;
using namespace mlidar::foveation;

namespace {

// Direct per-pixel histogram with clamped coordinates.
double BruteEntropy(const GrayImage& g, int x, int y, int window) {
  std::array<int, 256> hist{};
  const int r = window / 2;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      const int xx = std::clamp(x + dx, 0, g.width() - 1);
      const int yy = std::clamp(y + dy, 0, g.height() - 1);
      hist[g.at(xx, yy)]++;
    }
  }
  const double n = static_cast<double>(window) * window;
  double h = 0.0;
  for (int c : hist) {
    if (c) h -= (c / n) * std::log2(c / n);
  }
  return h;
}

GrayImage Noise(int w, int h, std::uint64_t seed) {
  GrayImage g(w, h, 1, 0);
  Rng rng(seed);
  for (auto& v : g.data()) v = static_cast<std::uint8_t>(rng.Next() & 0xff);
  return g;
}

PixelRect BruteBestRect(const Image<double>& m, int rw, int rh) {
  PixelRect best;
  double best_sum = -1.0;
  for (int y0 = 0; y0 + rh <= m.height(); ++y0) {
    for (int x0 = 0; x0 + rw <= m.width(); ++x0) {
      double s = 0.0;
      for (int y = y0; y < y0 + rh; ++y) {
        for (int x = x0; x < x0 + rw; ++x) s += m.at(x, y);
      }
      if (s > best_sum * (1.0 + 1e-12)) {
        best_sum = s;
        best = {x0, y0, x0 + rw, y0 + rh};
      }
    }
  }
  return best;
}

}  // namespace

TEST_CASE("entropy of a constant image is zero") {
  auto map = ComputeEntropyMap(GrayImage(30, 20, 1, 77), 5);
  for (double v : map.bits.data()) CHECK(v == 0.0);
  CHECK(map.window == 5);
}

TEST_CASE("two-valued checker approaches one bit") {
  GrayImage g(64, 64, 1, 0);
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) g.at(x, y) = ((x / 2 + y / 2) % 2) ? 200 : 10;
  }
  auto map = ComputeEntropyMap(g, 21);
  CHECK(map.bits.at(32, 32) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("entropy matches the brute-force histogram") {
  auto g = Noise(48, 40, 3);
  auto map = ComputeEntropyMap(g, 15);
  double mean_fast = 0.0, mean_brute = 0.0;
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) {
      const double b = BruteEntropy(g, x, y, 15);
      CHECK(map.bits.at(x, y) == doctest::Approx(b).epsilon(1e-12));
      CHECK(map.bits.at(x, y) <= 8.0);
      mean_fast += map.bits.at(x, y);
      mean_brute += b;
    }
  }
  CHECK(std::abs(mean_fast - mean_brute) <= 0.05 * mean_brute);
}

TEST_CASE("entropy of RGB input goes through gray") {
  RgbImage rgb(20, 16, 3, 0);
  Rng rng(4);
  for (auto& v : rgb.data()) v = static_cast<std::uint8_t>(rng.Next() & 0xff);
  CHECK(ComputeEntropyMap(rgb, 7).bits == ComputeEntropyMap(ToGray(rgb), 7).bits);
}

TEST_CASE("entropy is independent of the job count") {
  auto g = Noise(70, 50, 8);
  CHECK(ComputeEntropyMap(g, 9, 1).bits == ComputeEntropyMap(g, 9, 4).bits);
}

TEST_CASE("entropy window validation") {
  auto g = Noise(10, 10, 1);
  CHECK_THROWS_AS(ComputeEntropyMap(g, 4), Error);
  CHECK_THROWS_AS(ComputeEntropyMap(g, 1), Error);
}

TEST_CASE("entropy is translation equivariant away from borders") {
  auto g = Noise(60, 40, 11);
  GrayImage shifted(60, 40, 1, 0);
  const int sx = 5, sy = 3;
  for (int y = 0; y < 40; ++y) {
    for (int x = 0; x < 60; ++x) {
      shifted.at(x, y) = g.at(std::clamp(x - sx, 0, 59), std::clamp(y - sy, 0, 39));
    }
  }
  const int w = 7;
  auto a = ComputeEntropyMap(g, w);
  auto b = ComputeEntropyMap(shifted, w);
  for (int y = w; y + w + sy < 40; ++y) {
    for (int x = w; x + w + sx < 60; ++x) {
      CHECK(b.bits.at(x + sx, y + sy) == doctest::Approx(a.bits.at(x, y)).epsilon(1e-12));
    }
  }
}

TEST_CASE("max entropy ROI") {
  Image<double> corner(40, 30, 1, 0.0);
  for (int y = 20; y < 30; ++y) {
    for (int x = 30; x < 40; ++x) corner.at(x, y) = 3.0;
  }
  CHECK(MaxEntropyRoi(corner, 10, 10) == PixelRect{30, 20, 40, 30});

  Image<double> uniform(40, 30, 1, 2.5);
  CHECK(MaxEntropyRoi(uniform, 10, 10) == PixelRect{0, 0, 10, 10});

  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    Image<double> m(64, 48, 1, 0.0);
    for (double& v : m.data()) v = 8.0 * rng.Uniform();
    CHECK(MaxEntropyRoi(m, 16, 12) == BruteBestRect(m, 16, 12));
  }
  CHECK_THROWS_AS(MaxEntropyRoi(uniform, 41, 10), Error);
}

TEST_CASE("static scene never reports motion") {
  BackgroundModel bg;
  auto g = Noise(80, 60, 2);
  for (int i = 0; i < 10; ++i) {
    auto det = bg.UpdateAndDetect(g);
    CHECK_FALSE(det.roi.has_value());
  }
  for (double v : bg.mean().data()) {
    CHECK(v >= 0.0);
    CHECK(v <= 255.0);
  }
}

TEST_CASE("box jumping into a dark scene") {
  BackgroundParams params;
  BackgroundModel bg(params);
  GrayImage dark(120, 90, 1, 10);
  bg.UpdateAndDetect(dark);
  bg.UpdateAndDetect(dark);
  GrayImage frame = dark;
  const PixelRect box{50, 20, 90, 60};
  for (int y = box.y0; y < box.y1; ++y) {
    for (int x = box.x0; x < box.x1; ++x) frame.at(x, y) = 230;
  }
  auto det = bg.UpdateAndDetect(frame);
  REQUIRE(det.roi.has_value());
  const PixelRect r = *det.roi;
  CHECK(r.x0 <= box.x0);
  CHECK(r.y0 <= box.y0);
  CHECK(r.x1 >= box.x1);
  CHECK(r.y1 >= box.y1);
  CHECK(r.x0 >= box.x0 - params.margin_px);
  CHECK(r.y0 >= box.y0 - params.margin_px);
  CHECK(r.x1 <= box.x1 + params.margin_px);
  CHECK(r.y1 <= box.y1 + params.margin_px);
  CHECK(det.blob_box == box);
  CHECK(det.area_px == 1600);
}

TEST_CASE("smaller blob is ignored") {
  BackgroundParams params;
  params.min_blob_area = 100;
  BackgroundModel bg(params);
  GrayImage dark(100, 80, 1, 0);
  bg.UpdateAndDetect(dark);
  GrayImage frame = dark;
  // 25 x 20 = 500 px and 10 x 5 = 50 px
  for (int y = 5; y < 25; ++y) for (int x = 5; x < 30; ++x) frame.at(x, y) = 255;
  for (int y = 60; y < 65; ++y) for (int x = 70; x < 80; ++x) frame.at(x, y) = 255;
  auto det = bg.UpdateAndDetect(frame);
  REQUIRE(det.roi.has_value());
  CHECK(det.blob_box == PixelRect{5, 5, 30, 25});
  CHECK(det.area_px == 500);

  // only the small blob left: below min area, so no ROI
  BackgroundModel bg2(params);
  bg2.UpdateAndDetect(dark);
  GrayImage small = dark;
  for (int y = 60; y < 65; ++y) for (int x = 70; x < 80; ++x) small.at(x, y) = 255;
  CHECK_FALSE(bg2.UpdateAndDetect(small).roi.has_value());
}

TEST_CASE("background mean update") {
  BackgroundParams params;
  params.learning_rate = 0.5;
  BackgroundModel bg(params);
  bg.UpdateAndDetect(GrayImage(4, 4, 1, 100));
  CHECK(bg.mean().at(0, 0) == 100.0);
  bg.UpdateAndDetect(GrayImage(4, 4, 1, 110));
  CHECK(bg.mean().at(2, 3) == 105.0);
  CHECK_THROWS_AS(bg.UpdateAndDetect(GrayImage(5, 4, 1, 0)), Error);
}

TEST_CASE("opening removes specks") {
  Mask m(10, 10, 1, 0);
  m.at(2, 2) = 1;
  for (int y = 4; y < 8; ++y) for (int x = 4; x < 8; ++x) m.at(x, y) = 1;
  auto o = Open3x3(m);
  CHECK(o.at(2, 2) == 0);
  CHECK(o.at(5, 5) != 0);
  CHECK(o.at(4, 4) != 0);
}

TEST_CASE("8-connected components") {
  Mask m(6, 6, 1, 0);
  m.at(0, 0) = m.at(1, 1) = m.at(2, 2) = 1;  // diagonal chain
  m.at(5, 0) = 1;
  auto cs = ConnectedComponents(m);
  REQUIRE(cs.size() == 2);
  CHECK(cs[0].area == 3);
  CHECK(cs[0].box == PixelRect{0, 0, 3, 3});
  CHECK(cs[1].area == 1);
}

TEST_CASE("ROI trace rows") {
  std::ostringstream out;
  WriteRoiTraceHeader(out);
  Detection none;
  WriteRoiTraceRow(out, 0, none);
  Detection d;
  d.roi = PixelRect{1, 2, 3, 4};
  d.area_px = 9;
  WriteRoiTraceRow(out, 1, d);
  CHECK(out.str() == "frame,x0,y0,x1,y1,area_px\n0,,,,,0\n1,1,2,3,4,9\n");
}

TEST_CASE("detection is deterministic") {
  auto run = [] {
    BackgroundModel bg;
    std::vector<std::optional<PixelRect>> rois;
    for (int i = 0; i < 6; ++i) {
      GrayImage g = Noise(64, 48, 100);
      for (int y = 10; y < 30; ++y) {
        for (int x = 5 * i; x < 5 * i + 20; ++x) g.at(x, y) = 255;
      }
      rois.push_back(bg.UpdateAndDetect(g).roi);
    }
    return rois;
  };
  CHECK(run() == run());
}
