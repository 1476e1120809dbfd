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
#include <limits>
#include <vector>

#include "mlidar/completion.hpp"
#include "mlidar/error.hpp"
#include "mlidar/foveation.hpp"
#include "mlidar/metrics.hpp"
#include "mlidar/random.hpp"
#include "mlidar/scan.hpp"
#include "mlidar/synthetic.hpp"

using namespace mlidar;
using namespace mlidar::completion;

namespace {

// Independent reference: sort every sample by (d^2, raster index), take k,
// weight in the linear domain.
DepthMap NaiveFill(const DepthMap& sparse, const RgbImage& rgb,
                   const GuidedFillParams& p) {
  struct S {
    int x, y;
    double z;
  };
  std::vector<S> samples;
  for (int y = 0; y < sparse.height(); ++y) {
    for (int x = 0; x < sparse.width(); ++x) {
      if (sparse.at(x, y) > 0.0) samples.push_back({x, y, sparse.at(x, y)});
    }
  }
  DepthMap out = sparse;
  for (int y = 0; y < sparse.height(); ++y) {
    for (int x = 0; x < sparse.width(); ++x) {
      if (sparse.at(x, y) > 0.0) continue;
      std::vector<S> nn = samples;
      std::sort(nn.begin(), nn.end(), [&](const S& a, const S& b) {
        const long da = long(a.x - x) * (a.x - x) + long(a.y - y) * (a.y - y);
        const long db = long(b.x - x) * (b.x - x) + long(b.y - y) * (b.y - y);
        if (da != db) return da < db;
        return a.y * sparse.width() + a.x < b.y * sparse.width() + b.x;
      });
      nn.resize(std::min<std::size_t>(nn.size(), p.k_neighbors));
      std::vector<double> logw;
      for (const auto& s : nn) {
        const double d2 = double(s.x - x) * (s.x - x) + double(s.y - y) * (s.y - y);
        double c2 = 0.0;
        for (int c = 0; c < 3; ++c) {
          const double dc = double(rgb.at(s.x, s.y, c)) - rgb.at(x, y, c);
          c2 += dc * dc;
        }
        double lw = -d2 / (2 * p.sigma_spatial_px * p.sigma_spatial_px);
        if (std::isfinite(p.sigma_color)) lw -= c2 / (2 * p.sigma_color * p.sigma_color);
        logw.push_back(lw);
      }
      const double mx = *std::max_element(logw.begin(), logw.end());
      double num = 0, den = 0;
      for (std::size_t i = 0; i < nn.size(); ++i) {
        const double w = std::exp(logw[i] - mx);
        num += w * nn[i].z;
        den += w;
      }
      out.at(x, y) = num / den;
    }
  }
  return out;
}

DepthMap RandomSparse(int w, int h, double fraction, std::uint64_t seed) {
  DepthMap d(w, h, 1, 0.0);
  Rng rng(seed);
  for (double& v : d.data()) {
    if (rng.Uniform() < fraction) v = 0.5 + 2.5 * rng.Uniform();
  }
  return d;
}

RgbImage RandomRgb(int w, int h, std::uint64_t seed) {
  RgbImage rgb(w, h, 3, 0);
  Rng rng(seed);
  for (auto& v : rgb.data()) v = static_cast<std::uint8_t>(rng.Next() & 0xff);
  return rgb;
}

}  // namespace

TEST_CASE("dense input is returned unchanged") {
  DepthMap d(12, 9, 1, 0.0);
  Rng rng(1);
  for (double& v : d.data()) v = 0.3 + rng.Uniform();
  auto out = Complete(d, RgbImage(12, 9, 3, 50), GuidedFillParams{});
  CHECK(out.depth == d);
  CHECK(out.provenance == Provenance::kCompleted);
  CHECK(std::string(ToString(Provenance::kGroundTruth)) == "ground-truth");
}

TEST_CASE("equidistant query between two samples") {
  DepthMap d(11, 1, 1, 0.0);
  d.at(0, 0) = 1.0;
  d.at(10, 0) = 3.0;
  auto out = Complete(d, RgbImage(11, 1, 3, 128), GuidedFillParams{});
  CHECK(out.depth.at(5, 0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(out.depth.at(0, 0) == 1.0);
  CHECK(out.depth.at(10, 0) == 3.0);
}

TEST_CASE("grid search, brute force and naive oracle agree") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    auto sparse = RandomSparse(40, 30, 0.03 + 0.02 * seed, seed);
    sparse.at(3, 3) = 1.0;  // never empty
    auto rgb = RandomRgb(40, 30, seed + 100);
    GuidedFillParams p;
    p.k_neighbors = 1 + static_cast<int>(seed * 3);
    p.sigma_spatial_px = 4.0 + seed;
    auto grid = Complete(sparse, rgb, p);
    p.search = NeighborSearch::kBruteForce;
    auto brute = Complete(sparse, rgb, p);
    CHECK(grid.depth == brute.depth);
    auto naive = NaiveFill(sparse, rgb, p);
    for (std::size_t i = 0; i < naive.data().size(); ++i) {
      CHECK(grid.depth.data()[i] == doctest::Approx(naive.data()[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("exact interpolation and convex bounds") {
  auto sparse = RandomSparse(50, 40, 0.05, 7);
  auto rgb = RandomRgb(50, 40, 8);
  auto out = Complete(sparse, rgb, GuidedFillParams{});
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double v : sparse.data()) {
    if (v > 0.0) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  for (std::size_t i = 0; i < sparse.data().size(); ++i) {
    if (sparse.data()[i] > 0.0) CHECK(out.depth.data()[i] == sparse.data()[i]);
    CHECK(out.depth.data()[i] >= lo);
    CHECK(out.depth.data()[i] <= hi);
  }
}

TEST_CASE("far-away samples still get weight") {
  // Every neighbor is far beyond sigma; the log-domain weights must not
  // underflow into 0 / 0.
  DepthMap d(400, 1, 1, 0.0);
  d.at(0, 0) = 1.0;
  d.at(399, 0) = 2.0;
  GuidedFillParams p;
  p.sigma_spatial_px = 0.5;
  auto out = Complete(d, RgbImage(400, 1, 3, 0), p);
  for (double v : out.depth.data()) {
    CHECK(std::isfinite(v));
    CHECK(v >= 1.0);
    CHECK(v <= 2.0);
  }
}

TEST_CASE("color guidance on a two-region scene") {
  const int w = 120, h = 90;
  DepthMap truth(w, h, 1, 0.0);
  RgbImage rgb(w, h, 3, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const bool left = x < w / 2 + (y - h / 2) / 3;  // slanted boundary
      truth.at(x, y) = left ? 1.0 : 2.0;
      for (int c = 0; c < 3; ++c) rgb.at(x, y, c) = left ? 40 : 210;
    }
  }
  Rng rng(5);
  DepthMap sparse(w, h, 1, 0.0);
  for (std::size_t i = 0; i < sparse.data().size(); ++i) {
    if (rng.Uniform() < 0.05) sparse.data()[i] = truth.data()[i];
  }
  auto guided = Complete(sparse, rgb, GuidedFillParams{});
  GuidedFillParams blind;
  blind.sigma_color = std::numeric_limits<double>::infinity();
  auto plain = Complete(sparse, rgb, blind);
  const double e_guided = metrics::Compute(guided.depth, truth).mre_pct;
  const double e_plain = metrics::Compute(plain.depth, truth).mre_pct;
  CHECK(e_guided < 3.0);
  CHECK(e_plain > 3.0 * e_guided);
}

TEST_CASE("completion errors") {
  DepthMap empty(8, 8, 1, 0.0);
  RgbImage rgb(8, 8, 3, 0);
  try {
    Complete(empty, rgb, GuidedFillParams{});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNoSamples);
  }
  DepthMap neg = empty;
  neg.at(1, 1) = -1.0;
  CHECK_THROWS_AS(Complete(neg, rgb, GuidedFillParams{}), Error);
  GuidedFillParams bad;
  bad.k_neighbors = 0;
  CHECK_THROWS_AS(bad.Validate(), Error);
  bad = GuidedFillParams{};
  bad.sigma_spatial_px = 0.0;
  CHECK_THROWS_AS(bad.Validate(), Error);
  DepthMap one = empty;
  one.at(0, 0) = 1.0;
  CHECK_THROWS_AS(Complete(one, RgbImage(7, 8, 3, 0), GuidedFillParams{}), Error);
}

TEST_CASE("completion is deterministic across job counts") {
  auto sparse = RandomSparse(160, 120, 0.02, 3);
  auto rgb = RandomRgb(160, 120, 4);
  auto a = Complete(sparse, rgb, GuidedFillParams{}, 1);
  auto b = Complete(sparse, rgb, GuidedFillParams{}, 4);
  auto c = Complete(sparse, rgb, GuidedFillParams{}, 1);
  CHECK(a.depth == b.depth);
  CHECK(a.depth == c.depth);
}

TEST_CASE("params echo") {
  auto j = ToJson(GuidedFillParams{});
  CHECK(j.at("sigma_spatial_px") == 12.0);
  CHECK(j.at("sigma_color") == 20.0);
  CHECK(j.at("k_neighbors") == 16);
}

TEST_CASE("full-image ROI comparison is the same experiment twice") {
  auto seq = synthetic::Generate(synthetic::RandomClutter(0), 0);
  const auto& k = seq.meta.intrinsics;
  const auto m = scan::PrototypeMirror();
  scan::Roi roi{{0, 0, k.width, k.height}, 1.0, 0.0};
  auto cmp = CompareFoveated(seq.frames[0], k, m, roi, 230, lidar::CaptureParams{},
                             GuidedFillParams{}, 1);
  CHECK(cmp.full_fov.mre_pct == cmp.foveated.mre_pct);
  CHECK(cmp.full_fov.rmse_m == cmp.foveated.rmse_m);
  CHECK(cmp.full_fov_valid == cmp.foveated_valid);
  CHECK(cmp.scheduled_samples == 230);
}

TEST_CASE("quarter-area ROI comparison carries equal sample counts") {
  auto seq = synthetic::Generate(synthetic::RandomClutter(1), 1);
  const auto& k = seq.meta.intrinsics;
  scan::Roi roi{{40, 30, 120, 90}, 1.0, 0.0};
  auto cmp = CompareFoveated(seq.frames[0], k, scan::PrototypeMirror(), roi, 231,
                             lidar::CaptureParams{}, GuidedFillParams{}, 1);
  CHECK(cmp.scheduled_samples == 231);
  CHECK(cmp.full_fov.n_pixels == cmp.foveated.n_pixels);
  CHECK(cmp.full_fov.n_pixels == 80 * 60);
}

TEST_CASE("ROI error falls as more of the budget moves inside") {
  const auto m = scan::PrototypeMirror();
  std::vector<double> mean(4, 0.0);
  const double outside[] = {1.0, 0.5, 0.1, 0.0};
  const int trials = 20;
  for (int seed = 0; seed < trials; ++seed) {
    auto seq = synthetic::Generate(synthetic::RandomClutter(seed), seed);
    const auto& k = seq.meta.intrinsics;
    auto ent = foveation::ComputeEntropyMap(seq.frames[0].rgb, 9);
    const PixelRect rect = foveation::MaxEntropyRoi(ent.bits, k.width / 2, k.height / 2);
    for (int i = 0; i < 4; ++i) {
      scan::Roi roi{rect, 1.0, outside[i]};
      auto cmp = CompareFoveated(seq.frames[0], k, m, roi, 231, lidar::CaptureParams{},
                                 GuidedFillParams{}, seed);
      mean[i] += cmp.foveated.mre_pct / trials;
    }
  }
  for (int i = 1; i < 4; ++i) CHECK(mean[i] <= mean[i - 1]);
}
