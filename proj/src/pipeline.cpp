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

#include "mlidar/pipeline.hpp"

#include <cmath>

#include "mlidar/parallel.hpp"
#include "mlidar/random.hpp"

namespace mlidar::pipeline {

std::vector<lidar::SparseDepth> CaptureSequence(
    const SceneSequence& scene, const std::vector<scan::ScanPattern>& patterns,
    const lidar::CaptureParams& capture, std::uint64_t seed, int jobs) {
  if (patterns.size() != scene.frames.size()) {
    throw Error(ErrorCode::kInvalidArgument, "need one pattern per frame");
  }
  std::vector<lidar::SparseDepth> out(scene.frames.size());
  ParallelFor(out.size(), jobs, [&](std::size_t i) {
    const SceneFrame& f = scene.frames[i];
    out[i] = lidar::Capture(f, scene.meta.intrinsics, patterns[i], capture,
                            MixSeed(seed, static_cast<std::uint64_t>(f.index)));
  });
  return out;
}

MotionLoopResult RunMotionLoop(const SceneSequence& scene,
                               const scan::MirrorModel& model,
                               const MotionLoopParams& params,
                               const lidar::CaptureParams& capture,
                               std::uint64_t seed, int jobs) {
  if (!(params.outside_fraction >= 0.0 && params.outside_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "outside fraction must be in [0, 1]");
  }
  if (scene.frames.empty()) {
    throw Error(ErrorCode::kEmptyScene, "sequence has no frames");
  }
  const Intrinsics& k = scene.meta.intrinsics;
  const double image_area = static_cast<double>(k.width) * k.height;

  MotionLoopResult result;
  result.dense_budget = scan::Budget(model, params.dense_fps);
  const double per_pixel = static_cast<double>(result.dense_budget) / image_area;
  const double f = params.outside_fraction;

  foveation::BackgroundModel background(params.background);
  std::vector<scan::ScanPattern> patterns;
  double scan_time = 0.0;
  std::size_t total = 0;
  for (const SceneFrame& frame : scene.frames) {
    MotionLoopFrame lf;
    lf.index = frame.index;
    lf.detection = background.UpdateAndDetect(frame.rgb);
    if (lf.detection.roi) {
      const double a_in = static_cast<double>(lf.detection.roi->area());
      const auto n = static_cast<std::size_t>(
          std::llround(per_pixel * (a_in + f * (image_area - a_in))));
      lf.pattern = scan::GenerateFoveatedCount(
          model, std::max<std::size_t>(n, 1), scan::Roi{*lf.detection.roi, 1.0, f}, k);
    } else {
      const auto n = static_cast<std::size_t>(
          std::llround(per_pixel * f * image_area));
      lf.pattern = scan::GenerateFullFovCount(model, std::max<std::size_t>(n, 1), k);
    }
    lf.pattern.seed = seed;
    scan_time += 1.0 / lf.pattern.fps;
    total += lf.pattern.samples.size();
    patterns.push_back(lf.pattern);
    result.frames.push_back(std::move(lf));
  }
  result.captures = CaptureSequence(scene, patterns, capture, seed, jobs);
  result.mean_samples =
      static_cast<double>(total) / static_cast<double>(scene.frames.size());
  result.amortized_fps = static_cast<double>(scene.frames.size()) / scan_time;
  return result;
}

}  // namespace mlidar::pipeline
