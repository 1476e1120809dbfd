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
#include <vector>

#include "mlidar/foveation.hpp"
#include "mlidar/lidar_sim.hpp"
#include "mlidar/scan.hpp"
#include "mlidar/scene.hpp"

namespace mlidar::pipeline {

/// Captures every frame with its own pattern. Frame i uses noise seed
/// MixSeed(seed, frame index); frames run on up to `jobs` threads.
std::vector<lidar::SparseDepth> CaptureSequence(
    const SceneSequence& scene, const std::vector<scan::ScanPattern>& patterns,
    const lidar::CaptureParams& capture, std::uint64_t seed, int jobs = 1);

struct MotionLoopParams {
  /// Frame rate of the dense full-FOV scan whose per-pixel density the ROI
  /// inherits.
  double dense_fps = 6.0;
  /// Density outside the ROI, and of the fallback scan when nothing moves,
  /// as a fraction of the dense density.
  double outside_fraction = 0.1;
  foveation::BackgroundParams background;
};

struct MotionLoopFrame {
  int index = 0;
  foveation::Detection detection;
  scan::ScanPattern pattern;
};

struct MotionLoopResult {
  std::vector<MotionLoopFrame> frames;
  std::vector<lidar::SparseDepth> captures;
  std::size_t dense_budget = 0;   // samples per dense full-FOV frame
  double mean_samples = 0.0;      // amortized samples per frame
  double amortized_fps = 0.0;     // frames / summed scan time
};

/// Background subtraction drives the ROI of each frame. With an ROI the frame
/// is scanned at the dense density inside and outside_fraction of it outside;
/// without one, a sparse full-FOV scan at outside_fraction density is used.
MotionLoopResult RunMotionLoop(const SceneSequence& scene,
                               const scan::MirrorModel& model,
                               const MotionLoopParams& params,
                               const lidar::CaptureParams& capture,
                               std::uint64_t seed, int jobs = 1);

}  // namespace mlidar::pipeline
