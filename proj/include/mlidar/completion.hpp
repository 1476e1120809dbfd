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
#include <limits>
#include <nlohmann/json.hpp>

#include "mlidar/image.hpp"
#include "mlidar/lidar_sim.hpp"
#include "mlidar/metrics.hpp"
#include "mlidar/scan.hpp"
#include "mlidar/scene.hpp"

namespace mlidar::completion {

enum class NeighborSearch { kGrid, kBruteForce };

struct GuidedFillParams {
  double sigma_spatial_px = 12.0;
  /// Euclidean RGB distance scale. Infinity disables color guidance.
  double sigma_color = 20.0;
  int k_neighbors = 16;
  NeighborSearch search = NeighborSearch::kGrid;

  void Validate() const;
};

enum class Provenance { kCompleted, kGroundTruth };
const char* ToString(Provenance p);

struct DenseDepth {
  DepthMap depth;
  Provenance provenance = Provenance::kCompleted;
};

/// Fills every zero pixel of `sparse` with a weighted mean of its k nearest
/// nonzero pixels, weight exp(-d^2 / 2 ss^2) * exp(-|drgb|^2 / 2 sc^2).
/// Nonzero pixels are copied through. Neighbors are ranked by (d^2, raster
/// index), so grid and brute-force search agree exactly. Throws NoSamples.
DenseDepth Complete(const DepthMap& sparse, const RgbImage& rgb,
                    const GuidedFillParams& params, int jobs = 1);
DenseDepth Complete(const lidar::SparseDepth& sparse, const RgbImage& rgb,
                    const GuidedFillParams& params, int jobs = 1);

nlohmann::json ToJson(const GuidedFillParams& params);

struct FoveationComparison {
  metrics::MetricsReport full_fov;
  metrics::MetricsReport foveated;
  std::size_t scheduled_samples = 0;  // same for both patterns
  std::size_t full_fov_valid = 0;
  std::size_t foveated_valid = 0;
};

/// Capture and complete the frame under a full-FOV grid and under a foveated
/// pattern with the same sample count, then score both inside `roi` only.
FoveationComparison CompareFoveated(const SceneFrame& frame,
                                    const Intrinsics& k,
                                    const scan::MirrorModel& model,
                                    const scan::Roi& roi, std::size_t budget,
                                    const lidar::CaptureParams& capture,
                                    const GuidedFillParams& fill,
                                    std::uint64_t seed, int jobs = 1);

}  // namespace mlidar::completion
