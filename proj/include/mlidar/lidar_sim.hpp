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
#include <filesystem>
#include <nlohmann/json.hpp>
#include <span>
#include <utility>
#include <vector>

#include "mlidar/image.hpp"
#include "mlidar/metrics.hpp"
#include "mlidar/scan.hpp"
#include "mlidar/scene.hpp"

namespace mlidar::lidar {

/// Linear map between detector voltage and range: range = gain * V + offset.
struct CalibrationModel {
  double gain_m_per_v = 0.5;
  double offset_m = -0.5;
  double rmse_m = 0.0;  // residual of the fit that produced it

  double ToRange(double volts) const { return gain_m_per_v * volts + offset_m; }
  double ToVolts(double range_m) const {
    return (range_m - offset_m) / gain_m_per_v;
  }
};

/// Least-squares line through (voltage, true range) pairs. Throws SingularFit
/// with fewer than two distinct voltages or a non-positive gain.
CalibrationModel FitCalibration(
    std::span<const std::pair<double, double>> volts_and_range);

/// Relative range noise coefficient: sigma(Z) = coefficient * Z. Chosen so
/// that dense 6 fps scans of ten fronto-parallel planes between 0.5 m and
/// 3 m give a mean SVD plane-fit RMSE of about 0.069 m.
inline constexpr double kCalibratedNoiseCoefficient = 0.0420;

/// Laser dot solid angle of the prototype, steradians.
inline constexpr double kDotSolidAngleSr = 6e-4;

struct CaptureParams {
  double dot_solid_angle_sr = kDotSolidAngleSr;
  double noise_coefficient = kCalibratedNoiseCoefficient;
  double z_max_m = 3.0;
  /// Response used to synthesize the raw detector voltage of each return.
  CalibrationModel response;
};

struct Sample {
  double t_s = 0.0;
  double theta_rad = 0.0;
  double phi_rad = 0.0;
  int x = 0;
  int y = 0;
  double range_m = 0.0;  // depth along the optical axis, calibrated
  double raw_voltage = 0.0;
};

struct SparseDepth {
  DepthMap depth;  // meters, 0 = unsampled
  std::vector<Sample> samples;
  double fps = 0.0;
  scan::Regime regime = scan::Regime::kFullFov;
  std::size_t dropped = 0;  // invalid truth, beyond z_max, off-image, repeats

  std::size_t valid_count() const { return samples.size(); }
};

/// Footprint radius in pixels of a dot of the given solid angle, at least
/// 1 px. The dot's angular size is range independent, and so is its image in
/// a co-located pinhole camera.
double FootprintRadiusPx(double dot_solid_angle_sr, const Intrinsics& k);

/// Simulates one frame of the scanned capture. Each direction maps to its
/// nearest pixel; the return is the mean valid ground truth over the dot
/// footprint disk (always including the center pixel) plus Gaussian noise of
/// sigma = coefficient * Z, clamped to (0, z_max]. Directions hitting invalid
/// truth, truth beyond z_max, or an already-sampled pixel are dropped.
SparseDepth Capture(const SceneFrame& frame, const Intrinsics& k,
                    const scan::ScanPattern& pattern,
                    const CaptureParams& params, std::uint64_t noise_seed);

/// Metrics on sampled pixels only, with the reference treated as truth.
/// Throws NoOverlap if no sample lands on a valid reference pixel.
metrics::MetricsReport EvaluateAgainstReference(const SparseDepth& sparse,
                                                const DepthMap& reference);

/// Back-projected 3-D points of the samples (camera frame, meters).
std::vector<metrics::Point3> SamplePoints(const SparseDepth& sparse,
                                          const Intrinsics& k);

nlohmann::json SamplesToJson(const SparseDepth& sparse);
/// Writes `<stem>.pgm` (mm, 0 = unsampled) and `<stem>.json` (samples).
void SaveSparse(const std::filesystem::path& stem, const SparseDepth& sparse);
SparseDepth LoadSparse(const std::filesystem::path& stem);

}  // namespace mlidar::lidar
