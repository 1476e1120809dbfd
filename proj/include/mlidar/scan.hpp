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
#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <vector>

#include "mlidar/image.hpp"
#include "mlidar/scene.hpp"

namespace mlidar::scan {

/// Linear voltage-to-angle map for one mirror axis.
struct AxisMap {
  double gain_rad_per_v = 0.05;
  double offset_rad = 0.0;

  double Angle(double volts) const { return gain_rad_per_v * volts + offset_rad; }
  double Volts(double angle) const {
    return (angle - offset_rad) / gain_rad_per_v;
  }
};

struct MirrorModel {
  double fov_rad = 25.0 * 3.14159265358979323846 / 180.0;
  AxisMap theta_axis;
  AxisMap phi_axis;
  double sample_rate_hz = 1600.0;
  double frame_overhead_s = 0.0;

  void Validate() const;
};

/// Frame-rate / samples-per-frame pairs the prototype budget model is fit to.
struct BudgetObservation {
  double fps = 0.0;
  double samples = 0.0;
};
extern const std::vector<BudgetObservation> kPrototypeBudgetTable;

struct BudgetFit {
  double sample_rate_hz = 0.0;
  double frame_overhead_s = 0.0;
  std::vector<double> residuals;  // observed - fitted, samples
  double rmse_samples = 0.0;
};

/// Least-squares fit of samples ~ (1/fps - overhead) * rate. Needs two or
/// more distinct frame rates; otherwise throws SingularFit.
BudgetFit FitBudget(std::span<const BudgetObservation> observations);

/// Default mirror with rate and overhead fit to kPrototypeBudgetTable.
MirrorModel PrototypeMirror();

/// floor((1/fps - overhead) * rate). Throws OverheadExceedsFrame when the
/// overhead eats the whole frame.
std::size_t Budget(const MirrorModel& model, double fps);

/// Frame rate achieved when each frame carries `samples` measurements.
double FrameRateFor(const MirrorModel& model, std::size_t samples);

enum class Regime { kFullFov, kEntropyAdaptive, kFoveatedRoi, kDensitySweep };
const char* ToString(Regime regime);
Regime ParseRegime(const std::string& name);

struct ScanSample {
  double t_s = 0.0;  // relative to frame start
  double theta_rad = 0.0;
  double phi_rad = 0.0;
  bool operator==(const ScanSample&) const = default;
};

struct ScanPattern {
  std::vector<ScanSample> samples;
  double fps = 0.0;
  Regime regime = Regime::kFullFov;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
  std::string warning;

  bool operator==(const ScanPattern&) const = default;
};

/// Rectangular region with relative per-pixel sampling densities.
struct Roi {
  PixelRect rect;
  double inside_density = 1.0;
  double outside_density = 0.0;

  void Validate(int width, int height) const;
};

/// Angular extent covered by both the image and the mirror.
struct AngularBox {
  double theta_lo = 0.0, theta_hi = 0.0;
  double phi_lo = 0.0, phi_hi = 0.0;

  bool Contains(double theta, double phi) const {
    return theta >= theta_lo && theta <= theta_hi && phi >= phi_lo &&
           phi <= phi_hi;
  }
};
AngularBox ImageBox(const MirrorModel& model, const Intrinsics& k);
AngularBox RectBox(const MirrorModel& model, const Intrinsics& k,
                   const PixelRect& rect);

/// Equi-angular grid of exactly n directions inside `box`: floor(sqrt(n))
/// columns, full rows of that width, and the remainder centered on a final
/// partial row. Directions sit at cell centers.
std::vector<ScanSample> EquiAngularGrid(std::size_t n, const AngularBox& box);

/// Boustrophedon order (rows by ascending phi, alternating theta direction)
/// and timestamps k / sample_rate.
void SerpentineOrder(std::vector<ScanSample>& samples, const MirrorModel& model);

ScanPattern GenerateFullFov(const MirrorModel& model, double fps,
                            const Intrinsics& k);

/// Full-FOV grid with an explicit sample count (capped at the pixel count);
/// fps in the result is FrameRateFor(model, count).
ScanPattern GenerateFullFovCount(const MirrorModel& model, std::size_t count,
                                 const Intrinsics& k);

/// Draws budget pixels without replacement with probability proportional to
/// entropy + 1% of its maximum. An all-zero map falls back to GenerateFullFov
/// and sets `warning`.
ScanPattern GenerateEntropyAdaptive(const MirrorModel& model, double fps,
                                    const Image<double>& entropy,
                                    const Intrinsics& k, std::uint64_t seed);

ScanPattern GenerateFoveated(const MirrorModel& model, double fps,
                             const Roi& roi, const Intrinsics& k);

/// Same as GenerateFoveated with an explicit sample count instead of a frame
/// rate; fps in the result is FrameRateFor(model, count).
ScanPattern GenerateFoveatedCount(const MirrorModel& model, std::size_t count,
                                  const Roi& roi, const Intrinsics& k);

/// Fixed field of view (`rect`), one pattern per sample count.
std::vector<ScanPattern> GenerateDensitySweep(
    const MirrorModel& model, const PixelRect& rect,
    std::span<const std::size_t> counts, const Intrinsics& k);

nlohmann::json ToJson(const ScanPattern& pattern);
ScanPattern PatternFromJson(const nlohmann::json& j);

}  // namespace mlidar::scan
