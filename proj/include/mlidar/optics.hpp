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
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mlidar::optics {

// All angular quantities are cone apex angles in radians unless a name says
// otherwise (`_sr` = steradians). Lengths are meters.

struct TransmitterSpec {
  double beam_quality_m = 1.0;   // M >= 1
  double waist_radius_m = 0.0;   // w_o, also the MEMS mirror size proxy
  double wavelength_m = 0.0;
  double mirror_fov_rad = 0.0;   // (0, pi]

  void Validate() const;
};

enum class ReceiverKind { kRetroreflective, kReceiverArray, kSingleDetector };

const char* ToString(ReceiverKind kind);
ReceiverKind ParseReceiverKind(const std::string& name);

struct ReceiverSpec {
  ReceiverKind kind = ReceiverKind::kSingleDetector;
  int detector_count = 1;         // n, array is n x n
  double aperture_m = 0.0;        // A
  double image_distance_m = 0.0;  // u, detector-to-lens distance
  double focal_length_m = 0.0;    // f

  void Validate() const;

  /// Single detector placed inside the focal length (u < f).
  bool underfocused() const {
    return kind == ReceiverKind::kSingleDetector &&
           image_distance_m < focal_length_m;
  }
};

/// Receiver as actually evaluated: retroreflection uses the MEMS mirror as its
/// aperture and a single detector, single detectors always have n = 1.
ReceiverSpec Effective(const ReceiverSpec& rx, const TransmitterSpec& tx);

struct CameraSpec {
  double fov_rad = 0.0;       // apex angle of the camera cone
  long pixel_count = 0;       // I

  /// Average solid angle seen by one pixel, omega_cam / I.
  double pixel_support_sr() const;
};

/// Bit flags describing how a characterization should be read.
enum CharacterizationFlag : std::uint32_t {
  kFlagOk = 0,
  /// omega_laser >= pi: the divergence cone is not a physical beam. The
  /// received radiance is reported as 0 (the dot covers the half-space).
  kFlagNonPhysicalDivergence = 1u << 0,
  /// Z <= f for a single detector: no real image of the dot forms, so the
  /// in-focus distance u' = fZ / (Z - f) is undefined. fov = -inf and
  /// rr = -inf mark the row as undefined.
  kFlagDegenerateFocus = 1u << 1,
  /// Kernel angle is exactly zero (dot in perfect focus on the detector):
  /// fov = 0 and rr = +inf.
  kFlagZeroKernel = 1u << 2,
};

std::string FlagString(std::uint32_t flags);

struct DesignCharacterization {
  double fov_rad = 0.0;                  // Omega, capped at the mirror FOV
  double uncapped_fov_rad = 0.0;         // Omega before the mirror cap
  double received_radiance_per_m = 0.0;  // s, normalized 1/length proxy
  double volume_m3 = 0.0;                // V
  double range_m = 0.0;                  // Z
  std::uint32_t flags = kFlagOk;

  bool singular() const {
    return (flags & (kFlagDegenerateFocus | kFlagZeroKernel)) != 0;
  }
};

/// omega_laser = M^2 lambda / (w_o pi).
double BeamDivergence(const TransmitterSpec& tx);

double ApexToSolidAngle(double apex_rad);
double SolidAngleToApex(double solid_angle_sr);

/// Potential acuity increase omega_laser / omega_pix, both in steradians.
double AcuityGain(double laser_solid_angle_sr, const CameraSpec& camera);
double AcuityGain(const TransmitterSpec& tx, const CameraSpec& camera);

/// Raw single-detector kernel angle
///   2 atan(A (Z - f) |(Zu - fu - fZ) / (Z - f)| / (2 u f Z)),
/// not capped by the mirror. Requires Z != f.
double KernelAngle(const ReceiverSpec& rx, double range_m);

/// Closed-form field of view, received radiance and volume at range Z.
DesignCharacterization Characterize(const TransmitterSpec& tx,
                                    const ReceiverSpec& rx, double range_m);

/// Z -> infinity limit of the under-focused single detector's kernel angle,
/// 2 atan(A (f - u) / (2 u f)). Throws InvalidVariant unless u < f.
double FovLimitUnderfocused(const ReceiverSpec& rx);

// --- Sweeps ---------------------------------------------------------------

struct SweepGrid {
  std::vector<TransmitterSpec> transmitters;
  std::vector<ReceiverSpec> receivers;
  std::vector<double> ranges_m;

  std::size_t size() const {
    return transmitters.size() * receivers.size() * ranges_m.size();
  }
  /// Throws InvalidArgument when a grid is empty or a point leaves the
  /// explored design box (M in [1, 100], w_o in [0.1, 5] mm, A <= 10 cm,
  /// f <= 50 mm, u <= 50 mm, Z > 0).
  void Validate() const;
};

struct SweepRow {
  std::size_t tx_index = 0;
  std::size_t rx_index = 0;
  std::size_t range_index = 0;
  TransmitterSpec tx;
  ReceiverSpec rx;  // effective receiver
  DesignCharacterization result;
};

/// Cartesian product, rows ordered lexicographically by
/// (tx_index, rx_index, range_index) regardless of `jobs`.
std::vector<SweepRow> Sweep(const SweepGrid& grid, int jobs = 1);

extern const char* const kSweepCsvHeader;
void WriteSweepCsv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Range where `challenger` received radiance first overtakes `incumbent`
/// along a sampled range curve (both curves over the same ascending ranges).
/// The crossing is linearly interpolated in log(Z) on the log-ratio of the two
/// curves. Returns nullopt if the challenger never starts below and ends above.
std::optional<double> FindCrossover(const std::vector<double>& ranges_m,
                                    const std::vector<double>& incumbent_rr,
                                    const std::vector<double>& challenger_rr);

struct Crossover {
  std::size_t tx_index = 0;
  std::size_t incumbent_rx = 0;
  std::size_t challenger_rx = 0;
  std::optional<double> range_m;
};

/// Crossovers for every transmitter and every ordered receiver pair of a
/// sweep, read off the sweep rows themselves.
std::vector<Crossover> FindCrossovers(const SweepGrid& grid,
                                      const std::vector<SweepRow>& rows);

/// Formats with 9 significant digits; infinities print as "inf" / "-inf".
std::string FormatNumber(double value);

}  // namespace mlidar::optics
