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

#include "mlidar/optics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>

#include "mlidar/error.hpp"
#include "mlidar/parallel.hpp"

namespace mlidar::optics {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

bool Positive(double v) { return std::isfinite(v) && v > 0.0; }

void Require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

// Closed interval check with a small relative slack, so 0.1 mm typed as
// 0.1 * 1e-3 still counts as the lower bound.
bool InBox(double v, double lo, double hi) {
  const double slack = 1e-9;
  return v >= lo * (1.0 - slack) && v <= hi * (1.0 + slack);
}

}  // namespace

void TransmitterSpec::Validate() const {
  Require(std::isfinite(beam_quality_m) && beam_quality_m >= 1.0,
          "beam quality M must be >= 1");
  Require(Positive(waist_radius_m), "beam waist w_o must be > 0");
  Require(Positive(wavelength_m), "wavelength must be > 0");
  Require(Positive(mirror_fov_rad) && mirror_fov_rad <= kPi,
          "mirror FOV must be in (0, pi]");
}

const char* ToString(ReceiverKind kind) {
  switch (kind) {
    case ReceiverKind::kRetroreflective: return "retroreflective";
    case ReceiverKind::kReceiverArray: return "receiver_array";
    case ReceiverKind::kSingleDetector: return "single_detector";
  }
  return "unknown";
}

ReceiverKind ParseReceiverKind(const std::string& name) {
  if (name == "retro" || name == "retroreflective") {
    return ReceiverKind::kRetroreflective;
  }
  if (name == "array" || name == "receiver_array") {
    return ReceiverKind::kReceiverArray;
  }
  if (name == "single" || name == "single_detector") {
    return ReceiverKind::kSingleDetector;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown design kind '" + name + "'");
}

void ReceiverSpec::Validate() const {
  Require(detector_count >= 1, "detector count n must be >= 1");
  Require(Positive(aperture_m), "aperture A must be > 0");
  Require(Positive(image_distance_m), "image distance u must be > 0");
  Require(Positive(focal_length_m), "focal length f must be > 0");
}

ReceiverSpec Effective(const ReceiverSpec& rx, const TransmitterSpec& tx) {
  ReceiverSpec out = rx;
  switch (rx.kind) {
    case ReceiverKind::kRetroreflective:
      out.aperture_m = tx.waist_radius_m;
      out.detector_count = 1;
      break;
    case ReceiverKind::kSingleDetector:
      out.detector_count = 1;
      break;
    case ReceiverKind::kReceiverArray:
      break;
  }
  return out;
}

double CameraSpec::pixel_support_sr() const {
  Require(Positive(fov_rad) && fov_rad <= 2.0 * kPi, "camera FOV must be > 0");
  Require(pixel_count > 0, "camera pixel count must be > 0");
  return ApexToSolidAngle(fov_rad) / static_cast<double>(pixel_count);
}

std::string FlagString(std::uint32_t flags) {
  if (flags == kFlagOk) return "ok";
  std::string out;
  auto add = [&](std::uint32_t bit, const char* name) {
    if (flags & bit) {
      if (!out.empty()) out += '+';
      out += name;
    }
  };
  add(kFlagNonPhysicalDivergence, "nonphysical_divergence");
  add(kFlagDegenerateFocus, "degenerate_focus");
  add(kFlagZeroKernel, "zero_kernel");
  return out;
}

double BeamDivergence(const TransmitterSpec& tx) {
  tx.Validate();
  const double m = tx.beam_quality_m;
  return m * m * tx.wavelength_m / (tx.waist_radius_m * kPi);
}

double ApexToSolidAngle(double apex_rad) {
  return 2.0 * kPi * (1.0 - std::cos(apex_rad / 2.0));
}

double SolidAngleToApex(double solid_angle_sr) {
  Require(solid_angle_sr >= 0.0 && solid_angle_sr <= 4.0 * kPi,
          "solid angle must be in [0, 4 pi]");
  return 2.0 * std::acos(1.0 - solid_angle_sr / (2.0 * kPi));
}

double AcuityGain(double laser_solid_angle_sr, const CameraSpec& camera) {
  Require(Positive(laser_solid_angle_sr), "laser solid angle must be > 0");
  return laser_solid_angle_sr / camera.pixel_support_sr();
}

double AcuityGain(const TransmitterSpec& tx, const CameraSpec& camera) {
  const double apex = BeamDivergence(tx);
  Require(apex < 2.0 * kPi, "beam divergence exceeds a full sphere");
  return AcuityGain(ApexToSolidAngle(apex), camera);
}

double KernelAngle(const ReceiverSpec& rx, double range_m) {
  const double a = rx.aperture_m;
  const double u = rx.image_distance_m;
  const double f = rx.focal_length_m;
  const double z = range_m;
  Require(z != f, "kernel angle is undefined at Z = f");
  const double defocus = (z * u - f * u - f * z) / (z - f);
  return 2.0 * std::atan(a * (z - f) * std::abs(defocus) / (2.0 * u * f * z));
}

DesignCharacterization Characterize(const TransmitterSpec& tx,
                                    const ReceiverSpec& rx_in, double range_m) {
  tx.Validate();
  const ReceiverSpec rx = Effective(rx_in, tx);
  rx.Validate();
  Require(Positive(range_m), "range Z must be > 0");

  DesignCharacterization out;
  out.range_m = range_m;

  const double z = range_m;
  const double laser = BeamDivergence(tx);
  const bool nonphysical = laser >= kPi;
  if (nonphysical) out.flags |= kFlagNonPhysicalDivergence;
  const double half_tan = std::tan(laser / 2.0);
  const double u = rx.image_distance_m;
  const double a = rx.aperture_m;

  switch (rx.kind) {
    case ReceiverKind::kRetroreflective: {
      const double w0 = tx.waist_radius_m;
      out.volume_m3 = kPi * u * w0 * w0 / 12.0;
      out.fov_rad = tx.mirror_fov_rad;
      out.uncapped_fov_rad = tx.mirror_fov_rad;
      if (nonphysical) {
        out.received_radiance_per_m = 0.0;
      } else if (2.0 * std::atan(w0 / (2.0 * z)) >= laser) {
        // The received angle cannot exceed the transmitted one.
        out.received_radiance_per_m = 1.0 / (2.0 * z * half_tan);
      } else {
        out.received_radiance_per_m =
            std::atan(w0 / (2.0 * z)) / (laser * z * half_tan);
      }
      break;
    }
    case ReceiverKind::kReceiverArray: {
      out.volume_m3 = u * a * a;
      out.uncapped_fov_rad = 2.0 * std::atan(a / (2.0 * u));
      out.fov_rad = std::min(out.uncapped_fov_rad, tx.mirror_fov_rad);
      out.received_radiance_per_m = nonphysical ? 0.0 : 1.0 / (2.0 * z * half_tan);
      break;
    }
    case ReceiverKind::kSingleDetector: {
      out.volume_m3 = kPi * u * a * a / 12.0;
      const double f = rx.focal_length_m;
      if (z <= f) {
        out.flags |= kFlagDegenerateFocus;
        out.fov_rad = -kInf;
        out.uncapped_fov_rad = -kInf;
        out.received_radiance_per_m = -kInf;
        break;
      }
      const double defocus = (z * u - f * u - f * z) / (z - f);
      const double arg = a * (z - f) * std::abs(defocus) / (2.0 * u * f * z);
      if (arg == 0.0) {
        out.flags |= kFlagZeroKernel;
        out.fov_rad = 0.0;
        out.uncapped_fov_rad = 0.0;
        out.received_radiance_per_m = kInf;
        break;
      }
      out.uncapped_fov_rad = 2.0 * std::atan(arg);
      out.fov_rad = std::min(out.uncapped_fov_rad, tx.mirror_fov_rad);
      out.received_radiance_per_m =
          nonphysical ? 0.0 : 1.0 / (4.0 * z * std::atan(arg) * half_tan);
      break;
    }
  }
  return out;
}

double FovLimitUnderfocused(const ReceiverSpec& rx) {
  rx.Validate();
  if (rx.kind != ReceiverKind::kSingleDetector ||
      rx.image_distance_m >= rx.focal_length_m) {
    throw Error(ErrorCode::kInvalidVariant,
                "FOV limit needs an under-focused single detector (u < f)");
  }
  const double u = rx.image_distance_m;
  const double f = rx.focal_length_m;
  return 2.0 * std::atan(rx.aperture_m * (f - u) / (2.0 * u * f));
}

void SweepGrid::Validate() const {
  Require(!transmitters.empty(), "sweep needs at least one transmitter");
  Require(!receivers.empty(), "sweep needs at least one receiver");
  Require(!ranges_m.empty(), "sweep needs at least one range");
  for (const auto& tx : transmitters) {
    tx.Validate();
    Require(InBox(tx.beam_quality_m, 1.0, 100.0), "M outside [1, 100]");
    Require(InBox(tx.waist_radius_m, 0.1e-3, 5e-3),
            "w_o outside [0.1 mm, 5 mm]");
  }
  for (const auto& rx : receivers) {
    rx.Validate();
    Require(InBox(rx.aperture_m, 0.0, 0.1), "A outside (0, 10 cm]");
    Require(InBox(rx.focal_length_m, 0.0, 0.05), "f outside (0, 50 mm]");
    Require(InBox(rx.image_distance_m, 0.0, 0.05), "u outside (0, 50 mm]");
  }
  for (double z : ranges_m) Require(Positive(z), "ranges must be > 0");
}

std::vector<SweepRow> Sweep(const SweepGrid& grid, int jobs) {
  grid.Validate();
  const std::size_t nr = grid.receivers.size();
  const std::size_t nz = grid.ranges_m.size();
  std::vector<SweepRow> rows(grid.size());
  ParallelFor(rows.size(), jobs, [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.tx_index = i / (nr * nz);
    row.rx_index = (i / nz) % nr;
    row.range_index = i % nz;
    row.tx = grid.transmitters[row.tx_index];
    row.rx = Effective(grid.receivers[row.rx_index], row.tx);
    row.result = Characterize(row.tx, row.rx, grid.ranges_m[row.range_index]);
  });
  return rows;
}

const char* const kSweepCsvHeader =
    "design_kind,M,w0_m,lambda_m,n,A_m,u_m,f_m,Z_m,fov_rad,rr_per_m,volume_m3,"
    "flag";

std::string FormatNumber(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

void WriteSweepCsv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepCsvHeader << '\n';
  for (const auto& r : rows) {
    out << ToString(r.rx.kind) << ',' << FormatNumber(r.tx.beam_quality_m)
        << ',' << FormatNumber(r.tx.waist_radius_m) << ','
        << FormatNumber(r.tx.wavelength_m) << ',' << r.rx.detector_count << ','
        << FormatNumber(r.rx.aperture_m) << ','
        << FormatNumber(r.rx.image_distance_m) << ','
        << FormatNumber(r.rx.focal_length_m) << ','
        << FormatNumber(r.result.range_m) << ','
        << FormatNumber(r.result.fov_rad) << ','
        << FormatNumber(r.result.received_radiance_per_m) << ','
        << FormatNumber(r.result.volume_m3) << ','
        << FlagString(r.result.flags) << '\n';
  }
}

std::optional<double> FindCrossover(const std::vector<double>& ranges_m,
                                    const std::vector<double>& incumbent_rr,
                                    const std::vector<double>& challenger_rr) {
  Require(ranges_m.size() == incumbent_rr.size() &&
              ranges_m.size() == challenger_rr.size(),
          "crossover curves must have equal length");
  struct Point {
    double log_z;
    double log_ratio;
  };
  std::vector<Point> pts;
  for (std::size_t i = 0; i < ranges_m.size(); ++i) {
    const double a = incumbent_rr[i];
    const double b = challenger_rr[i];
    if (!Positive(a) || !Positive(b) || !Positive(ranges_m[i])) continue;
    pts.push_back({std::log(ranges_m[i]), std::log(b) - std::log(a)});
  }
  // Last point where the challenger is not ahead; it must be followed by a
  // point where it is, and stay ahead from there on.
  std::optional<std::size_t> last_behind;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].log_ratio <= 0.0) last_behind = i;
  }
  if (!last_behind || *last_behind + 1 >= pts.size()) return std::nullopt;
  const Point& p0 = pts[*last_behind];
  const Point& p1 = pts[*last_behind + 1];
  const double t = p0.log_ratio / (p0.log_ratio - p1.log_ratio);
  return std::exp(p0.log_z + t * (p1.log_z - p0.log_z));
}

std::vector<Crossover> FindCrossovers(const SweepGrid& grid,
                                      const std::vector<SweepRow>& rows) {
  const std::size_t nr = grid.receivers.size();
  const std::size_t nz = grid.ranges_m.size();
  Require(rows.size() == grid.size(), "rows do not match the sweep grid");
  std::vector<std::size_t> order(nz);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return grid.ranges_m[a] < grid.ranges_m[b];
  });
  std::vector<double> ranges;
  for (std::size_t k : order) ranges.push_back(grid.ranges_m[k]);

  auto curve = [&](std::size_t t, std::size_t r) {
    std::vector<double> rr;
    for (std::size_t k : order) {
      rr.push_back(rows[(t * nr + r) * nz + k].result.received_radiance_per_m);
    }
    return rr;
  };

  std::vector<Crossover> out;
  for (std::size_t t = 0; t < grid.transmitters.size(); ++t) {
    for (std::size_t a = 0; a < nr; ++a) {
      const auto inc = curve(t, a);
      for (std::size_t b = 0; b < nr; ++b) {
        if (a == b) continue;
        out.push_back({t, a, b, FindCrossover(ranges, inc, curve(t, b))});
      }
    }
  }
  return out;
}

}  // namespace mlidar::optics
