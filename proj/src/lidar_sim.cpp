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

#include "mlidar/lidar_sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "mlidar/pnm.hpp"
#include "mlidar/random.hpp"

namespace mlidar::lidar {
namespace fs = std::filesystem;
using nlohmann::json;

CalibrationModel FitCalibration(
    std::span<const std::pair<double, double>> pairs) {
  if (pairs.size() < 2) {
    throw Error(ErrorCode::kSingularFit, "calibration needs >= 2 pairs");
  }
  double mv = 0.0;
  double mr = 0.0;
  for (const auto& [v, r] : pairs) {
    if (!std::isfinite(v) || !std::isfinite(r)) {
      throw Error(ErrorCode::kInvalidArgument, "non-finite calibration pair");
    }
    mv += v;
    mr += r;
  }
  mv /= pairs.size();
  mr /= pairs.size();
  double svv = 0.0;
  double svr = 0.0;
  for (const auto& [v, r] : pairs) {
    svv += (v - mv) * (v - mv);
    svr += (v - mv) * (r - mr);
  }
  if (!(svv > 1e-12 * std::max(1.0, mv * mv))) {
    throw Error(ErrorCode::kSingularFit, "calibration voltages are all equal");
  }
  CalibrationModel m;
  m.gain_m_per_v = svr / svv;
  if (!(m.gain_m_per_v > 0.0)) {
    throw Error(ErrorCode::kSingularFit, "fitted calibration gain is not positive");
  }
  m.offset_m = mr - m.gain_m_per_v * mv;
  double ss = 0.0;
  for (const auto& [v, r] : pairs) {
    const double e = r - m.ToRange(v);
    ss += e * e;
  }
  m.rmse_m = std::sqrt(ss / pairs.size());
  return m;
}

double FootprintRadiusPx(double dot_solid_angle_sr, const Intrinsics& k) {
  if (!(dot_solid_angle_sr >= 0.0) || dot_solid_angle_sr >= 2.0 * std::numbers::pi) {
    throw Error(ErrorCode::kInvalidArgument, "dot solid angle out of range");
  }
  const double half_apex =
      std::acos(1.0 - dot_solid_angle_sr / (2.0 * std::numbers::pi));
  return std::max(1.0, k.fx * std::tan(half_apex));
}

SparseDepth Capture(const SceneFrame& frame, const Intrinsics& k,
                    const scan::ScanPattern& pattern,
                    const CaptureParams& params, std::uint64_t noise_seed) {
  k.Validate();
  if (!frame.depth.same_shape(k.width, k.height)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "frame depth does not match the intrinsics");
  }
  if (!(params.noise_coefficient >= 0.0) || !(params.z_max_m > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid capture parameters");
  }

  const double radius = FootprintRadiusPx(params.dot_solid_angle_sr, k);
  std::vector<std::pair<int, int>> disk{{0, 0}};
  const int reach = static_cast<int>(std::floor(radius));
  for (int dy = -reach; dy <= reach; ++dy) {
    for (int dx = -reach; dx <= reach; ++dx) {
      if ((dx != 0 || dy != 0) && dx * dx + dy * dy <= radius * radius) {
        disk.push_back({dx, dy});
      }
    }
  }

  SparseDepth out;
  out.depth = DepthMap(k.width, k.height, 1, 0.0);
  out.fps = pattern.fps;
  out.regime = pattern.regime;
  Rng rng(MixSeed(noise_seed, 0x11da4u));

  for (const auto& s : pattern.samples) {
    // One draw per scheduled sample keeps the noise of a given sample
    // independent of which other samples were dropped.
    const double noise = rng.Normal();
    int x = 0;
    int y = 0;
    if (!k.PixelOf({s.theta_rad, s.phi_rad}, x, y) ||
        !(frame.depth.at(x, y) > 0.0) || out.depth.at(x, y) != 0.0) {
      ++out.dropped;
      continue;
    }
    double sum = 0.0;
    int count = 0;
    for (const auto& [dx, dy] : disk) {
      if (!frame.depth.contains(x + dx, y + dy)) continue;
      const double v = frame.depth.at(x + dx, y + dy);
      if (v > 0.0) {
        sum += v;
        ++count;
      }
    }
    const double truth = sum / count;
    if (truth > params.z_max_m) {
      ++out.dropped;
      continue;
    }
    double z = truth + params.noise_coefficient * truth * noise;
    z = std::clamp(z, 1e-3, params.z_max_m);
    Sample rec;
    rec.t_s = s.t_s;
    rec.theta_rad = s.theta_rad;
    rec.phi_rad = s.phi_rad;
    rec.x = x;
    rec.y = y;
    rec.range_m = z;
    rec.raw_voltage = params.response.ToVolts(z);
    out.depth.at(x, y) = z;
    out.samples.push_back(rec);
  }
  return out;
}

metrics::MetricsReport EvaluateAgainstReference(const SparseDepth& sparse,
                                                const DepthMap& reference) {
  if (!sparse.depth.same_shape(reference)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "sparse depth and reference differ in size");
  }
  Mask sampled(reference.width(), reference.height(), 1, 0);
  for (const auto& s : sparse.samples) sampled.at(s.x, s.y) = 1;
  const auto terms = metrics::CollectTerms(sparse.depth, reference, &sampled);
  if (terms.size() == 0) {
    throw Error(ErrorCode::kNoOverlap,
                "no sample lands on a valid reference pixel");
  }
  return terms.Finalize();
}

std::vector<metrics::Point3> SamplePoints(const SparseDepth& sparse,
                                          const Intrinsics& k) {
  (void)k;
  std::vector<metrics::Point3> pts;
  pts.reserve(sparse.samples.size());
  for (const auto& s : sparse.samples) {
    pts.push_back({s.range_m * std::tan(s.theta_rad),
                   s.range_m * std::tan(s.phi_rad), s.range_m});
  }
  return pts;
}

json SamplesToJson(const SparseDepth& sparse) {
  json samples = json::array();
  for (const auto& s : sparse.samples) {
    samples.push_back({{"t_s", s.t_s},
                       {"theta_rad", s.theta_rad},
                       {"phi_rad", s.phi_rad},
                       {"x", s.x},
                       {"y", s.y},
                       {"range_m", s.range_m},
                       {"raw_voltage", s.raw_voltage}});
  }
  return {{"fps", sparse.fps},
          {"regime", scan::ToString(sparse.regime)},
          {"width", sparse.depth.width()},
          {"height", sparse.depth.height()},
          {"dropped", sparse.dropped},
          {"samples", samples}};
}

void SaveSparse(const fs::path& stem, const SparseDepth& sparse) {
  pnm::WriteDepthPgm(fs::path(stem.string() + ".pgm"), sparse.depth);
  const fs::path json_path(stem.string() + ".json");
  std::ofstream out(json_path);
  if (!out) {
    throw Error(ErrorCode::kMissingFile, "cannot write " + json_path.string());
  }
  out << SamplesToJson(sparse).dump() << '\n';
}

SparseDepth LoadSparse(const fs::path& stem) {
  const fs::path json_path(stem.string() + ".json");
  std::ifstream in(json_path);
  if (!in) throw Error(ErrorCode::kMissingFile, "missing " + json_path.string());
  SparseDepth sparse;
  try {
    json j;
    in >> j;
    const DepthMap mm = pnm::ReadDepthPgm(fs::path(stem.string() + ".pgm"));
    if (mm.width() != j.at("width").get<int>() ||
        mm.height() != j.at("height").get<int>()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  json_path.string() + " disagrees with its .pgm size");
    }
    sparse.fps = j.at("fps").get<double>();
    sparse.regime = scan::ParseRegime(j.at("regime").get<std::string>());
    sparse.dropped = j.at("dropped").get<std::size_t>();
    sparse.depth = DepthMap(mm.width(), mm.height(), 1, 0.0);
    for (const auto& js : j.at("samples")) {
      Sample s;
      s.t_s = js.at("t_s").get<double>();
      s.theta_rad = js.at("theta_rad").get<double>();
      s.phi_rad = js.at("phi_rad").get<double>();
      s.x = js.at("x").get<int>();
      s.y = js.at("y").get<int>();
      s.range_m = js.at("range_m").get<double>();
      s.raw_voltage = js.at("raw_voltage").get<double>();
      if (!sparse.depth.contains(s.x, s.y)) {
        throw Error(ErrorCode::kMalformedHeader,
                    json_path.string() + ": sample outside the image");
      }
      sparse.depth.at(s.x, s.y) = s.range_m;
      sparse.samples.push_back(s);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedHeader, json_path.string() + ": " + e.what());
  }
  return sparse;
}

}  // namespace mlidar::lidar
