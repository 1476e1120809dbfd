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

#include "mlidar/scan.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "mlidar/random.hpp"

namespace mlidar::scan {
namespace {

void Require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

AngularBox ClipToMirror(const MirrorModel& model, AngularBox b) {
  const double h = model.fov_rad / 2.0;
  b.theta_lo = std::max(b.theta_lo, -h);
  b.theta_hi = std::min(b.theta_hi, h);
  b.phi_lo = std::max(b.phi_lo, -h);
  b.phi_hi = std::min(b.phi_hi, h);
  return b;
}

// Pixel-edge angles of a rectangle, before the mirror clip.
AngularBox EdgeBox(const Intrinsics& k, const PixelRect& r) {
  return {std::atan((r.x0 - 0.5 - k.cx) / k.fx),
          std::atan((r.x1 - 0.5 - k.cx) / k.fx),
          std::atan((r.y0 - 0.5 - k.cy) / k.fy),
          std::atan((r.y1 - 0.5 - k.cy) / k.fy)};
}

std::size_t IntSqrt(std::size_t n) {
  auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::size_t PixelCap(const Intrinsics& k) {
  return static_cast<std::size_t>(k.width) * static_cast<std::size_t>(k.height);
}

}  // namespace

void MirrorModel::Validate() const {
  Require(fov_rad > 0.0 && fov_rad < std::numbers::pi,
          "mirror FOV must be in (0, pi)");
  Require(theta_axis.gain_rad_per_v != 0.0 && phi_axis.gain_rad_per_v != 0.0,
          "mirror axis gain must be nonzero");
  Require(sample_rate_hz > 0.0 && std::isfinite(sample_rate_hz),
          "sample rate must be > 0");
  Require(frame_overhead_s >= 0.0 && std::isfinite(frame_overhead_s),
          "frame overhead must be >= 0");
}

const std::vector<BudgetObservation> kPrototypeBudgetTable = {
    {30.0, 28.0}, {24.0, 40.0}, {18.0, 60.0}, {12.0, 104.0}, {6.0, 231.0}};

BudgetFit FitBudget(std::span<const BudgetObservation> obs) {
  if (obs.size() < 2) {
    throw Error(ErrorCode::kSingularFit, "need at least two observations");
  }
  // samples = rate * x + b with x = 1/fps and b = -rate * overhead.
  double mx = 0.0;
  double my = 0.0;
  for (const auto& o : obs) {
    Require(o.fps > 0.0 && std::isfinite(o.samples), "invalid observation");
    mx += 1.0 / o.fps;
    my += o.samples;
  }
  mx /= obs.size();
  my /= obs.size();
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& o : obs) {
    const double dx = 1.0 / o.fps - mx;
    sxx += dx * dx;
    sxy += dx * (o.samples - my);
  }
  if (!(sxx > 1e-12 * mx * mx)) {
    throw Error(ErrorCode::kSingularFit, "all observations share one frame rate");
  }
  BudgetFit fit;
  fit.sample_rate_hz = sxy / sxx;
  if (!(fit.sample_rate_hz > 0.0)) {
    throw Error(ErrorCode::kSingularFit, "fitted sample rate is not positive");
  }
  const double intercept = my - fit.sample_rate_hz * mx;
  fit.frame_overhead_s = -intercept / fit.sample_rate_hz;
  double ss = 0.0;
  for (const auto& o : obs) {
    const double r =
        o.samples - (1.0 / o.fps - fit.frame_overhead_s) * fit.sample_rate_hz;
    fit.residuals.push_back(r);
    ss += r * r;
  }
  fit.rmse_samples = std::sqrt(ss / obs.size());
  return fit;
}

MirrorModel PrototypeMirror() {
  const BudgetFit fit = FitBudget(kPrototypeBudgetTable);
  MirrorModel m;
  m.sample_rate_hz = fit.sample_rate_hz;
  m.frame_overhead_s = std::max(0.0, fit.frame_overhead_s);
  return m;
}

std::size_t Budget(const MirrorModel& model, double fps) {
  model.Validate();
  Require(fps > 0.0 && std::isfinite(fps), "fps must be > 0");
  const double usable = 1.0 / fps - model.frame_overhead_s;
  if (!(usable > 0.0)) {
    throw Error(ErrorCode::kOverheadExceedsFrame,
                "frame overhead exceeds the frame period at " +
                    std::to_string(fps) + " fps");
  }
  return static_cast<std::size_t>(std::floor(usable * model.sample_rate_hz));
}

double FrameRateFor(const MirrorModel& model, std::size_t samples) {
  model.Validate();
  return 1.0 / (model.frame_overhead_s +
                static_cast<double>(samples) / model.sample_rate_hz);
}

const char* ToString(Regime regime) {
  switch (regime) {
    case Regime::kFullFov: return "full_fov";
    case Regime::kEntropyAdaptive: return "entropy_adaptive";
    case Regime::kFoveatedRoi: return "foveated_roi";
    case Regime::kDensitySweep: return "density_sweep";
  }
  return "full_fov";
}

Regime ParseRegime(const std::string& name) {
  if (name == "full_fov" || name == "full") return Regime::kFullFov;
  if (name == "entropy_adaptive" || name == "entropy") {
    return Regime::kEntropyAdaptive;
  }
  if (name == "foveated_roi" || name == "foveated") return Regime::kFoveatedRoi;
  if (name == "density_sweep" || name == "density-sweep") {
    return Regime::kDensitySweep;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown regime '" + name + "'");
}

void Roi::Validate(int width, int height) const {
  if (!rect.within(width, height)) {
    throw Error(ErrorCode::kRoiOutOfBounds,
                "ROI (" + std::to_string(rect.x0) + "," +
                    std::to_string(rect.y0) + ")-(" + std::to_string(rect.x1) +
                    "," + std::to_string(rect.y1) + ") is outside the " +
                    std::to_string(width) + "x" + std::to_string(height) +
                    " image");
  }
  Require(inside_density > 0.0 && inside_density <= 1.0,
          "ROI inside density must be in (0, 1]");
  Require(outside_density >= 0.0 && outside_density <= inside_density,
          "ROI outside density must be in [0, inside density]");
}

AngularBox ImageBox(const MirrorModel& model, const Intrinsics& k) {
  k.Validate();
  return ClipToMirror(model, EdgeBox(k, {0, 0, k.width, k.height}));
}

AngularBox RectBox(const MirrorModel& model, const Intrinsics& k,
                   const PixelRect& rect) {
  k.Validate();
  return ClipToMirror(model, EdgeBox(k, rect));
}

std::vector<ScanSample> EquiAngularGrid(std::size_t n, const AngularBox& box) {
  std::vector<ScanSample> out;
  if (n == 0) return out;
  out.reserve(n);
  const std::size_t cols = IntSqrt(n);
  const std::size_t full_rows = n / cols;
  const std::size_t rem = n % cols;
  const std::size_t rows = full_rows + (rem > 0 ? 1 : 0);
  const double dtheta = (box.theta_hi - box.theta_lo) / cols;
  const double dphi = (box.phi_hi - box.phi_lo) / rows;
  for (std::size_t r = 0; r < rows; ++r) {
    const double phi = box.phi_lo + (r + 0.5) * dphi;
    const bool partial = r == full_rows;
    const std::size_t count = partial ? rem : cols;
    const double shift = partial ? (cols - rem) / 2.0 : 0.0;
    for (std::size_t c = 0; c < count; ++c) {
      out.push_back({0.0, box.theta_lo + (c + shift + 0.5) * dtheta, phi});
    }
  }
  return out;
}

void SerpentineOrder(std::vector<ScanSample>& samples,
                     const MirrorModel& model) {
  std::sort(samples.begin(), samples.end(),
            [](const ScanSample& a, const ScanSample& b) {
              if (a.phi_rad != b.phi_rad) return a.phi_rad < b.phi_rad;
              return a.theta_rad < b.theta_rad;
            });
  std::size_t row = 0;
  for (std::size_t i = 0; i < samples.size();) {
    std::size_t j = i;
    while (j < samples.size() && samples[j].phi_rad == samples[i].phi_rad) ++j;
    if (row % 2 == 1) std::reverse(samples.begin() + i, samples.begin() + j);
    ++row;
    i = j;
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    samples[i].t_s = static_cast<double>(i) / model.sample_rate_hz;
  }
}

ScanPattern GenerateFullFov(const MirrorModel& model, double fps,
                            const Intrinsics& k) {
  ScanPattern p;
  p.fps = fps;
  p.regime = Regime::kFullFov;
  p.budget = Budget(model, fps);
  p.samples =
      EquiAngularGrid(std::min(p.budget, PixelCap(k)), ImageBox(model, k));
  SerpentineOrder(p.samples, model);
  return p;
}

ScanPattern GenerateFullFovCount(const MirrorModel& model, std::size_t count,
                                 const Intrinsics& k) {
  model.Validate();
  k.Validate();
  ScanPattern p;
  p.regime = Regime::kFullFov;
  p.budget = count;
  p.fps = FrameRateFor(model, count);
  p.samples = EquiAngularGrid(std::min(count, PixelCap(k)), ImageBox(model, k));
  SerpentineOrder(p.samples, model);
  return p;
}

ScanPattern GenerateEntropyAdaptive(const MirrorModel& model, double fps,
                                    const Image<double>& entropy,
                                    const Intrinsics& k, std::uint64_t seed) {
  k.Validate();
  if (!entropy.same_shape(k.width, k.height) || entropy.channels() != 1) {
    throw Error(ErrorCode::kDimensionMismatch,
                "entropy map does not match the image size");
  }
  double max_value = 0.0;
  for (double v : entropy.data()) {
    Require(std::isfinite(v) && v >= 0.0, "entropy must be finite and >= 0");
    max_value = std::max(max_value, v);
  }
  if (max_value == 0.0) {
    ScanPattern p = GenerateFullFov(model, fps, k);
    p.seed = seed;
    p.warning = "DegenerateMap: all-zero entropy map, fell back to full FOV";
    return p;
  }

  ScanPattern p;
  p.fps = fps;
  p.regime = Regime::kEntropyAdaptive;
  p.seed = seed;
  p.budget = Budget(model, fps);

  // Weighted sampling without replacement (Efraimidis-Spirakis): keep the n
  // largest log(U) / w keys.
  const double floor_weight = 0.01 * max_value;
  const double half = model.fov_rad / 2.0;
  struct Keyed {
    double key;
    std::size_t index;
  };
  std::vector<Keyed> keys;
  keys.reserve(entropy.pixel_count());
  Rng rng(MixSeed(seed, 0xe7u));
  for (int y = 0; y < k.height; ++y) {
    for (int x = 0; x < k.width; ++x) {
      const double u = rng.UniformOpen();
      const Direction d = k.DirectionOf(x, y);
      if (std::abs(d.theta) > half || std::abs(d.phi) > half) continue;
      const double w = entropy.at(x, y) + floor_weight;
      keys.push_back({std::log(u) / w,
                      static_cast<std::size_t>(y) * k.width + x});
    }
  }
  const std::size_t n = std::min(p.budget, keys.size());
  auto by_key = [](const Keyed& a, const Keyed& b) {
    if (a.key != b.key) return a.key > b.key;
    return a.index < b.index;
  };
  std::partial_sort(keys.begin(), keys.begin() + n, keys.end(), by_key);
  p.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int x = static_cast<int>(keys[i].index % k.width);
    const int y = static_cast<int>(keys[i].index / k.width);
    const Direction d = k.DirectionOf(x, y);
    p.samples.push_back({0.0, d.theta, d.phi});
  }
  SerpentineOrder(p.samples, model);
  return p;
}

ScanPattern GenerateFoveatedCount(const MirrorModel& model, std::size_t count,
                                  const Roi& roi, const Intrinsics& k) {
  model.Validate();
  k.Validate();
  roi.Validate(k.width, k.height);
  count = std::min(count, PixelCap(k));

  const double area_in = static_cast<double>(roi.rect.area());
  const double area_out = static_cast<double>(PixelCap(k)) - area_in;
  const double w_in = roi.inside_density * area_in;
  const double w_out = roi.outside_density * area_out;
  const auto n_in = static_cast<std::size_t>(
      std::llround(static_cast<double>(count) * w_in / (w_in + w_out)));
  const std::size_t n_out = count - n_in;

  const AngularBox roi_box = RectBox(model, k, roi.rect);
  std::vector<ScanSample> samples = EquiAngularGrid(n_in, roi_box);

  if (n_out > 0) {
    // Smallest full-image grid with at least n_out points outside the ROI,
    // thinned evenly to exactly n_out.
    const AngularBox image_box = ImageBox(model, k);
    const double total = static_cast<double>(PixelCap(k));
    std::size_t m = std::max<std::size_t>(
        n_out, static_cast<std::size_t>(n_out * total / area_out));
    const std::size_t m_limit = 4 * PixelCap(k) + 16;
    for (;; ++m) {
      if (m > m_limit) {
        throw Error(ErrorCode::kInvalidArgument,
                    "cannot place outside-ROI samples");
      }
      std::vector<ScanSample> outside;
      for (const auto& s : EquiAngularGrid(m, image_box)) {
        if (!roi_box.Contains(s.theta_rad, s.phi_rad)) outside.push_back(s);
      }
      if (outside.size() < n_out) continue;
      for (std::size_t i = 0; i < n_out; ++i) {
        samples.push_back(outside[i * outside.size() / n_out]);
      }
      break;
    }
  }

  ScanPattern p;
  p.fps = FrameRateFor(model, count);
  p.regime = Regime::kFoveatedRoi;
  p.budget = count;
  p.samples = std::move(samples);
  SerpentineOrder(p.samples, model);
  return p;
}

ScanPattern GenerateFoveated(const MirrorModel& model, double fps,
                             const Roi& roi, const Intrinsics& k) {
  const std::size_t budget = Budget(model, fps);
  ScanPattern p = GenerateFoveatedCount(model, budget, roi, k);
  p.fps = fps;
  p.budget = budget;
  return p;
}

std::vector<ScanPattern> GenerateDensitySweep(
    const MirrorModel& model, const PixelRect& rect,
    std::span<const std::size_t> counts, const Intrinsics& k) {
  std::vector<ScanPattern> out;
  for (std::size_t n : counts) {
    ScanPattern p = GenerateFoveatedCount(model, n, Roi{rect, 1.0, 0.0}, k);
    p.regime = Regime::kDensitySweep;
    out.push_back(std::move(p));
  }
  return out;
}

nlohmann::json ToJson(const ScanPattern& pattern) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : pattern.samples) {
    samples.push_back(
        {{"t_s", s.t_s}, {"theta_rad", s.theta_rad}, {"phi_rad", s.phi_rad}});
  }
  nlohmann::json j = {{"fps", pattern.fps},
                      {"regime", ToString(pattern.regime)},
                      {"seed", pattern.seed},
                      {"budget", pattern.budget},
                      {"samples", samples}};
  if (!pattern.warning.empty()) j["warning"] = pattern.warning;
  return j;
}

ScanPattern PatternFromJson(const nlohmann::json& j) {
  try {
    ScanPattern p;
    p.fps = j.at("fps").get<double>();
    p.regime = ParseRegime(j.at("regime").get<std::string>());
    p.seed = j.at("seed").get<std::uint64_t>();
    p.budget = j.at("budget").get<std::size_t>();
    p.warning = j.value("warning", std::string());
    for (const auto& s : j.at("samples")) {
      p.samples.push_back({s.at("t_s").get<double>(),
                           s.at("theta_rad").get<double>(),
                           s.at("phi_rad").get<double>()});
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedHeader,
                std::string("bad scan pattern: ") + e.what());
  }
}

}  // namespace mlidar::scan
