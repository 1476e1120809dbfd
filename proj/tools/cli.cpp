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

#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "mlidar/completion.hpp"
#include "mlidar/error.hpp"
#include "mlidar/foveation.hpp"
#include "mlidar/lidar_sim.hpp"
#include "mlidar/metrics.hpp"
#include "mlidar/optics.hpp"
#include "mlidar/parallel.hpp"
#include "mlidar/pipeline.hpp"
#include "mlidar/pnm.hpp"
#include "mlidar/random.hpp"
#include "mlidar/scan.hpp"
#include "mlidar/scene.hpp"
#include "mlidar/synthetic.hpp"

namespace mlidar::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDegToRad = kPi / 180.0;
constexpr const char* kVersion = "0.1.0";

[[noreturn]] void Usage(const std::string& msg) {
  throw Error(ErrorCode::kInvalidArgument, msg);
}

std::vector<std::string> SplitComma(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double ParseNumber(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    Usage("not a number: '" + text + "'");
  }
  if (used != text.size()) Usage("not a number: '" + text + "'");
  return v;
}

int ParseInt(const std::string& text) {
  const double v = ParseNumber(text);
  if (v != std::floor(v) || std::abs(v) > 1e9) Usage("not an integer: '" + text + "'");
  return static_cast<int>(v);
}

PixelRect ParseRect(const std::string& text) {
  const auto parts = SplitComma(text);
  if (parts.size() != 4) Usage("rectangle must be x0,y0,x1,y1: '" + text + "'");
  return {ParseInt(parts[0]), ParseInt(parts[1]), ParseInt(parts[2]),
          ParseInt(parts[3])};
}

double ParseSigma(const std::string& text) {
  if (text == "inf" || text == "infinity") {
    return std::numeric_limits<double>::infinity();
  }
  return ParseNumber(text);
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kMissingFile, "cannot write " + path.string());
  out << text;
}

void WriteJson(const fs::path& path, const json& j) {
  WriteText(path, j.dump(2) + "\n");
}

json ReadJson(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingFile, "missing " + path.string());
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedHeader, path.string() + ": " + e.what());
  }
}

void EnsureDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorCode::kMissingFile, "cannot create " + dir.string());
  }
}

/// Echo of every option of a subcommand with its resolved value, plus the
/// argument list that reproduces the run.
json ResolvedConfig(const CLI::App& sub, std::vector<std::string>& argv) {
  json cfg = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help") continue;
    if (opt->get_type_size_max() == 0) {
      const bool on = opt->count() > 0;
      cfg[name] = on;
      if (on) argv.push_back("--" + name);
      continue;
    }
    std::string value;
    if (opt->count() > 0) {
      const auto& r = opt->results();
      for (std::size_t i = 0; i < r.size(); ++i) value += (i ? "," : "") + r[i];
    } else {
      value = opt->get_default_str();
    }
    cfg[name] = value;
    if (!value.empty()) {
      argv.push_back("--" + name);
      argv.push_back(value);
    }
  }
  return cfg;
}

struct Context {
  std::string command;
  json config;
  std::vector<std::string> argv;
  std::ostream* out = nullptr;
};

void WriteRunJson(const fs::path& dir, const Context& ctx, const json& extra) {
  json run = {{"tool", "mlidar"},
              {"version", kVersion},
              {"command", ctx.command},
              {"config", ctx.config},
              {"argv", ctx.argv}};
  if (!extra.is_null()) run["results"] = extra;
  WriteJson(dir / "run.json", run);
}

// Shared option groups -------------------------------------------------------

struct MirrorOptions {
  std::string sample_rate_hz;
  std::string overhead_ms;

  void Add(CLI::App* app) {
    app->add_option("--sample-rate-hz", sample_rate_hz,
                    "Mirror sample rate in Hz (default: fit to the prototype table)");
    app->add_option("--overhead-ms", overhead_ms,
                    "Per-frame overhead in milliseconds (default: fitted)");
  }
  scan::MirrorModel Build(double mirror_fov_deg) const {
    scan::MirrorModel m = scan::PrototypeMirror();
    m.fov_rad = mirror_fov_deg * kDegToRad;
    if (!sample_rate_hz.empty()) m.sample_rate_hz = ParseNumber(sample_rate_hz);
    if (!overhead_ms.empty()) m.frame_overhead_s = ParseNumber(overhead_ms) * 1e-3;
    m.Validate();
    return m;
  }
};

struct CaptureOptions {
  double noise_coefficient = lidar::kCalibratedNoiseCoefficient;
  double dot_sr = lidar::kDotSolidAngleSr;

  void Add(CLI::App* app) {
    app->add_option("--noise-coeff", noise_coefficient,
                    "Range noise sigma as a fraction of range (unitless)")
        ->capture_default_str();
    app->add_option("--dot-sr", dot_sr, "Laser dot solid angle in steradians")
        ->capture_default_str();
  }
  lidar::CaptureParams Build(double z_max) const {
    lidar::CaptureParams p;
    p.noise_coefficient = noise_coefficient;
    p.dot_solid_angle_sr = dot_sr;
    p.z_max_m = z_max;
    return p;
  }
};

struct FillOptions {
  double sigma_spatial = 12.0;
  std::string sigma_color = "20";
  int k = 16;
  std::string search = "grid";

  void Add(CLI::App* app) {
    app->add_option("--sigma-spatial-px", sigma_spatial,
                    "Spatial weight scale in pixels")->capture_default_str();
    app->add_option("--sigma-color", sigma_color,
                    "RGB distance scale in gray levels, or 'inf' to disable")
        ->capture_default_str();
    app->add_option("--k", k, "Neighbors per filled pixel")->capture_default_str();
    app->add_option("--search", search, "Neighbor search: grid or brute")
        ->capture_default_str();
  }
  completion::GuidedFillParams Build() const {
    completion::GuidedFillParams p;
    p.sigma_spatial_px = sigma_spatial;
    p.sigma_color = ParseSigma(sigma_color);
    p.k_neighbors = k;
    if (search == "grid") {
      p.search = completion::NeighborSearch::kGrid;
    } else if (search == "brute") {
      p.search = completion::NeighborSearch::kBruteForce;
    } else {
      Usage("--search must be grid or brute");
    }
    p.Validate();
    return p;
  }
};

SceneSequence LoadSceneChecked(const std::string& dir) {
  if (dir.empty()) Usage("a scene directory is required");
  return LoadScene(dir);
}

// optics-sweep ---------------------------------------------------------------

struct SweepOptions {
  std::string design = "all";
  std::string m = "1";
  std::string w0_mm = "5";
  std::string lambda_nm = "1000";
  std::string n = "16";
  std::string a_mm = "100";
  std::string u_mm = "10";
  std::string f_mm = "15";
  std::string z_m = "0.5:100:log50";
  double mirror_fov_deg = 25.0;
  bool crossover = false;
  int jobs = 1;
  std::string out;
};

void CmdOpticsSweep(const SweepOptions& o, const Context& ctx) {
  std::vector<optics::ReceiverKind> kinds;
  for (const auto& d : SplitComma(o.design)) {
    if (d == "all") {
      kinds = {optics::ReceiverKind::kRetroreflective,
               optics::ReceiverKind::kReceiverArray,
               optics::ReceiverKind::kSingleDetector};
    } else {
      try {
        kinds.push_back(optics::ParseReceiverKind(d));
      } catch (const Error&) {
        Usage("unknown design '" + d + "'");
      }
    }
  }
  const auto ms = ParseNumberList(o.m);
  const auto w0s = ParseNumberList(o.w0_mm);
  const auto lambdas = ParseNumberList(o.lambda_nm);
  const auto ns = ParseNumberList(o.n);
  const auto as = ParseNumberList(o.a_mm);
  const auto us = ParseNumberList(o.u_mm);
  const auto fs_ = ParseNumberList(o.f_mm);
  const auto zs = ParseNumberList(o.z_m);

  optics::SweepGrid grid;
  for (double m : ms) {
    for (double w0 : w0s) {
      for (double lam : lambdas) {
        optics::TransmitterSpec tx;
        tx.beam_quality_m = m;
        tx.waist_radius_m = w0 * 1e-3;
        tx.wavelength_m = lam * 1e-9;
        tx.mirror_fov_rad = o.mirror_fov_deg * kDegToRad;
        grid.transmitters.push_back(tx);
      }
    }
  }
  // Each design takes the product of the lists it depends on; other fields
  // echo the first list entry.
  auto first = [](const std::vector<double>& v) { return v.empty() ? 0.0 : v[0]; };
  for (auto kind : kinds) {
    using K = optics::ReceiverKind;
    const std::vector<double> n_list =
        kind == K::kReceiverArray ? ns : std::vector<double>{1.0};
    const std::vector<double> a_list =
        kind == K::kRetroreflective ? std::vector<double>{first(as)} : as;
    const std::vector<double> f_list =
        kind == K::kSingleDetector ? fs_ : std::vector<double>{first(fs_)};
    if (ns.empty() || as.empty() || us.empty() || fs_.empty()) continue;
    for (double n : n_list) {
      for (double a : a_list) {
        for (double u : us) {
          for (double f : f_list) {
            optics::ReceiverSpec rx;
            rx.kind = kind;
            if (n != std::floor(n) || n < 1) Usage("--n must be positive integers");
            rx.detector_count = static_cast<int>(n);
            rx.aperture_m = a * 1e-3;
            rx.image_distance_m = u * 1e-3;
            rx.focal_length_m = f * 1e-3;
            grid.receivers.push_back(rx);
          }
        }
      }
    }
  }
  for (double z : zs) grid.ranges_m.push_back(z);
  grid.Validate();

  const auto rows = optics::Sweep(grid, o.jobs);
  EnsureDir(o.out);
  {
    std::ofstream csv(fs::path(o.out) / "sweep.csv", std::ios::binary);
    optics::WriteSweepCsv(csv, rows);
  }
  json results = {{"rows", rows.size()}};
  if (o.crossover) {
    std::ostringstream csv;
    csv << "M,w0_m,lambda_m,incumbent,incumbent_index,challenger,"
           "challenger_index,z_star_m\n";
    json list = json::array();
    for (const auto& c : optics::FindCrossovers(grid, rows)) {
      const auto& tx = grid.transmitters[c.tx_index];
      const auto& a = grid.receivers[c.incumbent_rx];
      const auto& b = grid.receivers[c.challenger_rx];
      csv << optics::FormatNumber(tx.beam_quality_m) << ','
          << optics::FormatNumber(tx.waist_radius_m) << ','
          << optics::FormatNumber(tx.wavelength_m) << ',' << optics::ToString(a.kind)
          << ',' << c.incumbent_rx << ',' << optics::ToString(b.kind) << ','
          << c.challenger_rx << ','
          << (c.range_m ? optics::FormatNumber(*c.range_m) : "") << '\n';
      if (c.range_m) {
        *ctx.out << "crossover M=" << optics::FormatNumber(tx.beam_quality_m)
                 << " w0=" << optics::FormatNumber(tx.waist_radius_m) << " "
                 << optics::ToString(b.kind) << "#" << c.challenger_rx
                 << " overtakes " << optics::ToString(a.kind) << "#"
                 << c.incumbent_rx << " at Z=" << optics::FormatNumber(*c.range_m)
                 << " m\n";
        list.push_back({{"tx", c.tx_index},
                        {"incumbent", c.incumbent_rx},
                        {"challenger", c.challenger_rx},
                        {"z_star_m", *c.range_m}});
      }
    }
    WriteText(fs::path(o.out) / "crossover.csv", csv.str());
    results["crossovers"] = list;
  }
  WriteRunJson(o.out, ctx, results);
  *ctx.out << "wrote " << rows.size() << " rows to "
           << (fs::path(o.out) / "sweep.csv").string() << "\n";
}

// fit-budget -----------------------------------------------------------------

struct BudgetOptions {
  std::string table;
  std::string out;
};

void CmdFitBudget(const BudgetOptions& o, const Context& ctx) {
  std::vector<scan::BudgetObservation> obs;
  if (o.table.empty()) {
    obs = scan::kPrototypeBudgetTable;
  } else {
    for (const auto& item : SplitComma(o.table)) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) Usage("--table entries are fps:samples");
      obs.push_back({ParseNumber(item.substr(0, colon)),
                     ParseNumber(item.substr(colon + 1))});
    }
  }
  const auto fit = scan::FitBudget(obs);
  scan::MirrorModel model;
  model.sample_rate_hz = fit.sample_rate_hz;
  model.frame_overhead_s = fit.frame_overhead_s;
  json rows = json::array();
  for (std::size_t i = 0; i < obs.size(); ++i) {
    rows.push_back({{"fps", obs[i].fps},
                    {"observed", obs[i].samples},
                    {"predicted", scan::Budget(model, obs[i].fps)},
                    {"residual", fit.residuals[i]}});
  }
  json results = {{"sample_rate_hz", fit.sample_rate_hz},
                  {"frame_overhead_s", fit.frame_overhead_s},
                  {"rmse_samples", fit.rmse_samples},
                  {"table", rows}};
  EnsureDir(o.out);
  WriteJson(fs::path(o.out) / "budget.json", results);
  WriteRunJson(o.out, ctx, results);
  char line[160];
  std::snprintf(line, sizeof(line), "rate %.3f Hz, overhead %.4f ms, rmse %.3f samples\n",
                fit.sample_rate_hz, fit.frame_overhead_s * 1e3, fit.rmse_samples);
  *ctx.out << line;
}

// gen-scene ------------------------------------------------------------------

struct SceneOptions {
  std::string preset = "clutter";
  std::string spec;
  std::uint64_t seed = 0;
  int frames = 0;
  int width = 0;
  int height = 0;
  double z_m = 1.5;
  double near_m = 1.0;
  double far_m = 2.0;
  int px_per_frame = 16;
  int box_px = 64;
  std::string out;
};

void CmdGenScene(const SceneOptions& o, const Context& ctx) {
  synthetic::SyntheticSpec spec;
  if (!o.spec.empty()) {
    spec = synthetic::FromJson(ReadJson(o.spec));
  } else {
    const int w = o.width > 0 ? o.width : (o.preset == "moving-box" ? 320 : 160);
    const int h = o.height > 0 ? o.height : (o.preset == "moving-box" ? 240 : 120);
    if (o.preset == "plane") {
      spec = synthetic::FrontoPlane(o.z_m, w, h);
    } else if (o.preset == "two-planes") {
      spec = synthetic::TwoPlanes(o.near_m, o.far_m, w, h);
    } else if (o.preset == "moving-box") {
      spec = synthetic::MovingBox(o.frames > 0 ? o.frames : 30, o.px_per_frame,
                                  o.box_px, w, h);
    } else if (o.preset == "clutter") {
      spec = synthetic::RandomClutter(o.seed, w, h);
    } else {
      Usage("unknown preset '" + o.preset + "'");
    }
  }
  if (o.frames > 0) spec.frames = o.frames;
  const SceneSequence seq = synthetic::Generate(spec, o.seed);
  EnsureDir(o.out);
  SaveScene(o.out, seq);
  WriteJson(fs::path(o.out) / "spec.json", synthetic::ToJson(spec));
  WriteRunJson(o.out, ctx, {{"frames", seq.frames.size()}});
  *ctx.out << "wrote " << seq.frames.size() << " frames to " << o.out << "\n";
}

// scan -----------------------------------------------------------------------

struct ScanOptions {
  std::string regime = "full";
  std::string scene;
  int frame = 0;
  int width = 160;
  int height = 120;
  double fov_deg = 25.0;
  double mirror_fov_deg = 25.0;
  double fps = 30.0;
  std::string roi;
  double outside_density = 0.0;
  std::string counts = "28,40,60,104,231";
  int window = 9;
  std::uint64_t seed = 0;
  MirrorOptions mirror;
  std::string out;
};

PixelRect EntropyRoi(const RgbImage& rgb, int window, int jobs) {
  const auto map = foveation::ComputeEntropyMap(rgb, window, jobs);
  return foveation::MaxEntropyRoi(map.bits, rgb.width() / 2, rgb.height() / 2);
}

void CmdScan(const ScanOptions& o, const Context& ctx) {
  Intrinsics k;
  double mirror_fov = o.mirror_fov_deg;
  std::optional<SceneSequence> seq;
  const SceneFrame* frame = nullptr;
  if (!o.scene.empty()) {
    seq = LoadScene(o.scene);
    k = seq->meta.intrinsics;
    mirror_fov = seq->meta.mirror_fov_deg;
    for (const auto& f : seq->frames) {
      if (f.index == o.frame) frame = &f;
    }
    if (!frame) Usage("scene has no frame " + std::to_string(o.frame));
  } else {
    k = Intrinsics::FromHorizontalFov(o.width, o.height, o.fov_deg * kDegToRad);
  }
  const auto model = o.mirror.Build(mirror_fov);
  const scan::Regime regime = scan::ParseRegime(o.regime);

  std::vector<scan::ScanPattern> patterns;
  switch (regime) {
    case scan::Regime::kFullFov:
      patterns.push_back(scan::GenerateFullFov(model, o.fps, k));
      break;
    case scan::Regime::kEntropyAdaptive: {
      if (!frame) Usage("the entropy regime needs --scene");
      const auto map = foveation::ComputeEntropyMap(frame->rgb, o.window);
      patterns.push_back(
          scan::GenerateEntropyAdaptive(model, o.fps, map.bits, k, o.seed));
      break;
    }
    case scan::Regime::kFoveatedRoi: {
      PixelRect rect;
      if (o.roi == "auto-entropy") {
        if (!frame) Usage("--roi auto-entropy needs --scene");
        rect = EntropyRoi(frame->rgb, o.window, 1);
      } else if (!o.roi.empty()) {
        rect = ParseRect(o.roi);
      } else {
        Usage("the foveated regime needs --roi");
      }
      patterns.push_back(scan::GenerateFoveated(
          model, o.fps, scan::Roi{rect, 1.0, o.outside_density}, k));
      break;
    }
    case scan::Regime::kDensitySweep: {
      const PixelRect rect = o.roi.empty() ? PixelRect{0, 0, k.width, k.height}
                                           : ParseRect(o.roi);
      std::vector<std::size_t> counts;
      for (double c : ParseNumberList(o.counts)) {
        if (c < 1 || c != std::floor(c)) Usage("--counts must be positive integers");
        counts.push_back(static_cast<std::size_t>(c));
      }
      patterns = scan::GenerateDensitySweep(model, rect, counts, k);
      break;
    }
  }
  for (auto& p : patterns) {
    if (p.regime != scan::Regime::kEntropyAdaptive) p.seed = o.seed;
  }
  EnsureDir(o.out);
  json summary = json::array();
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    const std::string name =
        patterns.size() == 1 ? "pattern.json" : "pattern_" + FrameStem(int(i)) + ".json";
    WriteJson(fs::path(o.out) / name, scan::ToJson(patterns[i]));
    summary.push_back({{"file", name},
                       {"samples", patterns[i].samples.size()},
                       {"fps", patterns[i].fps}});
    *ctx.out << name << ": " << patterns[i].samples.size() << " samples at "
             << patterns[i].fps << " fps\n";
  }
  WriteRunJson(o.out, ctx, summary);
}

// capture --------------------------------------------------------------------

struct CaptureCmdOptions {
  std::string scene;
  std::string regime = "full";
  double fps = 30.0;
  std::string roi;
  double outside_density = 0.0;
  double dense_fps = 6.0;
  double outside_fraction = 0.1;
  int window = 9;
  double alpha = 0.05;
  double threshold = 25.0;
  int min_area = 50;
  int margin = 10;
  std::uint64_t seed = 0;
  int jobs = 1;
  MirrorOptions mirror;
  CaptureOptions capture;
  std::string out;
};

foveation::BackgroundParams BackgroundFrom(double alpha, double threshold,
                                           int min_area, int margin) {
  foveation::BackgroundParams p;
  p.learning_rate = alpha;
  p.diff_threshold = threshold;
  p.min_blob_area = min_area;
  p.margin_px = margin;
  return p;
}

void CmdCapture(const CaptureCmdOptions& o, const Context& ctx) {
  const SceneSequence seq = LoadSceneChecked(o.scene);
  const Intrinsics& k = seq.meta.intrinsics;
  const auto model = o.mirror.Build(seq.meta.mirror_fov_deg);
  const auto params = o.capture.Build(seq.meta.z_max_m);
  const scan::Regime regime = scan::ParseRegime(o.regime);

  std::vector<scan::ScanPattern> patterns;
  std::vector<lidar::SparseDepth> captures;
  std::optional<std::string> trace;
  json extra = json::object();

  if (regime == scan::Regime::kFoveatedRoi && o.roi == "auto-motion") {
    pipeline::MotionLoopParams lp;
    lp.dense_fps = o.dense_fps;
    lp.outside_fraction = o.outside_fraction;
    lp.background = BackgroundFrom(o.alpha, o.threshold, o.min_area, o.margin);
    auto loop = pipeline::RunMotionLoop(seq, model, lp, params, o.seed, o.jobs);
    std::ostringstream csv;
    foveation::WriteRoiTraceHeader(csv);
    for (const auto& f : loop.frames) {
      foveation::WriteRoiTraceRow(csv, f.index, f.detection);
      patterns.push_back(f.pattern);
    }
    trace = csv.str();
    captures = std::move(loop.captures);
    extra["dense_budget"] = loop.dense_budget;
    extra["amortized_fps"] = loop.amortized_fps;
    extra["dense_fps"] = o.dense_fps;
  } else {
    std::vector<std::optional<PixelRect>> rois(seq.frames.size());
    patterns.resize(seq.frames.size());
    if (regime == scan::Regime::kFoveatedRoi) {
      if (o.roi.empty()) Usage("the foveated regime needs --roi");
      if (o.roi != "auto-entropy") {
        const PixelRect rect = ParseRect(o.roi);
        for (auto& r : rois) r = rect;
      }
    } else if (regime == scan::Regime::kDensitySweep) {
      Usage("use the scan command for density sweeps");
    }
    ParallelFor(seq.frames.size(), o.jobs, [&](std::size_t i) {
      const SceneFrame& f = seq.frames[i];
      const std::uint64_t fseed = MixSeed(o.seed, static_cast<std::uint64_t>(f.index));
      switch (regime) {
        case scan::Regime::kFullFov:
          patterns[i] = scan::GenerateFullFov(model, o.fps, k);
          patterns[i].seed = o.seed;
          break;
        case scan::Regime::kEntropyAdaptive: {
          const auto map = foveation::ComputeEntropyMap(f.rgb, o.window);
          patterns[i] = scan::GenerateEntropyAdaptive(model, o.fps, map.bits, k, fseed);
          break;
        }
        default:
          if (!rois[i]) rois[i] = EntropyRoi(f.rgb, o.window, 1);
          patterns[i] = scan::GenerateFoveated(
              model, o.fps, scan::Roi{*rois[i], 1.0, o.outside_density}, k);
          patterns[i].seed = o.seed;
          break;
      }
    });
    if (regime == scan::Regime::kFoveatedRoi) {
      std::ostringstream csv;
      foveation::WriteRoiTraceHeader(csv);
      for (std::size_t i = 0; i < rois.size(); ++i) {
        foveation::Detection d;
        d.roi = rois[i];
        d.area_px = rois[i]->area();
        foveation::WriteRoiTraceRow(csv, seq.frames[i].index, d);
      }
      trace = csv.str();
    }
    captures = pipeline::CaptureSequence(seq, patterns, params, o.seed, o.jobs);
  }

  EnsureDir(o.out);
  json frames = json::array();
  double total = 0.0;
  double scan_time = 0.0;
  for (std::size_t i = 0; i < captures.size(); ++i) {
    const std::string stem = FrameStem(seq.frames[i].index);
    lidar::SaveSparse(fs::path(o.out) / stem, captures[i]);
    WriteJson(fs::path(o.out) / (stem + "_pattern.json"), scan::ToJson(patterns[i]));
    frames.push_back({{"frame", seq.frames[i].index},
                      {"scheduled", patterns[i].samples.size()},
                      {"valid", captures[i].valid_count()},
                      {"dropped", captures[i].dropped},
                      {"fps", patterns[i].fps}});
    total += static_cast<double>(patterns[i].samples.size());
    scan_time += 1.0 / patterns[i].fps;
  }
  if (trace) WriteText(fs::path(o.out) / "roi_trace.csv", *trace);
  extra["frames"] = frames;
  extra["mean_samples_per_frame"] = total / static_cast<double>(captures.size());
  if (!extra.contains("amortized_fps")) {
    extra["amortized_fps"] = static_cast<double>(captures.size()) / scan_time;
  }
  WriteJson(fs::path(o.out) / "summary.json", extra);
  WriteRunJson(o.out, ctx, json());
  char line[160];
  std::snprintf(line, sizeof(line),
                "captured %zu frames, %.2f samples/frame, %.2f fps amortized\n",
                captures.size(), total / static_cast<double>(captures.size()),
                extra["amortized_fps"].get<double>());
  *ctx.out << line;
}

// fovea ----------------------------------------------------------------------

struct FoveaOptions {
  std::string scene;
  std::string mode = "motion";
  int window = 9;
  std::string roi_size;
  double alpha = 0.05;
  double threshold = 25.0;
  int min_area = 50;
  int margin = 10;
  int jobs = 1;
  std::string out;
};

void CmdFovea(const FoveaOptions& o, const Context& ctx) {
  const SceneSequence seq = LoadSceneChecked(o.scene);
  const Intrinsics& k = seq.meta.intrinsics;
  std::ostringstream csv;
  foveation::WriteRoiTraceHeader(csv);
  int detected = 0;
  if (o.mode == "motion") {
    foveation::BackgroundModel bg(
        BackgroundFrom(o.alpha, o.threshold, o.min_area, o.margin));
    for (const auto& f : seq.frames) {
      const auto d = bg.UpdateAndDetect(f.rgb);
      if (d.roi) ++detected;
      foveation::WriteRoiTraceRow(csv, f.index, d);
    }
  } else if (o.mode == "entropy") {
    int rw = k.width / 2;
    int rh = k.height / 2;
    if (!o.roi_size.empty()) {
      const auto x = o.roi_size.find('x');
      if (x == std::string::npos) Usage("--roi-size is WxH in pixels");
      rw = ParseInt(o.roi_size.substr(0, x));
      rh = ParseInt(o.roi_size.substr(x + 1));
    }
    std::vector<foveation::Detection> dets(seq.frames.size());
    ParallelFor(seq.frames.size(), o.jobs, [&](std::size_t i) {
      const auto map = foveation::ComputeEntropyMap(seq.frames[i].rgb, o.window);
      const PixelRect r = foveation::MaxEntropyRoi(map.bits, rw, rh);
      dets[i].roi = r;
      dets[i].blob_box = r;
      dets[i].area_px = r.area();
    });
    for (std::size_t i = 0; i < dets.size(); ++i) {
      ++detected;
      foveation::WriteRoiTraceRow(csv, seq.frames[i].index, dets[i]);
    }
  } else {
    Usage("--mode must be motion or entropy");
  }
  EnsureDir(o.out);
  WriteText(fs::path(o.out) / "roi_trace.csv", csv.str());
  WriteRunJson(o.out, ctx, {{"frames", seq.frames.size()}, {"with_roi", detected}});
  *ctx.out << detected << " of " << seq.frames.size() << " frames have an ROI\n";
}

// complete -------------------------------------------------------------------

struct CompleteOptions {
  std::string scene;
  std::string capture;
  FillOptions fill;
  int jobs = 1;
  std::string out;
};

void CmdComplete(const CompleteOptions& o, const Context& ctx) {
  const SceneSequence seq = LoadSceneChecked(o.scene);
  if (o.capture.empty()) Usage("--capture is required");
  const auto params = o.fill.Build();
  EnsureDir(o.out);
  json frames = json::array();
  for (const auto& f : seq.frames) {
    const std::string stem = FrameStem(f.index);
    const auto sparse = lidar::LoadSparse(fs::path(o.capture) / stem);
    if (!sparse.depth.same_shape(f.rgb)) {
      throw Error(ErrorCode::kDimensionMismatch,
                  stem + ": capture and scene differ in size");
    }
    const auto dense = completion::Complete(sparse, f.rgb, params, o.jobs);
    pnm::WriteDepthPgm(fs::path(o.out) / (stem + ".pgm"), dense.depth);
    frames.push_back({{"frame", f.index}, {"samples", sparse.valid_count()}});
  }
  json echo = {{"provenance", completion::ToString(completion::Provenance::kCompleted)},
               {"params", completion::ToJson(params)},
               {"frames", frames}};
  WriteJson(fs::path(o.out) / "dense.json", echo);
  WriteRunJson(o.out, ctx, json());
  *ctx.out << "completed " << frames.size() << " frames\n";
}

// eval -----------------------------------------------------------------------

struct EvalOptions {
  std::string truth;
  std::string pred;
  bool roi_only = false;
  std::string roi;
  std::string roi_trace;
  std::string fps_sweep;
  std::uint64_t seed = 0;
  int jobs = 1;
  MirrorOptions mirror;
  CaptureOptions capture;
  FillOptions fill;
  std::string out;
};

std::map<int, PixelRect> ReadRoiTrace(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingFile, "missing " + path.string());
  std::map<int, PixelRect> rois;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() < 5) {
      throw Error(ErrorCode::kMalformedHeader, path.string() + ": bad row '" + line + "'");
    }
    if (cells[1].empty()) continue;
    try {
      rois[std::stoi(cells[0])] = {std::stoi(cells[1]), std::stoi(cells[2]),
                                   std::stoi(cells[3]), std::stoi(cells[4])};
    } catch (const std::exception&) {
      throw Error(ErrorCode::kMalformedHeader, path.string() + ": bad row '" + line + "'");
    }
  }
  return rois;
}

void CmdEval(const EvalOptions& o, const Context& ctx) {
  if (o.truth.empty()) Usage("--truth is required");
  const SceneSequence seq = LoadScene(o.truth);
  const Intrinsics& k = seq.meta.intrinsics;

  std::map<int, PixelRect> rois;
  bool have_rois = false;
  if (!o.roi.empty()) {
    const PixelRect r = ParseRect(o.roi);
    if (!r.within(k.width, k.height)) {
      throw Error(ErrorCode::kRoiOutOfBounds, "--roi leaves the image");
    }
    for (const auto& f : seq.frames) rois[f.index] = r;
    have_rois = true;
  } else if (!o.roi_trace.empty()) {
    rois = ReadRoiTrace(o.roi_trace);
    have_rois = true;
  }
  if (o.roi_only && !have_rois) Usage("--roi-only needs --roi or --roi-trace");

  auto mask_for = [&](int index) -> std::optional<Mask> {
    if (!o.roi_only) return Mask(k.width, k.height, 1, 1);
    const auto it = rois.find(index);
    if (it == rois.end()) return std::nullopt;
    return MaskFromRect(k.width, k.height, it->second);
  };

  EnsureDir(o.out);
  std::ostringstream csv;
  json results;
  if (!o.fps_sweep.empty()) {
    // Full-FOV capture, completion and scoring at each frame rate.
    const auto model = o.mirror.Build(seq.meta.mirror_fov_deg);
    const auto capture = o.capture.Build(seq.meta.z_max_m);
    const auto fill = o.fill.Build();
    csv << "fps,samples_per_frame," << metrics::kMetricsCsvHeader << "\n";
    results = json::array();
    for (double fps : ParseNumberList(o.fps_sweep)) {
      std::vector<scan::ScanPattern> patterns(
          seq.frames.size(), scan::GenerateFullFov(model, fps, k));
      const auto captures = pipeline::CaptureSequence(seq, patterns, capture, o.seed, o.jobs);
      metrics::MetricTerms pooled;
      for (std::size_t i = 0; i < seq.frames.size(); ++i) {
        const auto mask = mask_for(seq.frames[i].index);
        if (!mask) continue;
        const auto dense = completion::Complete(captures[i], seq.frames[i].rgb, fill, o.jobs);
        pooled.Append(metrics::CollectTerms(dense.depth, seq.frames[i].depth, &*mask, o.jobs));
      }
      const auto report = pooled.Finalize();
      char head[64];
      std::snprintf(head, sizeof(head), "%g,%zu,", fps, patterns[0].samples.size());
      csv << head << metrics::ToCsvRow(report) << "\n";
      json row = metrics::ToJson(report);
      row["fps"] = fps;
      row["samples_per_frame"] = patterns[0].samples.size();
      results.push_back(row);
    }
  } else {
    if (o.pred.empty()) Usage("--pred or --fps-sweep is required");
    csv << "frame," << metrics::kMetricsCsvHeader << "\n";
    metrics::MetricTerms pooled;
    json per_frame = json::array();
    for (const auto& f : seq.frames) {
      const auto mask = mask_for(f.index);
      if (!mask) continue;
      const std::string stem = FrameStem(f.index);
      const DepthMap pred = pnm::ReadDepthPgm(fs::path(o.pred) / (stem + ".pgm"));
      if (!pred.same_shape(f.depth)) {
        throw Error(ErrorCode::kDimensionMismatch, stem + ": prediction size differs");
      }
      const auto terms = metrics::CollectTerms(pred, f.depth, &*mask, o.jobs);
      if (terms.size() == 0) continue;
      const auto report = terms.Finalize();
      csv << f.index << ',' << metrics::ToCsvRow(report) << "\n";
      json row = metrics::ToJson(report);
      row["frame"] = f.index;
      per_frame.push_back(row);
      pooled.Append(terms);
    }
    const auto all = pooled.Finalize();
    csv << "all," << metrics::ToCsvRow(all) << "\n";
    results = {{"pooled", metrics::ToJson(all)}, {"frames", per_frame}};
  }
  WriteText(fs::path(o.out) / "metrics.csv", csv.str());
  WriteJson(fs::path(o.out) / "metrics.json", results);
  WriteRunJson(o.out, ctx, json());
  *ctx.out << csv.str();
}

int Dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace

std::vector<double> ParseNumberList(const std::string& text) {
  std::vector<double> out;
  const auto c1 = text.find(':');
  if (c1 != std::string::npos) {
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos) Usage("range must be a:b:logN or a:b:linN");
    const double a = ParseNumber(text.substr(0, c1));
    const double b = ParseNumber(text.substr(c1 + 1, c2 - c1 - 1));
    const std::string tail = text.substr(c2 + 1);
    bool log = false;
    if (tail.rfind("log", 0) == 0) {
      log = true;
    } else if (tail.rfind("lin", 0) != 0) {
      Usage("range must be a:b:logN or a:b:linN");
    }
    const int n = ParseInt(tail.substr(3));
    if (n < 1) Usage("range needs at least one point");
    if (log && !(a > 0.0 && b > 0.0)) Usage("log range needs positive bounds");
    for (int i = 0; i < n; ++i) {
      const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
      out.push_back(log ? std::exp(std::log(a) + t * (std::log(b) - std::log(a)))
                        : a + t * (b - a));
    }
    if (n > 1) out.back() = b;
    return out;
  }
  for (const auto& item : SplitComma(text)) out.push_back(ParseNumber(item));
  return out;
}

namespace {

int Dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Adaptive MEMS LIDAR simulator and design explorer", "mlidar"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  SweepOptions sweep;
  auto* c_sweep = app.add_subcommand("optics-sweep", "Closed-form receiver design sweep");
  c_sweep->add_option("--design", sweep.design,
                      "retro, array, single or all (comma list)")->capture_default_str();
  c_sweep->add_option("--M", sweep.m, "Beam quality factor list (unitless)")
      ->capture_default_str();
  c_sweep->add_option("--w0-mm", sweep.w0_mm, "Beam waist radius list in mm")
      ->capture_default_str();
  c_sweep->add_option("--lambda-nm", sweep.lambda_nm, "Wavelength list in nm")
      ->capture_default_str();
  c_sweep->add_option("--n", sweep.n, "Array detector count per side (list)")
      ->capture_default_str();
  c_sweep->add_option("--A-mm", sweep.a_mm, "Receiver aperture list in mm")
      ->capture_default_str();
  c_sweep->add_option("--u-mm", sweep.u_mm, "Detector-to-lens distance list in mm")
      ->capture_default_str();
  c_sweep->add_option("--f-mm", sweep.f_mm, "Lens focal length list in mm")
      ->capture_default_str();
  c_sweep->add_option("--Z-m", sweep.z_m,
                      "Ranges in m: list, a:b:logN or a:b:linN")->capture_default_str();
  c_sweep->add_option("--mirror-fov-deg", sweep.mirror_fov_deg,
                      "Mirror field of view (apex) in degrees")->capture_default_str();
  c_sweep->add_flag("--crossover", sweep.crossover,
                    "Report ranges where one design overtakes another");
  c_sweep->add_option("--jobs", sweep.jobs, "Worker threads")->capture_default_str();
  c_sweep->add_option("--out", sweep.out, "Output directory")->required();

  BudgetOptions budget;
  auto* c_budget = app.add_subcommand("fit-budget", "Fit sample rate and frame overhead");
  c_budget->add_option("--table", budget.table,
                       "fps:samples pairs (default: prototype table)");
  c_budget->add_option("--out", budget.out, "Output directory")->required();

  SceneOptions scene;
  auto* c_scene = app.add_subcommand("gen-scene", "Render a synthetic RGB-D sequence");
  c_scene->add_option("--preset", scene.preset,
                      "plane, two-planes, moving-box or clutter")->capture_default_str();
  c_scene->add_option("--spec", scene.spec, "Scene spec JSON (overrides --preset)");
  c_scene->add_option("--seed", scene.seed, "Random seed")->capture_default_str();
  c_scene->add_option("--frames", scene.frames, "Frame count (0 = preset default)")
      ->capture_default_str();
  c_scene->add_option("--width", scene.width, "Image width in px (0 = preset default)")
      ->capture_default_str();
  c_scene->add_option("--height", scene.height, "Image height in px (0 = preset default)")
      ->capture_default_str();
  c_scene->add_option("--z-m", scene.z_m, "Plane range in m")->capture_default_str();
  c_scene->add_option("--near-m", scene.near_m, "Near plane range in m")
      ->capture_default_str();
  c_scene->add_option("--far-m", scene.far_m, "Far plane range in m")
      ->capture_default_str();
  c_scene->add_option("--px-per-frame", scene.px_per_frame, "Box speed in px/frame")
      ->capture_default_str();
  c_scene->add_option("--box-px", scene.box_px, "Box size in px")->capture_default_str();
  c_scene->add_option("--out", scene.out, "Output directory")->required();

  ScanOptions scn;
  auto* c_scan = app.add_subcommand("scan", "Generate a scan pattern");
  c_scan->add_option("--regime", scn.regime, "full, entropy, foveated or density-sweep")
      ->capture_default_str();
  c_scan->add_option("--scene", scn.scene, "Scene directory (intrinsics and RGB)");
  c_scan->add_option("--frame", scn.frame, "Scene frame index")->capture_default_str();
  c_scan->add_option("--width", scn.width, "Image width in px without --scene")
      ->capture_default_str();
  c_scan->add_option("--height", scn.height, "Image height in px without --scene")
      ->capture_default_str();
  c_scan->add_option("--fov-deg", scn.fov_deg, "Camera horizontal FOV in degrees")
      ->capture_default_str();
  c_scan->add_option("--mirror-fov-deg", scn.mirror_fov_deg,
                     "Mirror FOV in degrees without --scene")->capture_default_str();
  c_scan->add_option("--fps", scn.fps, "Frame rate in Hz")->capture_default_str();
  c_scan->add_option("--roi", scn.roi, "x0,y0,x1,y1 in px, or auto-entropy");
  c_scan->add_option("--outside-density", scn.outside_density,
                     "Outside-ROI density relative to inside")->capture_default_str();
  c_scan->add_option("--counts", scn.counts, "Density sweep sample counts")
      ->capture_default_str();
  c_scan->add_option("--window", scn.window, "Entropy window in px (odd)")
      ->capture_default_str();
  c_scan->add_option("--seed", scn.seed, "Random seed")->capture_default_str();
  scn.mirror.Add(c_scan);
  c_scan->add_option("--out", scn.out, "Output directory")->required();

  CaptureCmdOptions cap;
  auto* c_cap = app.add_subcommand("capture", "Simulate sparse LIDAR capture of a scene");
  c_cap->add_option("--scene", cap.scene, "Scene directory")->required();
  c_cap->add_option("--regime", cap.regime, "full, entropy or foveated")
      ->capture_default_str();
  c_cap->add_option("--fps", cap.fps, "Frame rate in Hz")->capture_default_str();
  c_cap->add_option("--roi", cap.roi, "auto-motion, auto-entropy or x0,y0,x1,y1 in px");
  c_cap->add_option("--outside-density", cap.outside_density,
                    "Outside-ROI density relative to inside (fixed ROIs)")
      ->capture_default_str();
  c_cap->add_option("--dense-fps", cap.dense_fps,
                    "auto-motion: frame rate of the dense reference scan in Hz")
      ->capture_default_str();
  c_cap->add_option("--outside-fraction", cap.outside_fraction,
                    "auto-motion: outside density as a fraction of dense")
      ->capture_default_str();
  c_cap->add_option("--window", cap.window, "Entropy window in px (odd)")
      ->capture_default_str();
  c_cap->add_option("--alpha", cap.alpha, "Background learning rate")
      ->capture_default_str();
  c_cap->add_option("--threshold", cap.threshold, "Foreground threshold in gray levels")
      ->capture_default_str();
  c_cap->add_option("--min-area", cap.min_area, "Minimum blob area in px")
      ->capture_default_str();
  c_cap->add_option("--margin", cap.margin, "ROI margin in px")->capture_default_str();
  c_cap->add_option("--seed", cap.seed, "Random seed")->capture_default_str();
  c_cap->add_option("--jobs", cap.jobs, "Worker threads")->capture_default_str();
  cap.mirror.Add(c_cap);
  cap.capture.Add(c_cap);
  c_cap->add_option("--out", cap.out, "Output directory")->required();

  FoveaOptions fov;
  auto* c_fov = app.add_subcommand("fovea", "Detect regions of interest");
  c_fov->add_option("--scene", fov.scene, "Scene directory")->required();
  c_fov->add_option("--mode", fov.mode, "motion or entropy")->capture_default_str();
  c_fov->add_option("--window", fov.window, "Entropy window in px (odd)")
      ->capture_default_str();
  c_fov->add_option("--roi-size", fov.roi_size, "Entropy ROI size WxH in px");
  c_fov->add_option("--alpha", fov.alpha, "Background learning rate")
      ->capture_default_str();
  c_fov->add_option("--threshold", fov.threshold, "Foreground threshold in gray levels")
      ->capture_default_str();
  c_fov->add_option("--min-area", fov.min_area, "Minimum blob area in px")
      ->capture_default_str();
  c_fov->add_option("--margin", fov.margin, "ROI margin in px")->capture_default_str();
  c_fov->add_option("--jobs", fov.jobs, "Worker threads")->capture_default_str();
  c_fov->add_option("--out", fov.out, "Output directory")->required();

  CompleteOptions cmp;
  auto* c_cmp = app.add_subcommand("complete", "RGB-guided depth completion");
  c_cmp->add_option("--scene", cmp.scene, "Scene directory (RGB guide)")->required();
  c_cmp->add_option("--capture", cmp.capture, "Capture output directory")->required();
  cmp.fill.Add(c_cmp);
  c_cmp->add_option("--jobs", cmp.jobs, "Worker threads")->capture_default_str();
  c_cmp->add_option("--out", cmp.out, "Output directory")->required();

  EvalOptions ev;
  auto* c_ev = app.add_subcommand("eval", "Score depth maps against ground truth");
  c_ev->add_option("--truth", ev.truth, "Ground-truth scene directory")->required();
  c_ev->add_option("--pred", ev.pred, "Directory of NNNN.pgm predictions (mm)");
  c_ev->add_flag("--roi-only", ev.roi_only, "Score only inside the ROI");
  c_ev->add_option("--roi", ev.roi, "Fixed ROI x0,y0,x1,y1 in px");
  c_ev->add_option("--roi-trace", ev.roi_trace, "Per-frame ROI trace CSV");
  c_ev->add_option("--fps-sweep", ev.fps_sweep,
                   "Frame rates in Hz: capture, complete and score each");
  c_ev->add_option("--seed", ev.seed, "Random seed")->capture_default_str();
  c_ev->add_option("--jobs", ev.jobs, "Worker threads")->capture_default_str();
  ev.mirror.Add(c_ev);
  ev.capture.Add(c_ev);
  ev.fill.Add(c_ev);
  c_ev->add_option("--out", ev.out, "Output directory")->required();

  std::string rerun_path;
  std::string rerun_out;
  auto* c_rerun = app.add_subcommand("rerun", "Repeat a run from its run.json");
  c_rerun->add_option("run_json", rerun_path, "Path to run.json")->required();
  c_rerun->add_option("--out", rerun_out, "Output directory")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (sub == c_rerun) {
    const json run = ReadJson(rerun_path);
    std::vector<std::string> replay = {args.empty() ? "mlidar" : args[0]};
    try {
      replay.push_back(run.at("command").get<std::string>());
      const auto saved = run.at("argv").get<std::vector<std::string>>();
      for (std::size_t i = 0; i < saved.size(); ++i) {
        if (saved[i] == "--out" && i + 1 < saved.size()) {
          ++i;
          continue;
        }
        replay.push_back(saved[i]);
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kMalformedHeader, rerun_path + ": " + e.what());
    }
    replay.push_back("--out");
    replay.push_back(rerun_out);
    return Dispatch(replay, out, err);
  }

  Context ctx;
  ctx.command = sub->get_name();
  ctx.config = ResolvedConfig(*sub, ctx.argv);
  ctx.out = &out;
  if (sub == c_sweep) CmdOpticsSweep(sweep, ctx);
  if (sub == c_budget) CmdFitBudget(budget, ctx);
  if (sub == c_scene) CmdGenScene(scene, ctx);
  if (sub == c_scan) CmdScan(scn, ctx);
  if (sub == c_cap) CmdCapture(cap, ctx);
  if (sub == c_fov) CmdFovea(fov, ctx);
  if (sub == c_cmp) CmdComplete(cmp, ctx);
  if (sub == c_ev) CmdEval(ev, ctx);
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  try {
    return Dispatch(args, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.is_usage_error() ? kExitUsage : kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace mlidar::cli
