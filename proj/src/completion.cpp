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

#include "mlidar/completion.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "mlidar/parallel.hpp"

namespace mlidar::completion {
namespace {

struct Known {
  int x;
  int y;
  std::size_t index;  // raster index, the tie breaker
  double z;
};

struct Candidate {
  long d2;
  std::size_t index;
  std::size_t slot;  // position in the known list

  bool operator<(const Candidate& o) const {
    return d2 != o.d2 ? d2 < o.d2 : index < o.index;
  }
};

// Uniform bucket grid over the image; bucket contents stay in raster order.
class BucketGrid {
 public:
  BucketGrid(const std::vector<Known>& known, int width, int height, int k) {
    const double per_cell = std::max(1.0, static_cast<double>(k));
    const double area = static_cast<double>(width) * height;
    cell_ = std::max(
        2, static_cast<int>(std::ceil(std::sqrt(area * per_cell / known.size()))));
    cols_ = (width + cell_ - 1) / cell_;
    rows_ = (height + cell_ - 1) / cell_;
    buckets_.resize(static_cast<std::size_t>(cols_) * rows_);
    for (std::size_t i = 0; i < known.size(); ++i) {
      buckets_[Bucket(known[i].x / cell_, known[i].y / cell_)].push_back(i);
    }
  }

  void Nearest(const std::vector<Known>& known, int x, int y, int k,
               std::vector<Candidate>& out) const {
    out.clear();
    const int cx = x / cell_;
    const int cy = y / cell_;
    const int max_ring = std::max({cx, cols_ - 1 - cx, cy, rows_ - 1 - cy});
    for (int r = 0; r <= max_ring; ++r) {
      for (int by = cy - r; by <= cy + r; ++by) {
        if (by < 0 || by >= rows_) continue;
        const bool edge_row = by == cy - r || by == cy + r;
        for (int bx = cx - r; bx <= cx + r; bx += edge_row ? 1 : 2 * r) {
          if (bx >= 0 && bx < cols_) {
            for (std::size_t slot : buckets_[Bucket(bx, by)]) {
              const long dx = known[slot].x - x;
              const long dy = known[slot].y - y;
              out.push_back({dx * dx + dy * dy, known[slot].index, slot});
            }
          }
          if (r == 0) break;
        }
      }
      if (static_cast<int>(out.size()) >= k) {
        std::nth_element(out.begin(), out.begin() + (k - 1), out.end());
        // Anything beyond ring r is at least r * cell + 1 away on one axis.
        const long bound = static_cast<long>(r) * cell_ + 1;
        if (out[k - 1].d2 < bound * bound) break;
      }
    }
    const std::size_t keep = std::min<std::size_t>(k, out.size());
    std::partial_sort(out.begin(), out.begin() + keep, out.end());
    out.resize(keep);
  }

 private:
  std::size_t Bucket(int bx, int by) const {
    return static_cast<std::size_t>(by) * cols_ + bx;
  }
  int cell_ = 1;
  int cols_ = 1;
  int rows_ = 1;
  std::vector<std::vector<std::size_t>> buckets_;
};

void BruteNearest(const std::vector<Known>& known, int x, int y, int k,
                  std::vector<Candidate>& out) {
  out.clear();
  for (std::size_t slot = 0; slot < known.size(); ++slot) {
    const long dx = known[slot].x - x;
    const long dy = known[slot].y - y;
    out.push_back({dx * dx + dy * dy, known[slot].index, slot});
  }
  const std::size_t keep = std::min<std::size_t>(k, out.size());
  std::partial_sort(out.begin(), out.begin() + keep, out.end());
  out.resize(keep);
}

}  // namespace

void GuidedFillParams::Validate() const {
  if (!(sigma_spatial_px > 0.0) || !(sigma_color > 0.0) || k_neighbors < 1 ||
      std::isnan(sigma_spatial_px)) {
    throw Error(ErrorCode::kInvalidArgument,
                "guided fill needs sigma > 0 and k >= 1");
  }
}

const char* ToString(Provenance p) {
  return p == Provenance::kCompleted ? "completed" : "ground-truth";
}

DenseDepth Complete(const DepthMap& sparse, const RgbImage& rgb,
                    const GuidedFillParams& params, int jobs) {
  params.Validate();
  if (!rgb.same_shape(sparse) || rgb.channels() != 3 || sparse.channels() != 1) {
    throw Error(ErrorCode::kDimensionMismatch,
                "sparse depth and RGB guide must share a size");
  }
  const int w = sparse.width();
  const int h = sparse.height();
  std::vector<Known> known;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double z = sparse.at(x, y);
      if (!std::isfinite(z) || z < 0.0) {
        throw Error(ErrorCode::kNonPositiveDepth, "negative or non-finite sample");
      }
      if (z > 0.0) known.push_back({x, y, static_cast<std::size_t>(y) * w + x, z});
    }
  }
  if (known.empty()) {
    throw Error(ErrorCode::kNoSamples, "no valid samples to complete from");
  }

  const int k = params.k_neighbors;
  const bool use_color = std::isfinite(params.sigma_color);
  const double inv_s = 1.0 / (2.0 * params.sigma_spatial_px * params.sigma_spatial_px);
  const double inv_c =
      use_color ? 1.0 / (2.0 * params.sigma_color * params.sigma_color) : 0.0;
  std::optional<BucketGrid> grid;
  if (params.search == NeighborSearch::kGrid) grid.emplace(known, w, h, k);

  DenseDepth out{sparse, Provenance::kCompleted};
  ParallelFor(static_cast<std::size_t>(h), jobs, [&](std::size_t yi) {
    const int y = static_cast<int>(yi);
    std::vector<Candidate> nn;
    std::vector<double> logw;
    for (int x = 0; x < w; ++x) {
      if (sparse.at(x, y) > 0.0) continue;
      if (grid) {
        grid->Nearest(known, x, y, k, nn);
      } else {
        BruteNearest(known, x, y, k, nn);
      }
      logw.resize(nn.size());
      double top = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < nn.size(); ++i) {
        double lw = -static_cast<double>(nn[i].d2) * inv_s;
        if (use_color) {
          const Known& s = known[nn[i].slot];
          double c2 = 0.0;
          for (int c = 0; c < 3; ++c) {
            const double d = double(rgb.at(x, y, c)) - double(rgb.at(s.x, s.y, c));
            c2 += d * d;
          }
          lw -= c2 * inv_c;
        }
        logw[i] = lw;
        top = std::max(top, lw);
      }
      // Shifting by the largest log weight keeps at least one weight at 1.
      double num = 0.0;
      double den = 0.0;
      for (std::size_t i = 0; i < nn.size(); ++i) {
        const double wi = std::exp(logw[i] - top);
        num += wi * known[nn[i].slot].z;
        den += wi;
      }
      out.depth.at(x, y) = num / den;
    }
  });
  return out;
}

DenseDepth Complete(const lidar::SparseDepth& sparse, const RgbImage& rgb,
                    const GuidedFillParams& params, int jobs) {
  return Complete(sparse.depth, rgb, params, jobs);
}

nlohmann::json ToJson(const GuidedFillParams& p) {
  nlohmann::json j = {{"sigma_spatial_px", p.sigma_spatial_px},
                      {"k_neighbors", p.k_neighbors},
                      {"search", p.search == NeighborSearch::kGrid ? "grid" : "brute"}};
  if (std::isfinite(p.sigma_color)) {
    j["sigma_color"] = p.sigma_color;
  } else {
    j["sigma_color"] = "inf";
  }
  return j;
}

FoveationComparison CompareFoveated(const SceneFrame& frame,
                                    const Intrinsics& k,
                                    const scan::MirrorModel& model,
                                    const scan::Roi& roi, std::size_t budget,
                                    const lidar::CaptureParams& capture,
                                    const GuidedFillParams& fill,
                                    std::uint64_t seed, int jobs) {
  roi.Validate(k.width, k.height);
  const scan::ScanPattern full = scan::GenerateFullFovCount(model, budget, k);
  const scan::ScanPattern fov = scan::GenerateFoveatedCount(model, budget, roi, k);
  const Mask mask = MaskFromRect(k.width, k.height, roi.rect);

  auto run = [&](const scan::ScanPattern& pattern, std::size_t& valid) {
    const auto sparse = lidar::Capture(frame, k, pattern, capture, seed);
    valid = sparse.valid_count();
    const auto dense = Complete(sparse, frame.rgb, fill, jobs);
    return metrics::Compute(dense.depth, frame.depth, &mask, jobs);
  };
  FoveationComparison c;
  c.scheduled_samples = full.samples.size();
  if (fov.samples.size() != c.scheduled_samples) {
    throw Error(ErrorCode::kInvalidArgument,
                "foveated and full-FOV patterns differ in sample count");
  }
  c.full_fov = run(full, c.full_fov_valid);
  c.foveated = run(fov, c.foveated_valid);
  return c;
}

}  // namespace mlidar::completion
