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

#include "mlidar/foveation.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "mlidar/parallel.hpp"

namespace mlidar::foveation {

EntropyMap ComputeEntropyMap(const GrayImage& image, int window, int jobs) {
  if (image.channels() == 3) return ComputeEntropyMap(ToGray(image), window, jobs);
  const GrayImage& gray = image;
  if (window < 3 || window % 2 == 0) {
    throw Error(ErrorCode::kInvalidArgument, "entropy window must be odd and >= 3");
  }
  if (gray.channels() != 1 || gray.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "entropy needs a gray image");
  }
  const int w = gray.width();
  const int h = gray.height();
  const int r = window / 2;
  const int n = window * window;

  // c * log2(c) for every possible bin count.
  std::vector<double> clogc(n + 1, 0.0);
  for (int c = 1; c <= n; ++c) clogc[c] = c * std::log2(static_cast<double>(c));
  const double log2n = std::log2(static_cast<double>(n));

  EntropyMap out{Image<double>(w, h, 1, 0.0), window};
  auto clampx = [w](int x) { return std::clamp(x, 0, w - 1); };
  auto clampy = [h](int y) { return std::clamp(y, 0, h - 1); };

  ParallelFor(static_cast<std::size_t>(h), jobs, [&](std::size_t yi) {
    const int y = static_cast<int>(yi);
    std::array<int, 256> hist{};
    double sum_clogc = 0.0;
    auto bump = [&](int value, int delta) {
      sum_clogc -= clogc[hist[value]];
      hist[value] += delta;
      sum_clogc += clogc[hist[value]];
    };
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) {
        bump(gray.at(clampx(dx), clampy(y + dy)), +1);
      }
    }
    for (int x = 0; x < w; ++x) {
      if (x > 0) {
        const int gone = clampx(x - r - 1);
        const int added = clampx(x + r);
        for (int dy = -r; dy <= r; ++dy) {
          const int yy = clampy(y + dy);
          bump(gray.at(gone, yy), -1);
          bump(gray.at(added, yy), +1);
        }
      }
      out.bits.at(x, y) = std::max(0.0, log2n - sum_clogc / n);
    }
  });
  return out;
}

PixelRect MaxEntropyRoi(const Image<double>& map, int roi_width,
                        int roi_height) {
  const int w = map.width();
  const int h = map.height();
  if (roi_width < 1 || roi_height < 1 || roi_width > w || roi_height > h) {
    throw Error(ErrorCode::kInvalidArgument, "ROI does not fit in the map");
  }
  // sat(x, y) = sum over [0, x) x [0, y).
  std::vector<long double> sat(static_cast<std::size_t>(w + 1) * (h + 1), 0.0L);
  auto at = [&](int x, int y) -> long double& {
    return sat[static_cast<std::size_t>(y) * (w + 1) + x];
  };
  for (int y = 0; y < h; ++y) {
    long double row = 0.0L;
    for (int x = 0; x < w; ++x) {
      row += map.at(x, y);
      at(x + 1, y + 1) = at(x + 1, y) + row;
    }
  }
  PixelRect best{0, 0, roi_width, roi_height};
  long double best_sum = -1.0L;
  for (int y0 = 0; y0 + roi_height <= h; ++y0) {
    for (int x0 = 0; x0 + roi_width <= w; ++x0) {
      const int x1 = x0 + roi_width;
      const int y1 = y0 + roi_height;
      const long double s = at(x1, y1) - at(x0, y1) - at(x1, y0) + at(x0, y0);
      const long double tol = 1e-12L * std::max(std::abs(best_sum), 1.0L);
      if (best_sum < 0.0L || s > best_sum + tol) {
        best_sum = s;
        best = {x0, y0, x1, y1};
      }
    }
  }
  return best;
}

Mask Open3x3(const Mask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  Mask eroded(w, h, 1, 0);
  for (int y = 1; y + 1 < h; ++y) {
    for (int x = 1; x + 1 < w; ++x) {
      bool all = true;
      for (int dy = -1; dy <= 1 && all; ++dy) {
        for (int dx = -1; dx <= 1 && all; ++dx) {
          all = mask.at(x + dx, y + dy) != 0;
        }
      }
      eroded.at(x, y) = all ? 1 : 0;
    }
  }
  Mask opened(w, h, 1, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!eroded.at(x, y)) continue;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (opened.contains(x + dx, y + dy)) opened.at(x + dx, y + dy) = 1;
        }
      }
    }
  }
  return opened;
}

std::vector<Component> ConnectedComponents(const Mask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  std::vector<Component> out;
  std::vector<std::uint8_t> seen(mask.pixel_count(), 0);
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (!mask.at(x, y) || seen[i]) continue;
      Component c;
      c.box = {x, y, x + 1, y + 1};
      seen[i] = 1;
      stack.assign(1, {x, y});
      while (!stack.empty()) {
        const auto [px, py] = stack.back();
        stack.pop_back();
        ++c.area;
        c.box.x0 = std::min(c.box.x0, px);
        c.box.y0 = std::min(c.box.y0, py);
        c.box.x1 = std::max(c.box.x1, px + 1);
        c.box.y1 = std::max(c.box.y1, py + 1);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = px + dx;
            const int ny = py + dy;
            if (!mask.contains(nx, ny) || !mask.at(nx, ny)) continue;
            const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
            if (seen[j]) continue;
            seen[j] = 1;
            stack.push_back({nx, ny});
          }
        }
      }
      out.push_back(c);
    }
  }
  return out;
}

BackgroundModel::BackgroundModel(BackgroundParams params) : params_(params) {
  if (!(params_.learning_rate > 0.0 && params_.learning_rate <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "learning rate must be in (0, 1]");
  }
  if (params_.diff_threshold < 0.0 || params_.min_blob_area < 0 ||
      params_.margin_px < 0) {
    throw Error(ErrorCode::kInvalidArgument, "invalid background parameters");
  }
}

Detection BackgroundModel::UpdateAndDetect(const GrayImage& frame) {
  if (frame.channels() == 3) return UpdateAndDetect(ToGray(frame));
  Detection det;
  if (!initialized()) {
    mean_ = Image<double>(frame.width(), frame.height(), 1);
    for (std::size_t i = 0; i < frame.data().size(); ++i) {
      mean_.data()[i] = frame.data()[i];
    }
    return det;
  }
  if (!mean_.same_shape(frame) || frame.channels() != 1) {
    throw Error(ErrorCode::kDimensionMismatch,
                "frame size differs from the background model");
  }
  const int w = frame.width();
  const int h = frame.height();
  Mask fg(w, h, 1, 0);
  for (std::size_t i = 0; i < fg.data().size(); ++i) {
    fg.data()[i] =
        std::abs(frame.data()[i] - mean_.data()[i]) > params_.diff_threshold;
  }
  const auto components = ConnectedComponents(Open3x3(fg));
  const Component* best = nullptr;
  for (const auto& c : components) {
    if (!best || c.area > best->area) best = &c;
  }
  if (best && best->area >= params_.min_blob_area) {
    det.blob_box = best->box;
    det.area_px = best->area;
    const int m = params_.margin_px;
    det.roi = PixelRect{std::max(0, best->box.x0 - m),
                        std::max(0, best->box.y0 - m),
                        std::min(w, best->box.x1 + m),
                        std::min(h, best->box.y1 + m)};
  }
  const double a = params_.learning_rate;
  for (std::size_t i = 0; i < mean_.data().size(); ++i) {
    mean_.data()[i] = (1.0 - a) * mean_.data()[i] + a * frame.data()[i];
  }
  return det;
}

void WriteRoiTraceHeader(std::ostream& out) {
  out << "frame,x0,y0,x1,y1,area_px\n";
}

void WriteRoiTraceRow(std::ostream& out, int frame, const Detection& det) {
  out << frame << ',';
  if (det.roi) {
    out << det.roi->x0 << ',' << det.roi->y0 << ',' << det.roi->x1 << ','
        << det.roi->y1 << ',' << det.area_px << '\n';
  } else {
    out << ",,,,0\n";
  }
}

}  // namespace mlidar::foveation
