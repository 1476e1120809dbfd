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

#include <optional>
#include <ostream>
#include <vector>

#include "mlidar/image.hpp"

namespace mlidar::foveation {

struct EntropyMap {
  Image<double> bits;  // per-pixel Shannon entropy, [0, 8]
  int window = 0;
};

/// Shannon entropy of the 8-bit grayscale histogram in a window x window
/// neighborhood of every pixel, with replicated borders. `window` must be odd
/// and >= 3. Rows are split across `jobs` threads; output does not depend on
/// the job count. Three-channel input is converted with ToGray first.
EntropyMap ComputeEntropyMap(const GrayImage& image, int window, int jobs = 1);

/// The roi_width x roi_height rectangle with the largest summed entropy,
/// found exactly with a summed-area table. Ties (sums within a relative
/// 1e-12 of the best) resolve to the smallest (y0, x0).
PixelRect MaxEntropyRoi(const Image<double>& map, int roi_width,
                        int roi_height);

struct BackgroundParams {
  double learning_rate = 0.05;  // alpha in (0, 1]
  double diff_threshold = 25.0; // gray levels
  int min_blob_area = 50;       // pixels
  int margin_px = 10;           // ROI dilation
};

struct Detection {
  std::optional<PixelRect> roi;  // dilated, clamped to the image
  PixelRect blob_box;            // tight box of the winning component
  long area_px = 0;              // pixel count of the winning component
};

/// Running-mean background subtraction. The first frame only initializes the
/// model. Afterwards each frame is thresholded against the mean, opened with
/// a 3x3 square, split into 8-connected components, and the largest
/// component with at least min_blob_area pixels becomes the ROI. The mean is
/// updated as (1 - alpha) mean + alpha frame.
class BackgroundModel {
 public:
  explicit BackgroundModel(BackgroundParams params = {});

  /// Accepts gray or RGB frames; RGB goes through ToGray.
  Detection UpdateAndDetect(const GrayImage& frame);

  bool initialized() const { return !mean_.empty(); }
  const Image<double>& mean() const { return mean_; }
  const BackgroundParams& params() const { return params_; }

 private:
  BackgroundParams params_;
  Image<double> mean_;
};

/// Binary 3x3 opening; pixels outside the image do not count as set.
Mask Open3x3(const Mask& mask);

struct Component {
  long area = 0;
  PixelRect box;
};
/// 8-connected components of nonzero pixels, in raster order of their first
/// pixel.
std::vector<Component> ConnectedComponents(const Mask& mask);

/// One CSV row of the ROI trace: frame,x0,y0,x1,y1,area_px. Frames without
/// a detection leave the coordinates empty.
void WriteRoiTraceHeader(std::ostream& out);
void WriteRoiTraceRow(std::ostream& out, int frame, const Detection& det);

}  // namespace mlidar::foveation
