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

#include <array>
#include <cstddef>
#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <vector>

#include "mlidar/image.hpp"

namespace mlidar::metrics {

/// Depth-estimation error summary. delta_i is the percentage of pixels with
/// max(pred / truth, truth / pred) < 1.25^i; log10 is the mean absolute
/// difference of base-10 logarithms.
struct MetricsReport {
  double mre_pct = 0.0;
  double rmse_m = 0.0;
  double log10_err = 0.0;
  double delta1_pct = 0.0;
  double delta2_pct = 0.0;
  double delta3_pct = 0.0;
  std::size_t n_pixels = 0;
};

/// Per-pixel error terms in raster order. Pooling several frames appends
/// their terms, so pooled sums do not depend on how frames were scheduled.
struct MetricTerms {
  std::vector<double> abs_rel;
  std::vector<double> sq;
  std::vector<double> abs_log10;
  std::size_t within[3] = {0, 0, 0};

  std::size_t size() const { return abs_rel.size(); }
  void Append(const MetricTerms& other);
  /// Throws EmptyMask when no pixel contributed.
  MetricsReport Finalize() const;
};

/// Terms over pixels selected by `mask` (all pixels when null) where both
/// maps are > 0. Zero marks missing data; negative or non-finite values
/// throw NonPositiveDepth.
MetricTerms CollectTerms(const DepthMap& pred, const DepthMap& truth,
                         const Mask* mask = nullptr, int jobs = 1);

MetricsReport Compute(const DepthMap& pred, const DepthMap& truth,
                      const Mask* mask = nullptr, int jobs = 1);

nlohmann::json ToJson(const MetricsReport& report);
extern const char* const kMetricsCsvHeader;
std::string ToCsvRow(const MetricsReport& report);

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct PlaneFit {
  Point3 centroid;
  Point3 normal;  // unit length
  double rmse_m = 0.0;
};

/// Total least-squares plane through the centroid; the normal is the right
/// singular vector of the smallest singular value of the centered points.
/// Throws DegenerateGeometry for fewer than 3 points or collinear input.
PlaneFit FitPlane(std::span<const Point3> points);

/// RMS orthogonal distance to the best-fit plane.
double PlanarRmse(std::span<const Point3> points);

}  // namespace mlidar::metrics
