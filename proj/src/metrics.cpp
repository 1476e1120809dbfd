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

#include "mlidar/metrics.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>

#include "mlidar/parallel.hpp"

namespace mlidar::metrics {
namespace {

constexpr double kThresholds[3] = {1.25, 1.25 * 1.25, 1.25 * 1.25 * 1.25};

}  // namespace

void MetricTerms::Append(const MetricTerms& other) {
  abs_rel.insert(abs_rel.end(), other.abs_rel.begin(), other.abs_rel.end());
  sq.insert(sq.end(), other.sq.begin(), other.sq.end());
  abs_log10.insert(abs_log10.end(), other.abs_log10.begin(),
                   other.abs_log10.end());
  for (int i = 0; i < 3; ++i) within[i] += other.within[i];
}

MetricsReport MetricTerms::Finalize() const {
  const std::size_t n = size();
  if (n == 0) {
    throw Error(ErrorCode::kEmptyMask,
                "no pixel has both a prediction and a valid truth value");
  }
  const double dn = static_cast<double>(n);
  MetricsReport r;
  r.n_pixels = n;
  r.mre_pct = 100.0 * DeterministicSum(abs_rel) / dn;
  r.rmse_m = std::sqrt(DeterministicSum(sq) / dn);
  r.log10_err = DeterministicSum(abs_log10) / dn;
  r.delta1_pct = 100.0 * static_cast<double>(within[0]) / dn;
  r.delta2_pct = 100.0 * static_cast<double>(within[1]) / dn;
  r.delta3_pct = 100.0 * static_cast<double>(within[2]) / dn;
  return r;
}

MetricTerms CollectTerms(const DepthMap& pred, const DepthMap& truth,
                         const Mask* mask, int jobs) {
  if (!pred.same_shape(truth) || (mask && !mask->same_shape(truth))) {
    throw Error(ErrorCode::kDimensionMismatch,
                "prediction, truth and mask must share a size");
  }
  const int w = truth.width();
  const int h = truth.height();
  std::vector<MetricTerms> rows(static_cast<std::size_t>(h));
  ParallelFor(rows.size(), jobs, [&](std::size_t yi) {
    const int y = static_cast<int>(yi);
    MetricTerms& t = rows[yi];
    for (int x = 0; x < w; ++x) {
      if (mask && !mask->at(x, y)) continue;
      const double p = pred.at(x, y);
      const double g = truth.at(x, y);
      if (!std::isfinite(p) || !std::isfinite(g) || p < 0.0 || g < 0.0) {
        throw Error(ErrorCode::kNonPositiveDepth,
                    "negative or non-finite depth at (" + std::to_string(x) +
                        ", " + std::to_string(y) + ")");
      }
      if (p == 0.0 || g == 0.0) continue;
      const double d = p - g;
      t.abs_rel.push_back(std::abs(d) / g);
      t.sq.push_back(d * d);
      t.abs_log10.push_back(std::abs(std::log10(p) - std::log10(g)));
      const double ratio = std::max(p / g, g / p);
      for (int i = 0; i < 3; ++i) {
        if (ratio < kThresholds[i]) ++t.within[i];
      }
    }
  });
  MetricTerms all;
  for (const auto& r : rows) all.Append(r);
  return all;
}

MetricsReport Compute(const DepthMap& pred, const DepthMap& truth,
                      const Mask* mask, int jobs) {
  return CollectTerms(pred, truth, mask, jobs).Finalize();
}

nlohmann::json ToJson(const MetricsReport& r) {
  return {{"mre_pct", r.mre_pct},       {"rmse_m", r.rmse_m},
          {"log10", r.log10_err},       {"delta1_pct", r.delta1_pct},
          {"delta2_pct", r.delta2_pct}, {"delta3_pct", r.delta3_pct},
          {"n_pixels", r.n_pixels}};
}

const char* const kMetricsCsvHeader =
    "mre_pct,rmse_m,log10,delta1_pct,delta2_pct,delta3_pct,n_pixels";

std::string ToCsvRow(const MetricsReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%.4f,%.4f,%.4f,%.2f,%.2f,%.2f,%zu",
                r.mre_pct, r.rmse_m, r.log10_err, r.delta1_pct, r.delta2_pct,
                r.delta3_pct, r.n_pixels);
  return buf;
}

PlaneFit FitPlane(std::span<const Point3> points) {
  if (points.size() < 3) {
    throw Error(ErrorCode::kDegenerateGeometry, "plane fit needs >= 3 points");
  }
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (const auto& p : points) c += Eigen::Vector3d(p.x, p.y, p.z);
  c /= static_cast<double>(points.size());
  Eigen::MatrixXd centered(points.size(), 3);
  for (std::size_t i = 0; i < points.size(); ++i) {
    centered.row(static_cast<Eigen::Index>(i)) =
        Eigen::Vector3d(points[i].x, points[i].y, points[i].z) - c;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  if (!(s(0) > 0.0) || s(1) <= 1e-12 * s(0)) {
    throw Error(ErrorCode::kDegenerateGeometry,
                "points are coincident or collinear");
  }
  const Eigen::Vector3d n = svd.matrixV().col(2).normalized();
  double ss = 0.0;
  for (Eigen::Index i = 0; i < centered.rows(); ++i) {
    const double d = centered.row(i).dot(n);
    ss += d * d;
  }
  PlaneFit fit;
  fit.centroid = {c.x(), c.y(), c.z()};
  fit.normal = {n.x(), n.y(), n.z()};
  fit.rmse_m = std::sqrt(ss / static_cast<double>(points.size()));
  return fit;
}

double PlanarRmse(std::span<const Point3> points) {
  return FitPlane(points).rmse_m;
}

}  // namespace mlidar::metrics
