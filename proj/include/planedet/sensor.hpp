// Copyright 2026 The planedet Authors.
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

#ifndef PLANEDET_SENSOR_HPP
#define PLANEDET_SENSOR_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace planedet {

struct CameraIntrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
};

/**
 * Physical description of the depth sensor: the span R of representable
 * depth values, the quantization step epsilon, and pinhole intrinsics.
 * R and epsilon fix the discretisation context of every information term.
 */
struct SensorSpec {
  double range_m = 0.0;    // R
  double epsilon_m = 0.0;  // quantization step
  CameraIntrinsics intrinsics;
};

inline void validate(const SensorSpec& spec) {
  if (!(spec.range_m > 0.0) || !(spec.epsilon_m > 0.0) ||
      !(spec.epsilon_m < spec.range_m)) {
    throw std::invalid_argument("SensorSpec: need 0 < epsilon < range");
  }
  const auto& k = spec.intrinsics;
  if (!(k.fx > 0.0) || !(k.fy > 0.0) || !std::isfinite(k.fx) ||
      !std::isfinite(k.fy) || !std::isfinite(k.cx) || !std::isfinite(k.cy)) {
    throw std::invalid_argument("SensorSpec: non-finite or non-positive intrinsics");
  }
}

/**
 * Per-point depth noise sigma(z) in meters:
 *   Constant:               sigma0
 *   Proportional:           alpha * z
 *   QuadraticExperimental:  a + b * (z - z0)^2
 */
class NoiseModel {
 public:
  enum class Kind { kConstant, kProportional, kQuadraticExperimental };

  static NoiseModel constant(double sigma0) {
    if (!(sigma0 > 0.0)) throw std::invalid_argument("NoiseModel: sigma0 must be > 0");
    return NoiseModel(Kind::kConstant, sigma0, 0.0, 0.0);
  }
  static NoiseModel proportional(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("NoiseModel: alpha must be > 0");
    return NoiseModel(Kind::kProportional, alpha, 0.0, 0.0);
  }
  static NoiseModel quadratic_experimental(double a, double b, double z0) {
    if (!(a > 0.0) || b < 0.0) {
      throw std::invalid_argument("NoiseModel: need a > 0 and b >= 0");
    }
    return NoiseModel(Kind::kQuadraticExperimental, a, b, z0);
  }

  double sigma_at(double z) const {
    if (!(z > 0.0)) throw std::domain_error("NoiseModel::sigma_at: z must be > 0");
    switch (kind_) {
      case Kind::kConstant:
        return p0_;
      case Kind::kProportional:
        return p0_ * z;
      case Kind::kQuadraticExperimental:
        return p0_ + p1_ * (z - p2_) * (z - p2_);
    }
    return p0_;  // unreachable
  }

  Kind kind() const { return kind_; }
  double param0() const { return p0_; }
  double param1() const { return p1_; }
  double param2() const { return p2_; }

 private:
  NoiseModel(Kind kind, double p0, double p1, double p2)
      : kind_(kind), p0_(p0), p1_(p1), p2_(p2) {}

  Kind kind_;
  double p0_, p1_, p2_;
};

/// Row-major depth grid in meters. 0 marks an invalid reading
/// (Kinect/RealSense convention); non-finite values are also invalid.
struct DepthImage {
  int width = 0;
  int height = 0;
  std::vector<double> depth_m;

  double at(int row, int col) const { return depth_m[static_cast<std::size_t>(row) * width + col]; }
  double& at(int row, int col) { return depth_m[static_cast<std::size_t>(row) * width + col]; }
  bool valid_at(int row, int col) const {
    const double d = at(row, col);
    return d > 0.0 && std::isfinite(d);
  }
};

inline bool is_valid_depth(double d) { return d > 0.0 && std::isfinite(d); }

/// Point cloud with the projection ray of each pixel retained. points[i]
/// lies on the line lambda * rays[i], rays are unit with positive z, and
/// points[i].z equals the stored pixel depth exactly.
struct RayCloud {
  std::vector<Eigen::Vector3d> points;
  std::vector<Eigen::Vector3d> rays;
  std::vector<std::pair<int, int>> pixel;  // (row, col) per point
  int width = 0;                           // source image dimensions
  int height = 0;
  int skipped_invalid = 0;

  std::size_t size() const { return points.size(); }
};

/// Back-projects every valid pixel: x = z * ((u-cx)/fx, (v-cy)/fy, 1),
/// ray = x / |x|. Invalid pixels are skipped and counted. An all-invalid
/// image yields an empty cloud.
inline RayCloud unproject(const DepthImage& img, const SensorSpec& spec) {
  validate(spec);
  if (img.width <= 0 || img.height <= 0) {
    throw std::invalid_argument("unproject: empty image");
  }
  const auto& k = spec.intrinsics;
  RayCloud cloud;
  cloud.width = img.width;
  cloud.height = img.height;
  cloud.points.reserve(img.depth_m.size());
  cloud.rays.reserve(img.depth_m.size());
  cloud.pixel.reserve(img.depth_m.size());
  for (int v = 0; v < img.height; ++v) {
    for (int u = 0; u < img.width; ++u) {
      const double z = img.at(v, u);
      if (!is_valid_depth(z)) {
        ++cloud.skipped_invalid;
        continue;
      }
      const Eigen::Vector3d x(z * (u - k.cx) / k.fx, z * (v - k.cy) / k.fy, z);
      cloud.points.push_back(x);
      cloud.rays.push_back(x.normalized());
      cloud.pixel.emplace_back(v, u);
    }
  }
  return cloud;
}

/**
 * Snaps a depth to the nearest multiple of epsilon, rounding halves away
 * from zero. The invalid marker 0 is preserved; depths outside [0, R]
 * are clamped. A 1e-9 nudge below the floor keeps decimal midpoints
 * (e.g. 2.005 with epsilon 0.01) on the away-from-zero side despite
 * binary rounding of the inputs.
 */
inline double quantize(double depth, const SensorSpec& spec) {
  if (depth == 0.0) return 0.0;
  double d = depth;
  if (d < 0.0) d = 0.0;
  if (d > spec.range_m) d = spec.range_m;
  const double steps = std::floor(d / spec.epsilon_m + 0.5 + 1e-9);
  return steps * spec.epsilon_m;
}

struct QuantizeStats {
  int clamped = 0;
};

/// Quantizes a whole image in place, counting clamped out-of-range pixels.
inline QuantizeStats quantize_image(DepthImage& img, const SensorSpec& spec) {
  QuantizeStats stats;
  for (double& d : img.depth_m) {
    if (!is_valid_depth(d)) continue;
    if (d < 0.0 || d > spec.range_m) ++stats.clamped;
    d = quantize(d, spec);
  }
  return stats;
}

/// Span max - min of the valid depths: the paper-style per-image default
/// for R when the sensor range is not configured. Returns 0 for an image
/// without at least two distinct valid depths.
inline double depth_span(const DepthImage& img) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double d : img.depth_m) {
    if (!is_valid_depth(d)) continue;
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  if (!(hi > lo)) return 0.0;
  return hi - lo;
}

}  // namespace planedet

#endif  // PLANEDET_SENSOR_HPP
