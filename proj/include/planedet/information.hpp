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

#ifndef PLANEDET_INFORMATION_HPP
#define PLANEDET_INFORMATION_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "planedet/geometry.hpp"
#include "planedet/sensor.hpp"

namespace planedet {

/**
 * Which physical model the information terms describe.
 *
 * kGeneric: free 3D points; an outlier costs 3 ln(R/eps) nats and a plane
 * constrains one of the three dimensions.
 *
 * kDepthImage: points generated from a depth image must lie on their
 * pixel's projection ray, which already removes two dimensions; an
 * outlier costs ln(R/eps) and the plane error is measured along the
 * camera z-axis (delta_ray) instead of the plane normal.
 */
enum class InfoVariant { kGeneric, kDepthImage };

/// Discretisation context shared by all information terms.
struct InfoContext {
  double ratio;       // R / epsilon, > 1
  double epsilon_m;   // quantization step
  InfoVariant variant;
  NoiseModel noise;

  /// Free dimensions of an unconstrained point: 3 generic, 1 on a ray.
  int dof() const { return variant == InfoVariant::kGeneric ? 3 : 1; }
};

inline InfoContext make_info_context(const SensorSpec& spec, InfoVariant variant,
                                     const NoiseModel& noise) {
  validate(spec);
  InfoContext ctx{spec.range_m / spec.epsilon_m, spec.epsilon_m, variant, noise};
  if (!(ctx.ratio > 1.0)) {
    throw std::invalid_argument("InfoContext: R/epsilon must exceed 1");
  }
  return ctx;
}

/// Per-point label assignment: 0 = outlier, 1..plane_count = plane index.
struct AssignmentMask {
  std::vector<std::uint16_t> labels;
  int plane_count = 0;
};

struct PlaneInfoEntry {
  double param_nats = 0.0;      // 3 ln(R/eps), the plane parameters
  double inlier_nats = 0.0;     // full description cost of the inlier set
  double reduction_nats = 0.0;  // sum of point_term over the inlier set
  int inlier_count = 0;
};

/**
 * Information ledger of a (planes, mask) model in nats:
 *   total = mask + outlier + sum_i (param_i + inlier_i)
 * with reduction_i = inlier_i - k_i * dof * ln(R/eps), the change versus
 * describing those k_i points as outliers.
 */
struct ModelInformation {
  double total_nats = 0.0;
  double mask_nats = 0.0;     // k ln(N+1); 0 when N = 0
  double outlier_nats = 0.0;  // k_0 * dof * ln(R/eps)
  std::vector<PlaneInfoEntry> per_plane;
};

/// Information of the all-outlier model: k * dof * ln(R/eps).
inline double phi_zero(std::size_t k, const InfoContext& ctx) {
  return static_cast<double>(k) * ctx.dof() * std::log(ctx.ratio);
}

/// Gaussian-midpoint code length of one residual, minus the ln(R/eps)
/// bookkeeping: delta^2/(2 sigma^2) + 0.5 ln(2 pi sigma^2 / eps^2).
inline double gaussian_code_nats(double delta, double sigma, double epsilon) {
  return 0.5 * delta * delta / (sigma * sigma) +
         0.5 * std::log(2.0 * std::numbers::pi * sigma * sigma / (epsilon * epsilon));
}

/**
 * Information change of assigning one point to a plane instead of the
 * outlier class:
 *   -ln(R/eps) + delta^2/(2 sigma^2) + 0.5 ln(2 pi sigma^2 / eps^2)
 * The expression is identical in both variants because a plane removes
 * exactly one dimension of freedom either way.
 */
inline double point_term(double delta, double sigma, const InfoContext& ctx) {
  return -std::log(ctx.ratio) + gaussian_code_nats(delta, sigma, ctx.epsilon_m);
}

/// A point joins a plane iff its information change is strictly negative.
/// Boundary points carry no evidence and stay outliers.
inline bool is_inlier(double delta, double sigma, const InfoContext& ctx) {
  return point_term(delta, sigma, ctx) < 0.0;
}

/// Largest |delta| that still satisfies the inlier criterion:
/// sigma * sqrt(2 (ln(R/eps) - 0.5 ln(2 pi sigma^2 / eps^2))), or 0 when
/// even a perfect fit cannot pay for itself at this sigma.
inline double max_inlier_delta(double sigma, const InfoContext& ctx) {
  const double radicand =
      2.0 * (std::log(ctx.ratio) -
             0.5 * std::log(2.0 * std::numbers::pi * sigma * sigma /
                            (ctx.epsilon_m * ctx.epsilon_m)));
  if (radicand <= 0.0) return 0.0;
  return sigma * std::sqrt(radicand);
}

/// Cost of one plane's parameters, 3 ln(R/eps) in both variants.
inline double plane_param_cost(const InfoContext& ctx) {
  return 3.0 * std::log(ctx.ratio);
}

/// Mask-information growth from N-1 to N planes: k ln((N+1)/N).
/// Telescopes to the k ln(N+1) mask term of the direct formula.
inline double mask_increment(std::size_t k, int n) {
  if (n < 1) throw std::invalid_argument("mask_increment: N must be >= 1");
  return static_cast<double>(k) * std::log((n + 1.0) / n);
}

/// Residual of the cloud point under one plane in the variant's error
/// metric. nullopt when the depth-image error is undefined (ray parallel).
inline std::optional<double> model_delta(const Plane& pl, const RayCloud& cloud,
                                         std::size_t i, const InfoContext& ctx) {
  if (ctx.variant == InfoVariant::kDepthImage) {
    return delta_ray(pl, cloud.points[i], cloud.rays[i]);
  }
  return delta_normal(pl, cloud.points[i]);
}

/**
 * Direct evaluation of the model information for a full assignment:
 * the mask term k ln(N+1), the outlier block, and per-plane parameter
 * plus inlier-description costs. sigma is evaluated at each point's
 * measured depth.
 *
 * An assigned point whose ray error is undefined (ray parallel to its
 * plane) gains nothing from the constraint: it is charged its full
 * unconstrained cost inside the plane's block and contributes zero
 * reduction. The detector never produces such assignments; the
 * threshold baseline can.
 */
inline ModelInformation model_information(const RayCloud& cloud,
                                          const std::vector<Plane>& planes,
                                          const AssignmentMask& mask,
                                          const InfoContext& ctx) {
  const std::size_t k = cloud.size();
  if (mask.labels.size() != k) {
    throw std::invalid_argument("model_information: mask length != cloud size");
  }
  if (mask.plane_count != static_cast<int>(planes.size())) {
    throw std::invalid_argument("model_information: plane_count != planes.size()");
  }

  const double log_ratio = std::log(ctx.ratio);
  const int dof = ctx.dof();

  ModelInformation info;
  info.per_plane.assign(planes.size(), PlaneInfoEntry{});
  for (auto& entry : info.per_plane) entry.param_nats = plane_param_cost(ctx);

  std::size_t outlier_count = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const int label = mask.labels[i];
    if (label == 0) {
      ++outlier_count;
      continue;
    }
    if (label > static_cast<int>(planes.size())) {
      throw std::invalid_argument("model_information: label out of range");
    }
    const Plane& pl = planes[static_cast<std::size_t>(label - 1)];
    auto& entry = info.per_plane[static_cast<std::size_t>(label - 1)];
    const auto delta = model_delta(pl, cloud, i, ctx);
    if (!delta) {
      entry.inlier_nats += dof * log_ratio;
      entry.inlier_count += 1;
      continue;
    }
    const double sigma = ctx.noise.sigma_at(cloud.points[i].z());
    const double gauss = gaussian_code_nats(*delta, sigma, ctx.epsilon_m);
    entry.inlier_nats += (dof - 1) * log_ratio + gauss;
    entry.reduction_nats += gauss - log_ratio;  // == point_term
    entry.inlier_count += 1;
  }

  info.mask_nats = planes.empty()
                       ? 0.0
                       : static_cast<double>(k) * std::log(planes.size() + 1.0);
  info.outlier_nats = static_cast<double>(outlier_count) * dof * log_ratio;
  info.total_nats = info.mask_nats + info.outlier_nats;
  for (const auto& entry : info.per_plane) {
    info.total_nats += entry.param_nats + entry.inlier_nats;
  }
  return info;
}

/// Fraction of points whose sigma(z) falls below epsilon. The midpoint
/// approximation behind point_term assumes eps << sigma; callers warn
/// when this exceeds 1%.
inline double fraction_epsilon_above_sigma(const RayCloud& cloud,
                                           const InfoContext& ctx) {
  if (cloud.size() == 0) return 0.0;
  std::size_t bad = 0;
  for (const auto& p : cloud.points) {
    if (ctx.epsilon_m > ctx.noise.sigma_at(p.z())) ++bad;
  }
  return static_cast<double>(bad) / static_cast<double>(cloud.size());
}

}  // namespace planedet

#endif  // PLANEDET_INFORMATION_HPP
