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

#ifndef PLANEDET_POSTPROCESS_HPP
#define PLANEDET_POSTPROCESS_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <vector>

#include "planedet/detector.hpp"
#include "planedet/geometry.hpp"
#include "planedet/sensor.hpp"

namespace planedet {

/// Per-pixel surface normal estimates; invalid where the neighborhood
/// touches invalid depth or the tangents degenerate.
struct NormalMap {
  int width = 0;
  int height = 0;
  std::vector<Eigen::Vector3d> normals;
  std::vector<std::uint8_t> valid;

  bool valid_at(int row, int col) const {
    return valid[static_cast<std::size_t>(row) * width + col] != 0;
  }
  const Eigen::Vector3d& at(int row, int col) const {
    return normals[static_cast<std::size_t>(row) * width + col];
  }
};

/**
 * Surface normals from the depth map: central-difference tangents along
 * the image x and y axes (from unprojected neighbors at +-kernel_radius),
 * cross product, orientation toward the camera, then Gaussian smoothing
 * of the vector field (smooth_sigma_px > 0) and renormalization.
 */
inline NormalMap estimate_normals(const DepthImage& img, const SensorSpec& spec,
                                  int kernel_radius = 1, double smooth_sigma_px = 1.0) {
  if (kernel_radius < 1) throw std::invalid_argument("estimate_normals: radius >= 1");
  validate(spec);
  const auto& k = spec.intrinsics;
  const int w = img.width, h = img.height, r = kernel_radius;

  const auto unproject_px = [&](int v, int u) {
    const double z = img.at(v, u);
    return Eigen::Vector3d(z * (u - k.cx) / k.fx, z * (v - k.cy) / k.fy, z);
  };

  NormalMap map;
  map.width = w;
  map.height = h;
  map.normals.assign(static_cast<std::size_t>(w) * h, Eigen::Vector3d::Zero());
  map.valid.assign(static_cast<std::size_t>(w) * h, 0);

  for (int v = r; v < h - r; ++v) {
    for (int u = r; u < w - r; ++u) {
      if (!img.valid_at(v, u) || !img.valid_at(v, u - r) || !img.valid_at(v, u + r) ||
          !img.valid_at(v - r, u) || !img.valid_at(v + r, u)) {
        continue;
      }
      const Eigen::Vector3d tangent_u = unproject_px(v, u + r) - unproject_px(v, u - r);
      const Eigen::Vector3d tangent_v = unproject_px(v + r, u) - unproject_px(v - r, u);
      Eigen::Vector3d n = tangent_u.cross(tangent_v);
      const double norm = n.norm();
      if (norm < 1e-12) continue;
      n /= norm;
      if (n.dot(unproject_px(v, u)) > 0.0) n = -n;  // face the camera
      map.normals[static_cast<std::size_t>(v) * w + u] = n;
      map.valid[static_cast<std::size_t>(v) * w + u] = 1;
    }
  }

  if (smooth_sigma_px > 0.0) {
    const int sr = static_cast<int>(std::ceil(3.0 * smooth_sigma_px));
    std::vector<double> kernel(static_cast<std::size_t>(2 * sr + 1));
    for (int i = -sr; i <= sr; ++i) {
      kernel[static_cast<std::size_t>(i + sr)] =
          std::exp(-0.5 * i * i / (smooth_sigma_px * smooth_sigma_px));
    }
    NormalMap smoothed = map;
    for (int v = 0; v < h; ++v) {
      for (int u = 0; u < w; ++u) {
        if (!map.valid_at(v, u)) continue;
        Eigen::Vector3d sum = Eigen::Vector3d::Zero();
        double weight = 0.0;
        for (int dv = -sr; dv <= sr; ++dv) {
          for (int du = -sr; du <= sr; ++du) {
            const int vv = v + dv, uu = u + du;
            if (vv < 0 || vv >= h || uu < 0 || uu >= w || !map.valid_at(vv, uu)) {
              continue;
            }
            const double wgt = kernel[static_cast<std::size_t>(dv + sr)] *
                               kernel[static_cast<std::size_t>(du + sr)];
            sum += wgt * map.at(vv, uu);
            weight += wgt;
          }
        }
        const double norm = sum.norm();
        if (weight <= 0.0 || norm < 1e-12) {
          smoothed.valid[static_cast<std::size_t>(v) * w + u] = 0;
          continue;
        }
        smoothed.normals[static_cast<std::size_t>(v) * w + u] = sum / norm;
      }
    }
    map = std::move(smoothed);
  }
  return map;
}

/**
 * Information-guarded reassignment: each pixel whose estimated normal is
 * within angle_tol_deg of some plane that also gives it a negative
 * point_term moves to the most similar such plane (smallest angle, then
 * smallest |delta|). Plane parameters and rank order are untouched;
 * counts, reductions, and the ledger are recomputed. Total information
 * may increase: the step trades nats for spatial coherence, which is why
 * it is off by default.
 */
inline DetectionResult reassign(const RayCloud& cloud, const DetectionResult& result,
                                const NormalMap& normals, const InfoContext& ctx,
                                double angle_tol_deg) {
  if (angle_tol_deg <= 0.0 || result.planes.empty()) return result;
  if (normals.width != cloud.width || normals.height != cloud.height) {
    throw std::invalid_argument("reassign: normal map/cloud dimensions differ");
  }

  DetectionResult out = result;
  const detail::PointTermTable table(cloud, ctx);

  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto [row, col] = cloud.pixel[i];
    if (!normals.valid_at(row, col)) continue;
    const Eigen::Vector3d& n = normals.at(row, col);

    int best_plane = -1;
    double best_angle = 0.0, best_abs_delta = 0.0;
    for (std::size_t p = 0; p < out.planes.size(); ++p) {
      const double angle = normal_angle_deg(n, out.planes[p].plane.normal);
      if (angle > angle_tol_deg) continue;
      const auto delta = detail::fast_delta(out.planes[p].plane, cloud, i, ctx.variant);
      if (!delta) continue;
      if (!(table.bias[i] + table.weight[i] * (*delta) * (*delta) < 0.0)) continue;
      const double abs_delta = std::abs(*delta);
      if (best_plane < 0 || angle < best_angle ||
          (angle == best_angle && abs_delta < best_abs_delta)) {
        best_plane = static_cast<int>(p);
        best_angle = angle;
        best_abs_delta = abs_delta;
      }
    }
    if (best_plane >= 0) {
      out.mask.labels[i] = static_cast<std::uint16_t>(best_plane + 1);
    }
  }

  std::vector<Plane> planes;
  for (const auto& rp : out.planes) planes.push_back(rp.plane);
  out.info = model_information(cloud, planes, out.mask, ctx);
  for (std::size_t p = 0; p < out.planes.size(); ++p) {
    out.planes[p].inlier_count = out.info.per_plane[p].inlier_count;
    out.planes[p].reduction_nats = out.info.per_plane[p].reduction_nats;
  }
  return out;
}

}  // namespace planedet

#endif  // PLANEDET_POSTPROCESS_HPP
