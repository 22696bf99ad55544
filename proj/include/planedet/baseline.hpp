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

#ifndef PLANEDET_BASELINE_HPP
#define PLANEDET_BASELINE_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "planedet/detector.hpp"

namespace planedet {

/**
 * Threshold RANSAC comparator: fixed inlier distance threshold, fixed
 * plane count, largest-consensus selection, no model-information test.
 * It deliberately reproduces the failure mode of library plane
 * segmentation (spurious planes once the real ones are exhausted).
 */
struct BaselineConfig {
  double threshold_sigma = 0.01;        // inlier distance threshold (m)
  int num_planes = 8;                   // always attempts this many
  int trials = trial_count(0.99, 0.25); // per-plane sample budget
  std::uint64_t seed = 0;
};

inline void validate(const BaselineConfig& cfg) {
  if (!(cfg.threshold_sigma > 0.0) || cfg.num_planes < 1 || cfg.trials < 1) {
    throw std::invalid_argument("BaselineConfig: parameter out of range");
  }
}

/**
 * Sequential largest-consensus extraction. Each round samples 3-point
 * planes for cfg.trials iterations, keeps the plane with the most points
 * within |delta_normal| < threshold (ties keep the earliest trial),
 * removes its inliers, and continues; it never stops early. Stops with
 * fewer planes only when fewer than 3 points remain. reduction_nats and
 * the information ledger are computed post hoc for comparability with
 * the detector; the baseline itself never consults them.
 */
inline DetectionResult baseline_detect(const RayCloud& cloud,
                                       const BaselineConfig& cfg,
                                       const InfoContext& ctx) {
  validate(cfg);
  const std::size_t k = cloud.size();

  DetectionResult result;
  result.mask.labels.assign(k, 0);
  result.phi_trace.push_back(phi_zero(k, ctx));
  if (k < 3) return result;

  std::mt19937_64 rng(cfg.seed);
  std::vector<std::uint32_t> unassigned(k);
  std::iota(unassigned.begin(), unassigned.end(), 0);

  std::vector<Plane> planes;
  for (int round = 0; round < cfg.num_planes; ++round) {
    if (unassigned.size() < 3) break;

    bool found = false;
    Plane best_plane;
    std::size_t best_count = 0;
    for (int t = 0; t < cfg.trials; ++t) {
      const auto pick = sample3_distinct(rng, unassigned.size());
      const auto plane = plane_from_3_points(cloud.points[unassigned[pick[0]]],
                                             cloud.points[unassigned[pick[1]]],
                                             cloud.points[unassigned[pick[2]]]);
      if (!plane) continue;
      std::size_t count = 0;
      for (const std::uint32_t i : unassigned) {
        if (std::abs(delta_normal(*plane, cloud.points[i])) < cfg.threshold_sigma) {
          ++count;
        }
      }
      if (!found || count > best_count) {
        found = true;
        best_plane = *plane;
        best_count = count;
      }
    }
    if (!found || best_count < 3) break;

    const std::uint16_t label = static_cast<std::uint16_t>(planes.size() + 1);
    std::vector<std::uint32_t> remaining;
    remaining.reserve(unassigned.size() - best_count);
    for (const std::uint32_t i : unassigned) {
      if (std::abs(delta_normal(best_plane, cloud.points[i])) < cfg.threshold_sigma) {
        result.mask.labels[i] = label;
      } else {
        remaining.push_back(i);
      }
    }
    unassigned = std::move(remaining);
    planes.push_back(best_plane);
  }

  result.mask.plane_count = static_cast<int>(planes.size());
  result.info = model_information(cloud, planes, result.mask, ctx);
  for (std::size_t p = 0; p < planes.size(); ++p) {
    // Rank = extraction order: the comparator has no quality metric.
    result.planes.push_back(RankedPlane{planes[p],
                                        result.info.per_plane[p].inlier_count,
                                        result.info.per_plane[p].reduction_nats,
                                        static_cast<int>(p) + 1});
  }
  return result;
}

}  // namespace planedet

#endif  // PLANEDET_BASELINE_HPP
