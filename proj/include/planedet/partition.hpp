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

#ifndef PLANEDET_PARTITION_HPP
#define PLANEDET_PARTITION_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "planedet/detector.hpp"
#include "planedet/image_io.hpp"

namespace planedet {

/// Optional per-region relaxations of the caller's DetectorConfig.
/// Unset fields inherit the caller's values, so a partition without
/// overrides behaves exactly like plain detection.
struct RegionOverrides {
  std::optional<int> max_planes;
  std::optional<double> inlier_ratio_r;
};

/**
 * Pixel-to-region map restricting the plane search. Region ids are dense
 * in 1..region_count; 0 marks the leftover pool, which is searched last
 * (typically with a higher plane cap and lower assumed inlier ratio).
 */
struct PartitionSet {
  std::vector<std::uint16_t> label_map;  // row-major, width*height
  int width = 0;
  int height = 0;
  int region_count = 0;
  RegionOverrides region;    // applied to every numbered region
  RegionOverrides leftover;  // applied to the leftover pass

  std::uint16_t region_at(int row, int col) const {
    return label_map[static_cast<std::size_t>(row) * width + col];
  }
};

/// Ingests an external label map (16-bit PGM/PNG, pixel value = region
/// id, 0 = leftover) and densifies the ids to 1..region_count preserving
/// their numeric order. Dimensions must match the depth image.
inline PartitionSet load_label_map(const std::string& path, int expected_width,
                                   int expected_height) {
  const Image16 img = read_image16(path);
  if (img.width != expected_width || img.height != expected_height) {
    throw std::runtime_error(path + ": label map dimensions do not match the depth image");
  }
  PartitionSet parts;
  parts.width = img.width;
  parts.height = img.height;
  parts.label_map.resize(img.pixels.size());

  std::map<std::uint16_t, std::uint16_t> dense;  // sorted: preserves id order
  for (const std::uint16_t px : img.pixels) {
    if (px != 0) dense.emplace(px, 0);
  }
  std::uint16_t next = 1;
  for (auto& [raw, id] : dense) id = next++;
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    parts.label_map[i] = img.pixels[i] == 0 ? 0 : dense[img.pixels[i]];
  }
  parts.region_count = static_cast<int>(dense.size());
  return parts;
}

/// rows x cols rectangular blocks covering the image exactly once, with
/// boundaries at floor(i*extent/n); no leftover region.
inline PartitionSet grid_partition(int width, int height, int rows, int cols) {
  if (rows < 1 || cols < 1 || width < 1 || height < 1) {
    throw std::invalid_argument("grid_partition: need positive dimensions");
  }
  PartitionSet parts;
  parts.width = width;
  parts.height = height;
  parts.region_count = rows * cols;
  parts.label_map.resize(static_cast<std::size_t>(width) * height);
  for (int v = 0; v < height; ++v) {
    const int br = std::min(rows - 1, static_cast<int>(
                                          (static_cast<long long>(v) * rows) / height));
    for (int u = 0; u < width; ++u) {
      const int bc = std::min(cols - 1, static_cast<int>(
                                            (static_cast<long long>(u) * cols) / width));
      parts.label_map[static_cast<std::size_t>(v) * width + u] =
          static_cast<std::uint16_t>(br * cols + bc + 1);
    }
  }
  return parts;
}

inline PartitionSet grid_partition(const DepthImage& img, int rows, int cols) {
  return grid_partition(img.width, img.height, rows, cols);
}

/**
 * Region-restricted detection: detect() runs on each numbered region
 * (region i seeded with seed+i-1), then on the leftover pool (seeded with
 * seed+region_count), each with its overrides applied. R/eps stays
 * per-image while each region's mask term uses its own point count.
 * The concatenated planes are ranked, globally merged, and re-ranked.
 *
 * phi_trace carries the per-region bookkeeping (running sum of per-region
 * Phi, starting at the global Phi_0); info is recomputed globally on the
 * final merged model.
 */
inline DetectionResult detect_partitioned(const RayCloud& cloud,
                                          const PartitionSet& parts,
                                          const InfoContext& ctx,
                                          const DetectorConfig& cfg) {
  validate(cfg);
  if (parts.width != cloud.width || parts.height != cloud.height) {
    throw std::invalid_argument("detect_partitioned: partition/cloud dimensions differ");
  }

  // Cloud indices per region; slot region_count holds the leftover pool.
  std::vector<std::vector<std::uint32_t>> groups(
      static_cast<std::size_t>(parts.region_count) + 1);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto [row, col] = cloud.pixel[i];
    const std::uint16_t id = parts.region_at(row, col);
    const std::size_t slot = id == 0 ? static_cast<std::size_t>(parts.region_count)
                                     : static_cast<std::size_t>(id - 1);
    groups[slot].push_back(static_cast<std::uint32_t>(i));
  }

  DetectionResult combined;
  combined.mask.labels.assign(cloud.size(), 0);
  combined.phi_trace.push_back(phi_zero(cloud.size(), ctx));

  std::vector<Plane> planes;
  std::vector<std::vector<std::uint32_t>> members;
  std::vector<double> reductions;

  for (std::size_t slot = 0; slot < groups.size(); ++slot) {
    const bool is_leftover = slot == static_cast<std::size_t>(parts.region_count);
    const RegionOverrides& ov = is_leftover ? parts.leftover : parts.region;

    DetectorConfig sub_cfg = cfg;
    sub_cfg.seed = cfg.seed + slot;
    if (ov.max_planes) sub_cfg.max_planes = *ov.max_planes;
    if (ov.inlier_ratio_r) sub_cfg.inlier_ratio_r = *ov.inlier_ratio_r;

    const auto& group = groups[slot];
    if (group.size() < 3) continue;

    RayCloud sub;
    sub.width = cloud.width;
    sub.height = cloud.height;
    sub.points.reserve(group.size());
    sub.rays.reserve(group.size());
    sub.pixel.reserve(group.size());
    for (const std::uint32_t i : group) {
      sub.points.push_back(cloud.points[i]);
      sub.rays.push_back(cloud.rays[i]);
      sub.pixel.push_back(cloud.pixel[i]);
    }

    const DetectionResult res = detect(sub, ctx, sub_cfg);
    for (std::size_t step = 1; step < res.phi_trace.size(); ++step) {
      combined.phi_trace.push_back(combined.phi_trace.back() +
                                   (res.phi_trace[step] - res.phi_trace[step - 1]));
    }
    for (const auto& rp : res.planes) {
      planes.push_back(rp.plane);
      members.emplace_back();
      reductions.push_back(rp.reduction_nats);
    }
    for (std::size_t j = 0; j < sub.size(); ++j) {
      const std::uint16_t label = res.mask.labels[j];
      if (label == 0) continue;
      const std::size_t plane_idx = planes.size() - res.planes.size() + (label - 1);
      members[plane_idx].push_back(group[j]);
    }
  }

  for (std::size_t p = 0; p < planes.size(); ++p) {
    std::sort(members[p].begin(), members[p].end());
    for (const std::uint32_t i : members[p]) {
      combined.mask.labels[i] = static_cast<std::uint16_t>(p + 1);
    }
    combined.planes.push_back(RankedPlane{planes[p],
                                          static_cast<int>(members[p].size()),
                                          reductions[p], 0});
  }
  combined.mask.plane_count = static_cast<int>(planes.size());
  combined.info = model_information(cloud, planes, combined.mask, ctx);

  const std::vector<double> regional_trace = combined.phi_trace;
  DetectionResult merged = merge_planes(cloud, rank_planes(std::move(combined)), ctx);
  merged.phi_trace = regional_trace;
  return merged;
}

}  // namespace planedet

#endif  // PLANEDET_PARTITION_HPP
