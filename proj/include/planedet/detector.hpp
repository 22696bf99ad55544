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

#ifndef PLANEDET_DETECTOR_HPP
#define PLANEDET_DETECTOR_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "planedet/geometry.hpp"
#include "planedet/information.hpp"
#include "planedet/rng.hpp"
#include "planedet/sensor.hpp"

namespace planedet {

struct DetectorConfig {
  double confidence_c = 0.99;   // probability a good sample is drawn
  double inlier_ratio_r = 0.25; // assumed per-plane inlier ratio
  int max_planes = 8;           // hard cap on candidate rounds
  int min_inliers = 3;          // floor on accepted plane support
  std::uint64_t seed = 0;
  bool refit = true;            // total-least-squares pass on inliers
  int early_stop_patience = 2;  // consecutive empty rounds before stopping
};

inline void validate(const DetectorConfig& cfg) {
  if (!(cfg.confidence_c > 0.0) || !(cfg.confidence_c < 1.0) ||
      !(cfg.inlier_ratio_r > 0.0) || !(cfg.inlier_ratio_r <= 1.0) ||
      cfg.max_planes < 1 || cfg.min_inliers < 3 || cfg.early_stop_patience < 1) {
    throw std::invalid_argument("DetectorConfig: parameter out of range");
  }
}

/// Number of 3-point samples needed to hit an all-inlier triple with
/// confidence c at inlier ratio r: ceil(ln(1-c) / ln(1-r^3)); 1 when r = 1.
inline int trial_count(double c, double r) {
  if (!(c > 0.0) || !(c < 1.0) || !(r > 0.0) || r > 1.0) {
    throw std::invalid_argument("trial_count: need 0 < c < 1 and 0 < r <= 1");
  }
  if (r >= 1.0) return 1;
  const double trials = std::log1p(-c) / std::log1p(-r * r * r);
  return std::max(1, static_cast<int>(std::ceil(trials)));
}

struct CandidatePlane {
  Plane plane;
  std::vector<std::uint32_t> inliers;  // cloud indices
  double reduction_nats = 0.0;
};

struct RankedPlane {
  Plane plane;
  int inlier_count = 0;
  double reduction_nats = 0.0;
  int rank = 0;  // 1 = most negative reduction
};

struct DetectionResult {
  std::vector<RankedPlane> planes;  // in rank order
  AssignmentMask mask;              // labels follow rank order
  ModelInformation info;
  std::vector<double> phi_trace;    // Phi per model size, starting at Phi_0
};

namespace detail {

/// Per-point constants so that point_term(delta) = bias + weight * delta^2.
struct PointTermTable {
  std::vector<double> bias;
  std::vector<double> weight;

  PointTermTable(const RayCloud& cloud, const InfoContext& ctx) {
    const double log_ratio = std::log(ctx.ratio);
    bias.resize(cloud.size());
    weight.resize(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const double sigma = ctx.noise.sigma_at(cloud.points[i].z());
      bias[i] = -log_ratio + 0.5 * std::log(2.0 * std::numbers::pi * sigma *
                                            sigma / (ctx.epsilon_m * ctx.epsilon_m));
      weight[i] = 0.5 / (sigma * sigma);
    }
  }
};

inline std::optional<double> fast_delta(const Plane& pl, const RayCloud& cloud,
                                        std::size_t i, InfoVariant variant) {
  if (variant == InfoVariant::kDepthImage) {
    return delta_ray(pl, cloud.points[i], cloud.rays[i]);
  }
  return delta_normal(pl, cloud.points[i]);
}

/// Summed reduction and inlier count of `pl` over the index subset.
inline std::pair<double, int> score_plane(const Plane& pl, const RayCloud& cloud,
                                          const std::vector<std::uint32_t>& subset,
                                          const PointTermTable& table,
                                          InfoVariant variant) {
  double reduction = 0.0;
  int count = 0;
  for (const std::uint32_t i : subset) {
    const auto delta = fast_delta(pl, cloud, i, variant);
    if (!delta) continue;  // ray parallel: outlier for this plane
    const double term = table.bias[i] + table.weight[i] * (*delta) * (*delta);
    if (term < 0.0) {
      reduction += term;
      ++count;
    }
  }
  return {reduction, count};
}

inline std::vector<std::uint32_t> collect_inliers(
    const Plane& pl, const RayCloud& cloud,
    const std::vector<std::uint32_t>& subset, const PointTermTable& table,
    InfoVariant variant) {
  std::vector<std::uint32_t> inliers;
  for (const std::uint32_t i : subset) {
    const auto delta = fast_delta(pl, cloud, i, variant);
    if (!delta) continue;
    if (table.bias[i] + table.weight[i] * (*delta) * (*delta) < 0.0) {
      inliers.push_back(i);
    }
  }
  return inliers;
}

}  // namespace detail

/**
 * Draws trial_count(c, r) random 3-point samples from the unassigned
 * subset, scores each non-degenerate plane by its summed information
 * reduction over the subset, and returns the most negative candidate
 * (ties keep the earliest trial). With cfg.refit the winner is refit by
 * total least squares to its inliers and kept only if that improves the
 * reduction. Returns nullopt when fewer than 3 points are available, the
 * best reduction is >= 0, or the winner's support is below min_inliers.
 */
inline std::optional<CandidatePlane> best_candidate(
    const RayCloud& cloud, const std::vector<std::uint32_t>& unassigned,
    const InfoContext& ctx, const DetectorConfig& cfg, std::mt19937_64& rng,
    const detail::PointTermTable& table) {
  if (unassigned.size() < 3) return std::nullopt;

  const int trials = trial_count(cfg.confidence_c, cfg.inlier_ratio_r);
  bool found = false;
  Plane best_plane;
  double best_reduction = 0.0;
  int best_count = 0;

  for (int t = 0; t < trials; ++t) {
    const auto pick = sample3_distinct(rng, unassigned.size());
    const auto plane = plane_from_3_points(cloud.points[unassigned[pick[0]]],
                                           cloud.points[unassigned[pick[1]]],
                                           cloud.points[unassigned[pick[2]]]);
    if (!plane) continue;
    const auto [reduction, count] =
        detail::score_plane(*plane, cloud, unassigned, table, ctx.variant);
    if (!found || reduction < best_reduction) {
      found = true;
      best_plane = *plane;
      best_reduction = reduction;
      best_count = count;
    }
  }
  if (!found) return std::nullopt;

  if (cfg.refit && best_count >= 3) {
    std::vector<Eigen::Vector3d> pts;
    pts.reserve(static_cast<std::size_t>(best_count));
    for (const std::uint32_t i : detail::collect_inliers(
             best_plane, cloud, unassigned, table, ctx.variant)) {
      pts.push_back(cloud.points[i]);
    }
    if (const auto refit = refit_plane(pts)) {
      const auto [reduction, count] =
          detail::score_plane(*refit, cloud, unassigned, table, ctx.variant);
      if (reduction < best_reduction) {
        best_plane = *refit;
        best_reduction = reduction;
        best_count = count;
      }
    }
  }

  if (!(best_reduction < 0.0) || best_count < cfg.min_inliers) return std::nullopt;

  CandidatePlane cand;
  cand.plane = best_plane;
  cand.inliers = detail::collect_inliers(best_plane, cloud, unassigned, table,
                                         ctx.variant);
  cand.reduction_nats = best_reduction;
  return cand;
}

inline std::optional<CandidatePlane> best_candidate(
    const RayCloud& cloud, const std::vector<std::uint32_t>& unassigned,
    const InfoContext& ctx, const DetectorConfig& cfg, std::mt19937_64& rng) {
  const detail::PointTermTable table(cloud, ctx);
  return best_candidate(cloud, unassigned, ctx, cfg, rng, table);
}

/// Reorders planes by ascending reduction (rank 1 = most negative, stable
/// for ties), remaps mask labels to rank order, and permutes the
/// per-plane information entries to match.
inline DetectionResult rank_planes(DetectionResult result) {
  const std::size_t n = result.planes.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return result.planes[a].reduction_nats < result.planes[b].reduction_nats;
  });

  std::vector<RankedPlane> ranked(n);
  std::vector<std::uint16_t> relabel(n + 1, 0);  // old label -> new label
  for (std::size_t r = 0; r < n; ++r) {
    ranked[r] = result.planes[order[r]];
    ranked[r].rank = static_cast<int>(r) + 1;
    relabel[order[r] + 1] = static_cast<std::uint16_t>(r + 1);
  }
  result.planes = std::move(ranked);
  for (auto& label : result.mask.labels) label = relabel[label];

  if (result.info.per_plane.size() == n) {
    std::vector<PlaneInfoEntry> entries(n);
    for (std::size_t r = 0; r < n; ++r) entries[r] = result.info.per_plane[order[r]];
    result.info.per_plane = std::move(entries);
  }
  return result;
}

/**
 * Greedy consecutive plane extraction with information bookkeeping.
 *
 * Round N freezes the assignments of the first N-1 planes, searches the
 * unassigned points with best_candidate, and extends the recursion
 *   Phi_N = Phi_{N-1} + k ln((N+1)/N) + 3 ln(R/eps) + reduction_N.
 * Empty rounds (no candidate with negative reduction) do not grow the
 * model; after early_stop_patience consecutive empty rounds, or
 * max_planes rounds in total, the search stops. The returned model is
 * the prefix minimising Phi (ties prefer fewer planes); later planes are
 * discarded and their points relabeled outliers. Planes are then ranked
 * by reduction and the final ledger is recomputed from the assignment.
 */
inline DetectionResult detect(const RayCloud& cloud, const InfoContext& ctx,
                              const DetectorConfig& cfg) {
  validate(cfg);
  const std::size_t k = cloud.size();

  DetectionResult result;
  result.mask.labels.assign(k, 0);
  result.phi_trace.push_back(phi_zero(k, ctx));
  if (k == 0) return result;

  const detail::PointTermTable table(cloud, ctx);
  std::mt19937_64 rng(cfg.seed);

  std::vector<std::uint32_t> unassigned(k);
  std::iota(unassigned.begin(), unassigned.end(), 0);

  std::vector<CandidatePlane> accepted;
  int empty_rounds = 0;
  for (int round = 0; round < cfg.max_planes; ++round) {
    if (static_cast<int>(accepted.size()) >= cfg.max_planes) break;
    if (unassigned.size() < 3) break;
    auto cand = best_candidate(cloud, unassigned, ctx, cfg, rng, table);
    if (!cand) {
      if (++empty_rounds >= cfg.early_stop_patience) break;
      continue;
    }
    empty_rounds = 0;

    const int n = static_cast<int>(accepted.size()) + 1;
    result.phi_trace.push_back(result.phi_trace.back() + mask_increment(k, n) +
                               plane_param_cost(ctx) + cand->reduction_nats);

    std::vector<std::uint32_t> remaining;
    remaining.reserve(unassigned.size() - cand->inliers.size());
    std::set_difference(unassigned.begin(), unassigned.end(),
                        cand->inliers.begin(), cand->inliers.end(),
                        std::back_inserter(remaining));
    unassigned = std::move(remaining);
    accepted.push_back(std::move(*cand));
  }

  // Model selection: the prefix with minimal Phi.
  const auto min_it =
      std::min_element(result.phi_trace.begin(), result.phi_trace.end());
  const std::size_t n_star =
      static_cast<std::size_t>(std::distance(result.phi_trace.begin(), min_it));
  accepted.resize(n_star);

  std::vector<Plane> planes;
  for (std::size_t p = 0; p < accepted.size(); ++p) {
    planes.push_back(accepted[p].plane);
    for (const std::uint32_t i : accepted[p].inliers) {
      result.mask.labels[i] = static_cast<std::uint16_t>(p + 1);
    }
    result.planes.push_back(RankedPlane{accepted[p].plane,
                                        static_cast<int>(accepted[p].inliers.size()),
                                        accepted[p].reduction_nats, 0});
  }
  result.mask.plane_count = static_cast<int>(planes.size());
  result.info = model_information(cloud, planes, result.mask, ctx);
  return rank_planes(std::move(result));
}

/**
 * Fixpoint plane merging: walking absorbers best-rank-first, a
 * worse-ranked plane is absorbed when its inlier set has a negative
 * summed point_term under the absorber AND the merge does not increase
 * the total information (term change minus one plane_param_cost plus the
 * mask shrink k ln(N/(N+1))). The second condition guards MDL
 * consistency; in fragment scenarios it is implied by the first.
 */
inline DetectionResult merge_planes(const RayCloud& cloud, const DetectionResult& result,
                                    const InfoContext& ctx) {
  DetectionResult r = rank_planes(result);
  const std::size_t k = cloud.size();
  const detail::PointTermTable table(cloud, ctx);

  std::vector<std::vector<std::uint32_t>> members(r.planes.size());
  for (std::size_t i = 0; i < r.mask.labels.size(); ++i) {
    if (r.mask.labels[i] > 0) members[r.mask.labels[i] - 1].push_back(static_cast<std::uint32_t>(i));
  }

  auto reduction_of = [&](const Plane& pl, const std::vector<std::uint32_t>& pts)
      -> std::optional<double> {
    double sum = 0.0;
    for (const std::uint32_t i : pts) {
      const auto delta = detail::fast_delta(pl, cloud, i, ctx.variant);
      if (!delta) return std::nullopt;  // undefined error: cannot absorb
      sum += table.bias[i] + table.weight[i] * (*delta) * (*delta);
    }
    return sum;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t a = 0; a < r.planes.size() && !changed; ++a) {
      for (std::size_t v = a + 1; v < r.planes.size() && !changed; ++v) {
        const auto absorbed_sum = reduction_of(r.planes[a].plane, members[v]);
        if (!absorbed_sum || !(*absorbed_sum < 0.0)) continue;

        const double n_before = static_cast<double>(r.planes.size());
        const double delta_phi = (*absorbed_sum - r.planes[v].reduction_nats) -
                                 plane_param_cost(ctx) +
                                 static_cast<double>(k) *
                                     std::log(n_before / (n_before + 1.0));
        if (delta_phi > 0.0) continue;

        members[a].insert(members[a].end(), members[v].begin(), members[v].end());
        std::sort(members[a].begin(), members[a].end());
        members.erase(members.begin() + static_cast<std::ptrdiff_t>(v));
        r.planes.erase(r.planes.begin() + static_cast<std::ptrdiff_t>(v));
        const auto new_sum = reduction_of(r.planes[a].plane, members[a]);
        r.planes[a].reduction_nats = new_sum ? *new_sum : r.planes[a].reduction_nats;
        r.planes[a].inlier_count = static_cast<int>(members[a].size());

        // Re-rank before rescanning: the absorber's reduction just grew.
        std::vector<std::size_t> order(r.planes.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
          return r.planes[x].reduction_nats < r.planes[y].reduction_nats;
        });
        std::vector<RankedPlane> planes_sorted(r.planes.size());
        std::vector<std::vector<std::uint32_t>> members_sorted(r.planes.size());
        for (std::size_t p = 0; p < order.size(); ++p) {
          planes_sorted[p] = r.planes[order[p]];
          members_sorted[p] = std::move(members[order[p]]);
        }
        r.planes = std::move(planes_sorted);
        members = std::move(members_sorted);
        changed = true;
      }
    }
  }

  std::fill(r.mask.labels.begin(), r.mask.labels.end(), std::uint16_t{0});
  std::vector<Plane> planes;
  for (std::size_t p = 0; p < r.planes.size(); ++p) {
    planes.push_back(r.planes[p].plane);
    for (const std::uint32_t i : members[p]) {
      r.mask.labels[i] = static_cast<std::uint16_t>(p + 1);
    }
  }
  r.mask.plane_count = static_cast<int>(planes.size());
  r.info = model_information(cloud, planes, r.mask, ctx);
  r.phi_trace = result.phi_trace;
  return rank_planes(std::move(r));
}

}  // namespace planedet

#endif  // PLANEDET_DETECTOR_HPP
