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

#ifndef PLANEDET_EVALUATION_HPP
#define PLANEDET_EVALUATION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "planedet/geometry.hpp"
#include "planedet/information.hpp"

namespace planedet {

struct PlaneMatch {
  int gt_id = 0;    // 0-based index into the ground-truth list
  int pred_id = 0;  // 0-based index into the predicted list
  double normal_error_deg = 0.0;
  double distance_error_m = 0.0;
};

struct MatchReport {
  std::vector<PlaneMatch> matches;
  std::vector<int> unmatched_gt;
  std::vector<int> unmatched_pred;

  double mean_normal_error_deg() const {
    if (matches.empty()) return std::numeric_limits<double>::quiet_NaN();
    double sum = 0.0;
    for (const auto& m : matches) sum += m.normal_error_deg;
    return sum / static_cast<double>(matches.size());
  }
  double mean_distance_error_m() const {
    if (matches.empty()) return std::numeric_limits<double>::quiet_NaN();
    double sum = 0.0;
    for (const auto& m : matches) sum += m.distance_error_m;
    return sum / static_cast<double>(matches.size());
  }
};

/**
 * Greedy global matching of predicted to ground-truth planes: all pairs
 * sorted by normal angle, then distance gap, taken while both sides are
 * free. Angles are orientation-invariant (arccos |n.n'|); the distance
 * gap aligns the sign convention per pair (|d - d'| when the normals
 * agree, |d + d'| when they are antipodal).
 */
inline MatchReport match_and_param_errors(const std::vector<Plane>& pred,
                                          const std::vector<Plane>& gt) {
  struct Pair {
    double angle, dist;
    int g, p;
  };
  std::vector<Pair> pairs;
  pairs.reserve(pred.size() * gt.size());
  for (int g = 0; g < static_cast<int>(gt.size()); ++g) {
    for (int p = 0; p < static_cast<int>(pred.size()); ++p) {
      const double angle = normal_angle_deg(gt[g].normal, pred[p].normal);
      const double dist = gt[g].normal.dot(pred[p].normal) >= 0.0
                              ? std::abs(gt[g].dist - pred[p].dist)
                              : std::abs(gt[g].dist + pred[p].dist);
      pairs.push_back({angle, dist, g, p});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.angle != b.angle) return a.angle < b.angle;
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.g != b.g) return a.g < b.g;
    return a.p < b.p;
  });

  MatchReport report;
  std::vector<bool> gt_used(gt.size(), false), pred_used(pred.size(), false);
  for (const auto& pr : pairs) {
    if (gt_used[pr.g] || pred_used[pr.p]) continue;
    gt_used[pr.g] = true;
    pred_used[pr.p] = true;
    report.matches.push_back({pr.g, pr.p, pr.angle, pr.dist});
  }
  for (int g = 0; g < static_cast<int>(gt.size()); ++g) {
    if (!gt_used[g]) report.unmatched_gt.push_back(g);
  }
  for (int p = 0; p < static_cast<int>(pred.size()); ++p) {
    if (!pred_used[p]) report.unmatched_pred.push_back(p);
  }
  return report;
}

namespace detail {

struct Contingency {
  std::map<std::pair<std::uint16_t, std::uint16_t>, std::size_t> joint;
  std::map<std::uint16_t, std::size_t> a_counts;
  std::map<std::uint16_t, std::size_t> b_counts;
  std::size_t n = 0;
};

/// Joint label histogram. Label 0 participates as a region of its own;
/// with ignore_outliers only positions nonzero in BOTH masks count.
inline Contingency contingency(const AssignmentMask& a, const AssignmentMask& b,
                               bool ignore_outliers) {
  if (a.labels.size() != b.labels.size()) {
    throw std::invalid_argument("mask metrics: length mismatch");
  }
  Contingency table;
  for (std::size_t i = 0; i < a.labels.size(); ++i) {
    if (ignore_outliers && (a.labels[i] == 0 || b.labels[i] == 0)) continue;
    ++table.joint[{a.labels[i], b.labels[i]}];
    ++table.a_counts[a.labels[i]];
    ++table.b_counts[b.labels[i]];
    ++table.n;
  }
  return table;
}

}  // namespace detail

/// Variation of information H(a) + H(b) - 2 I(a;b) in nats. Zero for
/// identical partitions (up to label permutation).
inline double voi(const AssignmentMask& a, const AssignmentMask& b,
                  bool ignore_outliers = false) {
  const auto table = detail::contingency(a, b, ignore_outliers);
  if (table.n == 0) throw std::invalid_argument("voi: no labeled positions");
  const double n = static_cast<double>(table.n);
  double ha = 0.0, hb = 0.0, mi = 0.0;
  for (const auto& [label, count] : table.a_counts) {
    const double p = count / n;
    ha -= p * std::log(p);
  }
  for (const auto& [label, count] : table.b_counts) {
    const double p = count / n;
    hb -= p * std::log(p);
  }
  for (const auto& [labels, count] : table.joint) {
    const double pj = count / n;
    const double pa = table.a_counts.at(labels.first) / n;
    const double pb = table.b_counts.at(labels.second) / n;
    mi += pj * std::log(pj / (pa * pb));
  }
  return std::max(0.0, ha + hb - 2.0 * mi);
}

/// Rand index: the fraction of point pairs on which the two partitions
/// agree (joined in both or separated in both). Computed from the
/// contingency table in integer arithmetic, O(labels^2) not O(k^2).
inline double rand_index(const AssignmentMask& a, const AssignmentMask& b,
                         bool ignore_outliers = false) {
  const auto table = detail::contingency(a, b, ignore_outliers);
  if (table.n < 2) throw std::invalid_argument("rand_index: need at least 2 positions");
  const auto choose2 = [](std::size_t m) { return m * (m - 1) / 2; };
  std::size_t same_a = 0, same_b = 0, same_both = 0;
  for (const auto& [label, count] : table.a_counts) same_a += choose2(count);
  for (const auto& [label, count] : table.b_counts) same_b += choose2(count);
  for (const auto& [labels, count] : table.joint) same_both += choose2(count);
  const std::size_t pairs = choose2(table.n);
  const std::size_t agreements = pairs - same_a - same_b + 2 * same_both;
  return static_cast<double>(agreements) / static_cast<double>(pairs);
}

/// Segmentation covering of gt by pred: sum over gt regions of
/// |R|/k * max_{R' in pred} IoU(R, R').
inline double segmentation_covering(const AssignmentMask& gt, const AssignmentMask& pred,
                                    bool ignore_outliers = false) {
  const auto table = detail::contingency(gt, pred, ignore_outliers);
  if (table.n == 0) {
    throw std::invalid_argument("segmentation_covering: no labeled positions");
  }
  double covering = 0.0;
  for (const auto& [gt_label, gt_count] : table.a_counts) {
    double best_iou = 0.0;
    for (const auto& [pred_label, pred_count] : table.b_counts) {
      const auto it = table.joint.find({gt_label, pred_label});
      if (it == table.joint.end()) continue;
      const double inter = static_cast<double>(it->second);
      const double iou = inter / static_cast<double>(gt_count + pred_count - it->second);
      best_iou = std::max(best_iou, iou);
    }
    covering += static_cast<double>(gt_count) / static_cast<double>(table.n) * best_iou;
  }
  return covering;
}

/// Full mask-agreement report plus plane-parameter errors.
struct EvalReport {
  MatchReport params;
  double voi_nats = 0.0;
  double rand = 0.0;
  double covering = 0.0;
};

inline EvalReport evaluate(const std::vector<Plane>& pred_planes,
                           const std::vector<Plane>& gt_planes,
                           const AssignmentMask& pred_mask,
                           const AssignmentMask& gt_mask,
                           bool ignore_outliers = false) {
  EvalReport report;
  report.params = match_and_param_errors(pred_planes, gt_planes);
  report.voi_nats = voi(gt_mask, pred_mask, ignore_outliers);
  report.rand = rand_index(gt_mask, pred_mask, ignore_outliers);
  report.covering = segmentation_covering(gt_mask, pred_mask, ignore_outliers);
  return report;
}

}  // namespace planedet

#endif  // PLANEDET_EVALUATION_HPP
