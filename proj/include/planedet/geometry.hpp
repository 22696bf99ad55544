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

#ifndef PLANEDET_GEOMETRY_HPP
#define PLANEDET_GEOMETRY_HPP

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace planedet {

/**
 * Plane in Hessian normal form: n . x + d = 0 with |n| = 1.
 *
 * Canonical sign convention: d >= 0, and when d == 0 the first nonzero
 * component of n is positive. (n, d) and (-n, -d) describe the same
 * geometric plane; canonicalization picks one representative so planes
 * can be compared and matched.
 */
struct Plane {
  Eigen::Vector3d normal{0.0, 0.0, 1.0};
  double dist{0.0};

  [[nodiscard]] Plane canonicalized() const {
    Plane p = *this;
    if (p.dist < 0.0) {
      p.normal = -p.normal;
      p.dist = -p.dist;
    } else if (p.dist == 0.0) {
      for (int i = 0; i < 3; ++i) {
        if (p.normal[i] != 0.0) {
          if (p.normal[i] < 0.0) p.normal = -p.normal;
          break;
        }
      }
    }
    return p;
  }
};

/// Signed normal distance n . x + d (meters).
inline double delta_normal(const Plane& pl, const Eigen::Vector3d& x) {
  return pl.normal.dot(x) + pl.dist;
}

/**
 * Signed distance along the camera z-axis between x and the intersection
 * of its projection ray with the plane. `ray` must be unit length.
 *
 * The ray-plane intersection is x_bar = -d/(n.ray) * ray, so the z-axis
 * error is (x - x_bar).z = x.z + d*ray.z/(n.ray). Returns nullopt when
 * the ray is parallel to the plane (|n.ray| < 1e-9); callers treat that
 * point as an outlier for this plane.
 */
inline std::optional<double> delta_ray(const Plane& pl,
                                       const Eigen::Vector3d& x,
                                       const Eigen::Vector3d& ray) {
  const double n_dot_ray = pl.normal.dot(ray);
  if (std::abs(n_dot_ray) < 1e-9) return std::nullopt;
  return x.z() + pl.dist * ray.z() / n_dot_ray;
}

/// Plane through three points, canonicalized. Returns nullopt when the
/// points are collinear or coincident (cross-product norm < 1e-12).
inline std::optional<Plane> plane_from_3_points(const Eigen::Vector3d& p0,
                                                const Eigen::Vector3d& p1,
                                                const Eigen::Vector3d& p2) {
  const Eigen::Vector3d cross = (p1 - p0).cross(p2 - p0);
  const double norm = cross.norm();
  if (norm < 1e-12) return std::nullopt;
  Plane pl;
  pl.normal = cross / norm;
  pl.dist = -pl.normal.dot(p0);
  return pl.canonicalized();
}

/**
 * Total-least-squares plane: the smallest principal direction of the
 * centered scatter matrix, through the centroid.
 *
 * Returns nullopt when the two smallest scatter eigenvalues coincide
 * within 1e-12 relative to the largest (the points do not span two
 * independent in-plane directions).
 */
inline std::optional<Plane> refit_plane(const std::vector<Eigen::Vector3d>& points) {
  if (points.size() < 3) {
    throw std::invalid_argument("refit_plane: need at least 3 points");
  }
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());

  Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
  for (const auto& p : points) {
    const Eigen::Vector3d q = p - centroid;
    scatter.noalias() += q * q.transpose();
  }

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(scatter);
  const Eigen::Vector3d evals = solver.eigenvalues();  // ascending
  if (evals[1] - evals[0] <= 1e-12 * evals[2]) return std::nullopt;

  Plane pl;
  pl.normal = solver.eigenvectors().col(0).normalized();
  pl.dist = -pl.normal.dot(centroid);
  return pl.canonicalized();
}

/// Unsigned angle between two plane normals in degrees, orientation
/// independent (planes have no preferred normal sign).
inline double normal_angle_deg(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const double c = std::min(1.0, std::abs(a.dot(b)));
  return std::acos(c) * 180.0 / 3.14159265358979323846;
}

}  // namespace planedet

#endif  // PLANEDET_GEOMETRY_HPP
