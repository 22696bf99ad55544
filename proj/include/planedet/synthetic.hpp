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

#ifndef PLANEDET_SYNTHETIC_HPP
#define PLANEDET_SYNTHETIC_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <variant>
#include <vector>

#include "planedet/geometry.hpp"
#include "planedet/information.hpp"
#include "planedet/rng.hpp"
#include "planedet/sensor.hpp"

namespace planedet {

/**
 * Ascending staircase seen by a camera pitched down by tilt_deg. The
 * visible profile alternates riser/tread faces (`faces` of them, riser
 * first); riser j is the vertical plane z = distance + j*run, tread j
 * the horizontal plane rise*(j+1) below the camera's base offset. Pixels
 * whose rays miss the profile are invalid.
 */
struct StaircaseScene {
  int faces = 4;
  double step_rise = 0.2;
  double step_run = 0.3;
  double distance = 2.0;     // camera to the first riser
  double tilt_deg = 20.0;    // camera pitch toward the steps
  double base_offset = 1.0;  // stair base edge below the camera axis
};

/// Triangular pyramid protruding toward the camera from a fronto-parallel
/// background plane: 3 visible side faces + background = 4 planes.
struct TetrahedronScene {
  double base_z = 2.0;
  double apex_height = 0.5;
  double base_scale = 1.0;  // scales the documented base triangle
};

/// Four fronto-parallel strips left to right, strip j at depth strip_z[j]
/// corrupted by amplitude * sin(2*pi*f_j*u/width) along the image width.
struct SinusoidQuadScene {
  std::vector<double> frequencies{0.0, 2.0, 10.0, 100.0};
  double amplitude = 0.005;
  std::vector<double> strip_z{1.7, 1.9, 2.1, 2.3};
};

/// Two planes meeting at a vertical ridge line toward the camera, with
/// the stated dihedral angle between them; the image splits left/right.
struct TwoPlaneScene {
  double intersection_angle_deg = 130.0;
  double ridge_z = 1.8;
};

/// A large fronto-parallel far plane and a smaller tilted front plane
/// whose intersection line is visible: the scene for intersection
/// ambiguity studies. Plane 1 of the ground truth is the front plane.
struct TJunctionScene {
  double far_z = 2.0;
  double front_tilt_deg = 8.0;
  double split_frac = 0.62;  // image fraction left of the intersection
};

struct SceneSpec {
  std::variant<StaircaseScene, TetrahedronScene, SinusoidQuadScene, TwoPlaneScene,
               TJunctionScene>
      kind = StaircaseScene{};
  int width = 160;
  int height = 120;
  CameraIntrinsics intrinsics{120.0, 120.0, 79.5, 59.5};
  double noise_sigma = 0.005;  // zero-mean Gaussian depth noise
  double epsilon_m = 0.01;     // quantization step applied after the noise
  std::uint64_t seed = 0;
};

/// True planes plus the per-pixel true plane id (0 where no plane).
struct GroundTruth {
  std::vector<Plane> planes;
  AssignmentMask mask;  // one label per pixel, row-major
};

struct SyntheticScene {
  DepthImage depth;
  GroundTruth truth;
};

/// Additive sinusoidal corruption at column u: amplitude*sin(2*pi*f*u/width).
inline double sinusoid_offset(double f, double amplitude, int width, double u) {
  if (f < 0.0) throw std::invalid_argument("sinusoid_offset: f must be >= 0");
  return amplitude * std::sin(2.0 * std::numbers::pi * f * u / width);
}

namespace detail {

struct Hit {
  double depth = 0.0;  // camera-frame z; 0 = miss
  int plane_id = 0;    // 1-based ground-truth id
};

inline Hit render_staircase(const StaircaseScene& s, double a, double b) {
  const double theta = s.tilt_deg * std::numbers::pi / 180.0;
  // Camera ray (a, b, 1) expressed in the stair frame (y down, z forward).
  const double my = b * std::cos(theta) + std::sin(theta);
  const double mz = std::cos(theta) - b * std::sin(theta);

  Hit hit;
  double best_t = std::numeric_limits<double>::infinity();
  for (int f = 0; f < s.faces; ++f) {
    const int j = f / 2;
    if (f % 2 == 0) {  // riser: stair plane z = distance + j*run
      if (!(mz > 1e-12)) continue;
      const double t = (s.distance + j * s.step_run) / mz;
      const double y = t * my;
      if (y < s.base_offset - (j + 1) * s.step_rise || y > s.base_offset - j * s.step_rise) {
        continue;
      }
      if (t > 0.0 && t < best_t) {
        best_t = t;
        hit = Hit{t, f + 1};
      }
    } else {  // tread: stair plane y = base_offset - (j+1)*rise
      const double level = s.base_offset - (j + 1) * s.step_rise;
      if (!(my > 1e-12) || !(level > 0.0)) continue;
      const double t = level / my;
      const double z = t * mz;
      if (z < s.distance + j * s.step_run || z > s.distance + (j + 1) * s.step_run) {
        continue;
      }
      if (t > 0.0 && t < best_t) {
        best_t = t;
        hit = Hit{t, f + 1};
      }
    }
  }
  return hit;
}

inline std::vector<Plane> staircase_planes(const StaircaseScene& s) {
  const double theta = s.tilt_deg * std::numbers::pi / 180.0;
  const double c = std::cos(theta);
  const double n = std::sin(theta);
  std::vector<Plane> planes;
  for (int f = 0; f < s.faces; ++f) {
    const int j = f / 2;
    Plane pl;
    if (f % 2 == 0) {
      pl.normal = Eigen::Vector3d(0.0, -n, c);  // stair (0,0,1) in camera frame
      pl.dist = -(s.distance + j * s.step_run);
    } else {
      pl.normal = Eigen::Vector3d(0.0, c, n);  // stair (0,1,0) in camera frame
      pl.dist = -(s.base_offset - (j + 1) * s.step_rise);
    }
    planes.push_back(pl.canonicalized());
  }
  return planes;
}

struct TetraGeometry {
  Eigen::Vector3d apex;
  std::array<Eigen::Vector3d, 3> corners;
  std::vector<Plane> planes;  // faces 0..2, background last
};

inline TetraGeometry tetra_geometry(const TetrahedronScene& s) {
  TetraGeometry g;
  // Base triangle sized to fill a 160x120 view from base_z = 2.
  g.corners = {Eigen::Vector3d(-1.25 * s.base_scale, -0.75 * s.base_scale, s.base_z),
               Eigen::Vector3d(1.25 * s.base_scale, -0.75 * s.base_scale, s.base_z),
               Eigen::Vector3d(0.0, 55.0 / 60.0 * s.base_scale, s.base_z)};
  Eigen::Vector3d centroid = (g.corners[0] + g.corners[1] + g.corners[2]) / 3.0;
  g.apex = Eigen::Vector3d(centroid.x(), centroid.y(), s.base_z - s.apex_height);
  for (int f = 0; f < 3; ++f) {
    const auto plane =
        plane_from_3_points(g.apex, g.corners[f], g.corners[(f + 1) % 3]);
    if (!plane) throw std::invalid_argument("TetrahedronScene: degenerate face");
    g.planes.push_back(*plane);
  }
  Plane background;
  background.normal = Eigen::Vector3d(0.0, 0.0, -1.0);
  background.dist = s.base_z;
  g.planes.push_back(background.canonicalized());
  return g;
}

inline bool inside_triangle_2d(double px, double py, const Eigen::Vector2d& a,
                               const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  const auto side = [](double x, double y, const Eigen::Vector2d& p,
                       const Eigen::Vector2d& q) {
    return (q.x() - p.x()) * (y - p.y()) - (q.y() - p.y()) * (x - p.x());
  };
  const double s0 = side(px, py, a, b);
  const double s1 = side(px, py, b, c);
  const double s2 = side(px, py, c, a);
  const bool has_neg = (s0 < 0) || (s1 < 0) || (s2 < 0);
  const bool has_pos = (s0 > 0) || (s1 > 0) || (s2 > 0);
  return !(has_neg && has_pos);
}

inline Hit render_tetrahedron(const TetraGeometry& g, const CameraIntrinsics& k,
                              double u, double v) {
  const auto project = [&](const Eigen::Vector3d& p) {
    return Eigen::Vector2d(k.fx * p.x() / p.z() + k.cx, k.fy * p.y() / p.z() + k.cy);
  };
  const Eigen::Vector2d apex2 = project(g.apex);
  const Eigen::Vector3d ray(static_cast<double>((u - k.cx) / k.fx),
                            static_cast<double>((v - k.cy) / k.fy), 1.0);
  for (int f = 0; f < 3; ++f) {
    const Eigen::Vector2d c0 = project(g.corners[f]);
    const Eigen::Vector2d c1 = project(g.corners[(f + 1) % 3]);
    if (!inside_triangle_2d(u, v, apex2, c0, c1)) continue;
    const Plane& pl = g.planes[f];
    const double denom = pl.normal.dot(ray);
    if (std::abs(denom) < 1e-12) continue;
    const double t = -pl.dist / denom;
    if (t > 0.0) return Hit{t, f + 1};
  }
  return Hit{g.planes.back().dist, 4};  // background (canonical d = base_z)
}

}  // namespace detail

/**
 * Renders the analytic scene (exact first-hit depth along each pixel
 * ray), records the ground truth, then adds N(0, sigma^2) depth noise
 * and snaps to the epsilon grid. Noise is drawn in row-major pixel order
 * from the scene seed, one deviate per pixel, so images are reproducible
 * bit for bit.
 */
inline SyntheticScene generate(const SceneSpec& spec) {
  if (spec.width <= 0 || spec.height <= 0) {
    throw std::invalid_argument("SceneSpec: empty image");
  }
  const auto& k = spec.intrinsics;

  SyntheticScene scene;
  scene.depth.width = spec.width;
  scene.depth.height = spec.height;
  scene.depth.depth_m.assign(static_cast<std::size_t>(spec.width) * spec.height, 0.0);
  scene.truth.mask.labels.assign(scene.depth.depth_m.size(), 0);

  std::optional<detail::TetraGeometry> tetra;
  if (const auto* s = std::get_if<TetrahedronScene>(&spec.kind)) {
    tetra = detail::tetra_geometry(*s);
  }

  for (int v = 0; v < spec.height; ++v) {
    for (int u = 0; u < spec.width; ++u) {
      const double a = (u - k.cx) / k.fx;
      const double b = (v - k.cy) / k.fy;
      detail::Hit hit;

      if (const auto* s = std::get_if<StaircaseScene>(&spec.kind)) {
        hit = detail::render_staircase(*s, a, b);
      } else if (std::holds_alternative<TetrahedronScene>(spec.kind)) {
        hit = detail::render_tetrahedron(*tetra, k, u, v);
      } else if (const auto* s = std::get_if<SinusoidQuadScene>(&spec.kind)) {
        const std::size_t strips = s->frequencies.size();
        const std::size_t j = std::min<std::size_t>(
            strips - 1, static_cast<std::size_t>(u) * strips / spec.width);
        const double z = s->strip_z.at(j) +
                         sinusoid_offset(s->frequencies[j], s->amplitude, spec.width, u);
        hit = detail::Hit{z, static_cast<int>(j) + 1};
      } else if (const auto* s = std::get_if<TwoPlaneScene>(&spec.kind)) {
        const double alpha =
            (180.0 - s->intersection_angle_deg) / 2.0 * std::numbers::pi / 180.0;
        const double denom = 1.0 - std::tan(alpha) * std::abs(a);
        if (denom > 1e-6) {
          hit = detail::Hit{s->ridge_z / denom, a < 0.0 ? 1 : 2};
        }
      } else if (const auto* s = std::get_if<TJunctionScene>(&spec.kind)) {
        const double beta = s->front_tilt_deg * std::numbers::pi / 180.0;
        const double u_split = s->split_frac * spec.width;
        const double a_split = (u_split - k.cx) / k.fx;
        const double x_split = a_split * s->far_z;
        const double z_front =
            (s->far_z + std::tan(beta) * x_split) / (1.0 + std::tan(beta) * a);
        if (z_front < s->far_z) {
          hit = detail::Hit{z_front, 1};  // front plane
        } else {
          hit = detail::Hit{s->far_z, 2};  // far plane
        }
      }

      if (hit.plane_id > 0 && hit.depth > 0.0) {
        scene.depth.at(v, u) = hit.depth;
        scene.truth.mask.labels[static_cast<std::size_t>(v) * spec.width + u] =
            static_cast<std::uint16_t>(hit.plane_id);
      }
    }
  }

  // Ground-truth plane lists, ids matching the rendered labels.
  if (const auto* s = std::get_if<StaircaseScene>(&spec.kind)) {
    scene.truth.planes = detail::staircase_planes(*s);
  } else if (std::holds_alternative<TetrahedronScene>(spec.kind)) {
    for (auto& pl : tetra->planes) scene.truth.planes.push_back(pl.canonicalized());
  } else if (const auto* s = std::get_if<SinusoidQuadScene>(&spec.kind)) {
    for (std::size_t j = 0; j < s->frequencies.size(); ++j) {
      Plane pl;
      pl.normal = Eigen::Vector3d(0.0, 0.0, -1.0);
      pl.dist = s->strip_z.at(j);
      scene.truth.planes.push_back(pl.canonicalized());
    }
  } else if (const auto* s = std::get_if<TwoPlaneScene>(&spec.kind)) {
    const double alpha =
        (180.0 - s->intersection_angle_deg) / 2.0 * std::numbers::pi / 180.0;
    Plane left{Eigen::Vector3d(-std::sin(alpha), 0.0, -std::cos(alpha)),
               s->ridge_z * std::cos(alpha)};
    Plane right{Eigen::Vector3d(std::sin(alpha), 0.0, -std::cos(alpha)),
                s->ridge_z * std::cos(alpha)};
    scene.truth.planes = {left.canonicalized(), right.canonicalized()};
  } else if (const auto* s = std::get_if<TJunctionScene>(&spec.kind)) {
    const double beta = s->front_tilt_deg * std::numbers::pi / 180.0;
    const double u_split = s->split_frac * spec.width;
    const double x_split = (u_split - k.cx) / k.fx * s->far_z;
    Plane front{Eigen::Vector3d(-std::sin(beta), 0.0, -std::cos(beta)),
                (s->far_z + std::tan(beta) * x_split) * std::cos(beta)};
    Plane far_plane{Eigen::Vector3d(0.0, 0.0, -1.0), s->far_z};
    scene.truth.planes = {front.canonicalized(), far_plane.canonicalized()};
  }
  scene.truth.mask.plane_count = static_cast<int>(scene.truth.planes.size());

  // Sensor simulation: Gaussian depth noise, then quantization.
  std::mt19937_64 rng(spec.seed);
  NormalSampler normal(rng);
  SensorSpec grid;
  grid.range_m = 65.535;  // full 16-bit millimeter range; no clamping here
  grid.epsilon_m = spec.epsilon_m;
  grid.intrinsics = k;
  for (double& d : scene.depth.depth_m) {
    const double noise = normal();
    if (d > 0.0) {
      d = quantize(d + spec.noise_sigma * noise, grid);
    }
  }
  return scene;
}

}  // namespace planedet

#endif  // PLANEDET_SYNTHETIC_HPP
