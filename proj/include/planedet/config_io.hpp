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

#ifndef PLANEDET_CONFIG_IO_HPP
#define PLANEDET_CONFIG_IO_HPP

#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "planedet/geometry.hpp"
#include "planedet/sensor.hpp"

namespace planedet {

/// Intrinsics + sensor description as read from JSON:
///   {fx, fy, cx, cy, epsilon_m, range_m (optional),
///    noise: {kind: constant|proportional|quadratic_experimental, ...}}
/// range_m defaults to the per-image depth span when omitted.
struct SensorConfig {
  CameraIntrinsics intrinsics;
  double epsilon_m = 0.0;
  std::optional<double> range_m;
  std::optional<NoiseModel> noise;
};

inline NoiseModel noise_model_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") return NoiseModel::constant(j.at("sigma0").get<double>());
  if (kind == "proportional") {
    return NoiseModel::proportional(j.at("alpha").get<double>());
  }
  if (kind == "quadratic_experimental") {
    return NoiseModel::quadratic_experimental(j.at("a").get<double>(),
                                              j.at("b").get<double>(),
                                              j.at("z0").get<double>());
  }
  throw std::runtime_error("unknown noise kind: " + kind);
}

inline nlohmann::json noise_model_to_json(const NoiseModel& model) {
  nlohmann::json j;
  switch (model.kind()) {
    case NoiseModel::Kind::kConstant:
      j["kind"] = "constant";
      j["sigma0"] = model.param0();
      break;
    case NoiseModel::Kind::kProportional:
      j["kind"] = "proportional";
      j["alpha"] = model.param0();
      break;
    case NoiseModel::Kind::kQuadraticExperimental:
      j["kind"] = "quadratic_experimental";
      j["a"] = model.param0();
      j["b"] = model.param1();
      j["z0"] = model.param2();
      break;
  }
  return j;
}

inline SensorConfig sensor_config_from_json(const nlohmann::json& j) {
  SensorConfig cfg;
  cfg.intrinsics.fx = j.at("fx").get<double>();
  cfg.intrinsics.fy = j.at("fy").get<double>();
  cfg.intrinsics.cx = j.at("cx").get<double>();
  cfg.intrinsics.cy = j.at("cy").get<double>();
  cfg.epsilon_m = j.at("epsilon_m").get<double>();
  if (j.contains("range_m")) cfg.range_m = j.at("range_m").get<double>();
  if (j.contains("noise")) cfg.noise = noise_model_from_json(j.at("noise"));
  return cfg;
}

inline SensorConfig load_sensor_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  return sensor_config_from_json(j);
}

/// Plane list as exchanged on disk: [{nx, ny, nz, d}, ...] with optional
/// rank/inliers/reduction fields when written by the detector.
inline nlohmann::json planes_to_json(const std::vector<Plane>& planes) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& pl : planes) {
    arr.push_back({{"nx", pl.normal.x()},
                   {"ny", pl.normal.y()},
                   {"nz", pl.normal.z()},
                   {"d", pl.dist}});
  }
  return arr;
}

inline std::vector<Plane> planes_from_json(const nlohmann::json& arr) {
  std::vector<Plane> planes;
  for (const auto& j : arr) {
    Plane pl;
    pl.normal = Eigen::Vector3d(j.at("nx").get<double>(), j.at("ny").get<double>(),
                                j.at("nz").get<double>());
    pl.dist = j.at("d").get<double>();
    planes.push_back(pl.canonicalized());
  }
  return planes;
}

inline std::vector<Plane> load_planes(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  if (j.is_object() && j.contains("planes")) return planes_from_json(j.at("planes"));
  return planes_from_json(j);
}

}  // namespace planedet

#endif  // PLANEDET_CONFIG_IO_HPP
