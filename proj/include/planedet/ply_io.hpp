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

#ifndef PLANEDET_PLY_IO_HPP
#define PLANEDET_PLY_IO_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "planedet/information.hpp"
#include "planedet/sensor.hpp"

namespace planedet {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
};

inline Rgb hsv_to_rgb(double hue_deg, double saturation, double value) {
  const double h = std::fmod(std::fmod(hue_deg, 360.0) + 360.0, 360.0) / 60.0;
  const int sector = static_cast<int>(h);
  const double f = h - sector;
  const double p = value * (1.0 - saturation);
  const double q = value * (1.0 - saturation * f);
  const double t = value * (1.0 - saturation * (1.0 - f));
  double r = 0, g = 0, b = 0;
  switch (sector % 6) {
    case 0: r = value; g = t; b = p; break;
    case 1: r = q; g = value; b = p; break;
    case 2: r = p; g = value; b = t; break;
    case 3: r = p; g = q; b = value; break;
    case 4: r = t; g = p; b = value; break;
    case 5: r = value; g = p; b = q; break;
  }
  const auto to8 = [](double x) {
    return static_cast<std::uint8_t>(std::lround(255.0 * x));
  };
  return {to8(r), to8(g), to8(b)};
}

/// Palette convention: rank 1 is red (hue 0) and subsequent ranks step
/// around the HSV hue wheel in equal increments; label 0 (outliers)
/// renders mid-gray. Documented in the README so figures are comparable.
inline Rgb rank_color(int label, int plane_count) {
  if (label <= 0) return {128, 128, 128};
  const int n = std::max(1, plane_count);
  return hsv_to_rgb(360.0 * (label - 1) / n, 1.0, 1.0);
}

/// ASCII PLY of the cloud, one vertex per point, colored by mask label
/// (labels follow rank order). Output formatting is fixed-precision and
/// deterministic.
inline void write_ply(const std::string& path, const RayCloud& cloud,
                      const AssignmentMask& mask) {
  if (mask.labels.size() != cloud.size()) {
    throw std::invalid_argument("write_ply: mask length != cloud size");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "ply\nformat ascii 1.0\n"
      << "element vertex " << cloud.size() << "\n"
      << "property float x\nproperty float y\nproperty float z\n"
      << "property uchar red\nproperty uchar green\nproperty uchar blue\n"
      << "end_header\n";
  char line[128];
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto& p = cloud.points[i];
    const Rgb c = rank_color(mask.labels[i], mask.plane_count);
    std::snprintf(line, sizeof(line), "%.6f %.6f %.6f %u %u %u\n", p.x(), p.y(),
                  p.z(), c.r, c.g, c.b);
    out << line;
  }
  if (!out) throw std::runtime_error("short write: " + path);
}

}  // namespace planedet

#endif  // PLANEDET_PLY_IO_HPP
