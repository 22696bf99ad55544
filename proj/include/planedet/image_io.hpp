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

#ifndef PLANEDET_IMAGE_IO_HPP
#define PLANEDET_IMAGE_IO_HPP

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "planedet/sensor.hpp"

namespace planedet {

/// 16-bit single-channel raster as exchanged on disk. Depth images carry
/// millimeters (0 = invalid); label maps carry region or plane ids.
struct Image16 {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> pixels;

  std::uint16_t at(int row, int col) const {
    return pixels[static_cast<std::size_t>(row) * width + col];
  }
};

namespace detail {

inline int pnm_next_int(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == EOF) throw std::runtime_error("PGM: truncated header");
    if (c == '#') {
      std::string comment;
      std::getline(in, comment);
      continue;
    }
    if (std::isspace(c)) {
      in.get();
      continue;
    }
    break;
  }
  int value = 0;
  if (!(in >> value)) throw std::runtime_error("PGM: malformed header");
  return value;
}

}  // namespace detail

inline Image16 read_pgm16(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (magic[0] != 'P' || magic[1] != '5') {
    throw std::runtime_error(path + ": not a binary PGM (P5)");
  }
  Image16 img;
  img.width = detail::pnm_next_int(in);
  img.height = detail::pnm_next_int(in);
  const int maxval = detail::pnm_next_int(in);
  if (img.width <= 0 || img.height <= 0 || maxval <= 0 || maxval > 65535) {
    throw std::runtime_error(path + ": bad PGM dimensions or maxval");
  }
  in.get();  // single whitespace after maxval
  const std::size_t count = static_cast<std::size_t>(img.width) * img.height;
  img.pixels.resize(count);
  if (maxval < 256) {
    std::vector<unsigned char> raw(count);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count));
    if (!in) throw std::runtime_error(path + ": truncated PGM data");
    for (std::size_t i = 0; i < count; ++i) img.pixels[i] = raw[i];
  } else {
    std::vector<unsigned char> raw(count * 2);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count * 2));
    if (!in) throw std::runtime_error(path + ": truncated PGM data");
    for (std::size_t i = 0; i < count; ++i) {
      img.pixels[i] = static_cast<std::uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1]);
    }
  }
  return img;
}

inline void write_pgm16(const std::string& path, const Image16& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "P5\n" << img.width << " " << img.height << "\n65535\n";
  std::vector<unsigned char> raw(img.pixels.size() * 2);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    raw[2 * i] = static_cast<unsigned char>(img.pixels[i] >> 8);
    raw[2 * i + 1] = static_cast<unsigned char>(img.pixels[i] & 0xff);
  }
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
  if (!out) throw std::runtime_error("short write: " + path);
}

inline Image16 read_png16(const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "rb");
  if (!fp) throw std::runtime_error("cannot open " + path);
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw std::runtime_error("libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw std::runtime_error(path + ": PNG decode error");
  }
  png_init_io(png, fp);
  png_read_info(png, info);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int color = png_get_color_type(png, info);
  if (color != PNG_COLOR_TYPE_GRAY) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw std::runtime_error(path + ": expected a grayscale PNG");
  }
  if (png_get_bit_depth(png, info) < 16) png_set_expand_16(png);
  png_read_update_info(png, info);

  Image16 img;
  img.width = static_cast<int>(width);
  img.height = static_cast<int>(height);
  img.pixels.resize(static_cast<std::size_t>(width) * height);
  std::vector<unsigned char> row(static_cast<std::size_t>(width) * 2);
  for (png_uint_32 v = 0; v < height; ++v) {
    png_read_row(png, row.data(), nullptr);
    for (png_uint_32 u = 0; u < width; ++u) {
      img.pixels[static_cast<std::size_t>(v) * width + u] =
          static_cast<std::uint16_t>((row[2 * u] << 8) | row[2 * u + 1]);
    }
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  std::fclose(fp);
  return img;
}

inline void write_png16(const std::string& path, const Image16& img) {
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw std::runtime_error("cannot write " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw std::runtime_error("libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw std::runtime_error(path + ": PNG encode error");
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
               static_cast<png_uint_32>(img.height), 16, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<unsigned char> row(static_cast<std::size_t>(img.width) * 2);
  for (int v = 0; v < img.height; ++v) {
    for (int u = 0; u < img.width; ++u) {
      const std::uint16_t px = img.at(v, u);
      row[2 * u] = static_cast<unsigned char>(px >> 8);
      row[2 * u + 1] = static_cast<unsigned char>(px & 0xff);
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

/// Reads a 16-bit PGM or PNG, dispatching on the file's magic bytes.
inline Image16 read_image16(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw std::runtime_error("cannot open " + path);
  char magic[2] = {0, 0};
  probe.read(magic, 2);
  probe.close();
  if (magic[0] == 'P' && magic[1] == '5') return read_pgm16(path);
  if (static_cast<unsigned char>(magic[0]) == 0x89 && magic[1] == 'P') {
    return read_png16(path);
  }
  throw std::runtime_error(path + ": unrecognised image format (want PGM P5 or PNG)");
}

/// Writes PNG when the extension is .png, PGM otherwise.
inline void write_image16(const std::string& path, const Image16& img) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".png") == 0) {
    write_png16(path, img);
  } else {
    write_pgm16(path, img);
  }
}

/// Millimeter file values to meters; 0 stays the invalid marker.
inline DepthImage depth_from_mm(const Image16& img) {
  DepthImage depth;
  depth.width = img.width;
  depth.height = img.height;
  depth.depth_m.resize(img.pixels.size());
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    depth.depth_m[i] = img.pixels[i] / 1000.0;
  }
  return depth;
}

/// Meters to millimeter file values, rounded to the nearest integer and
/// clamped to the 16-bit range.
inline Image16 depth_to_mm(const DepthImage& depth) {
  Image16 img;
  img.width = depth.width;
  img.height = depth.height;
  img.pixels.resize(depth.depth_m.size());
  for (std::size_t i = 0; i < depth.depth_m.size(); ++i) {
    const double d = depth.depth_m[i];
    if (!is_valid_depth(d)) {
      img.pixels[i] = 0;
      continue;
    }
    const double mm = std::floor(d * 1000.0 + 0.5);
    img.pixels[i] = static_cast<std::uint16_t>(std::min(65535.0, std::max(0.0, mm)));
  }
  return img;
}

}  // namespace planedet

#endif  // PLANEDET_IMAGE_IO_HPP
