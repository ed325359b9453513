// Copyright 2026 The JPPF Authors.
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

#include "jppf/viz.hpp"

#include <zlib.h>

#include <cmath>
#include <cstring>
#include <fstream>

#include "jppf/errors.hpp"

namespace jppf {

namespace {

std::uint64_t scramble(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Rgb hsv_to_rgb(double hue, double sat, double val) {
  const double c = val * sat;
  const double hp = hue / 60.0;
  const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hp)) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  const double m = val - c;
  auto to8 = [&](double v) {
    return static_cast<std::uint8_t>(std::lround((v + m) * 255.0));
  };
  return {to8(r), to8(g), to8(b)};
}

}  // namespace

Rgb color_for(std::uint16_t semantic_id, std::uint16_t part_id) {
  if (semantic_id == kVoidId) {
    return {0, 0, 0};
  }
  const std::uint64_t hash =
      scramble((static_cast<std::uint64_t>(semantic_id) << 16) | part_id);
  const double hue = static_cast<double>(hash % 360);
  const double sat = 0.55 + 0.35 * ((hash >> 16) % 256) / 255.0;
  const double val = 0.65 + 0.30 * ((hash >> 32) % 256) / 255.0;
  return hsv_to_rgb(hue, sat, val);
}

std::vector<Rgb> render_label_map(const LabelMap& map) {
  std::vector<Rgb> out(map.pixels());
  const int w = map.width;
  const int h = map.height;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t px = static_cast<std::size_t>(y) * w + x;
      const std::uint16_t id = map.instance[px];
      bool boundary = false;
      if (id != 0) {
        const int nx[4] = {x - 1, x + 1, x, x};
        const int ny[4] = {y, y, y - 1, y + 1};
        for (int n = 0; n < 4 && !boundary; ++n) {
          if (nx[n] < 0 || nx[n] >= w || ny[n] < 0 || ny[n] >= h) {
            continue;
          }
          boundary =
              map.instance[static_cast<std::size_t>(ny[n]) * w + nx[n]] != id;
        }
      }
      out[px] = boundary ? Rgb{255, 255, 255}
                         : color_for(map.semantic[px], map.part[px]);
    }
  }
  return out;
}

void write_png(const std::string& path, const std::vector<Rgb>& pixels,
               int width, int height) {
  if (pixels.size() != static_cast<std::size_t>(width) * height) {
    throw ShapeError("pixel buffer does not match the image extents");
  }

  // Raw scanlines with filter byte 0.
  std::vector<unsigned char> raw;
  raw.reserve(static_cast<std::size_t>(height) * (1 + 3 * width));
  for (int y = 0; y < height; ++y) {
    raw.push_back(0);
    for (int x = 0; x < width; ++x) {
      const Rgb& p = pixels[static_cast<std::size_t>(y) * width + x];
      raw.push_back(p.r);
      raw.push_back(p.g);
      raw.push_back(p.b);
    }
  }
  uLongf compressed_size = compressBound(static_cast<uLong>(raw.size()));
  std::vector<unsigned char> compressed(compressed_size);
  if (compress2(compressed.data(), &compressed_size, raw.data(),
                static_cast<uLong>(raw.size()), 6) != Z_OK) {
    throw IoError("deflate failed while encoding PNG");
  }
  compressed.resize(compressed_size);

  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw IoError("cannot open for writing: " + path);
  }
  auto put_u32 = [&](std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                                static_cast<unsigned char>(v >> 16),
                                static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v)};
    f.write(reinterpret_cast<const char*>(b), 4);
  };
  auto put_chunk = [&](const char type[5], const unsigned char* data,
                       std::size_t size) {
    put_u32(static_cast<std::uint32_t>(size));
    f.write(type, 4);
    if (size) {
      f.write(reinterpret_cast<const char*>(data), size);
    }
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(type), 4);
    if (size) {
      crc = crc32(crc, data, static_cast<uInt>(size));
    }
    put_u32(static_cast<std::uint32_t>(crc));
  };

  static const unsigned char signature[8] = {0x89, 'P', 'N', 'G',
                                             0x0D, 0x0A, 0x1A, 0x0A};
  f.write(reinterpret_cast<const char*>(signature), 8);

  unsigned char ihdr[13];
  ihdr[0] = static_cast<unsigned char>(width >> 24);
  ihdr[1] = static_cast<unsigned char>(width >> 16);
  ihdr[2] = static_cast<unsigned char>(width >> 8);
  ihdr[3] = static_cast<unsigned char>(width);
  ihdr[4] = static_cast<unsigned char>(height >> 24);
  ihdr[5] = static_cast<unsigned char>(height >> 16);
  ihdr[6] = static_cast<unsigned char>(height >> 8);
  ihdr[7] = static_cast<unsigned char>(height);
  ihdr[8] = 8;   // bit depth
  ihdr[9] = 2;   // color type: truecolor RGB
  ihdr[10] = 0;  // compression
  ihdr[11] = 0;  // filter
  ihdr[12] = 0;  // interlace
  put_chunk("IHDR", ihdr, sizeof(ihdr));
  put_chunk("IDAT", compressed.data(), compressed.size());
  put_chunk("IEND", nullptr, 0);
  if (!f) {
    throw IoError("failed to write PNG: " + path);
  }
}

}  // namespace jppf
