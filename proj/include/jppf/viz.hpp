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

#ifndef JPPF_VIZ_HPP_
#define JPPF_VIZ_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "jppf/label_map.hpp"

namespace jppf {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  bool operator==(const Rgb&) const = default;
};

/// Deterministic color for a (semantic, part) pair: the pair is hashed
/// (SplitMix64 scramble) into HSV with hue over the full circle and bounded
/// saturation/value. Void maps to black.
Rgb color_for(std::uint16_t semantic_id, std::uint16_t part_id);

/// Renders a label map: per-pixel (s, p) color, instance boundaries as 1-px
/// white outlines (pixels with a 4-neighbor of a different instance id).
std::vector<Rgb> render_label_map(const LabelMap& map);

/// Minimal RGB8 PNG writer (deflate via zlib).
void write_png(const std::string& path, const std::vector<Rgb>& pixels,
               int width, int height);

}  // namespace jppf

#endif  // JPPF_VIZ_HPP_
