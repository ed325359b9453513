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

#ifndef JPPF_LABEL_MAP_HPP_
#define JPPF_LABEL_MAP_HPP_

#include <cstdint>
#include <vector>

namespace jppf {

/// Reserved semantic id for "no prediction".
inline constexpr std::uint16_t kVoidId = 0;

/// Per-pixel (semantic id, part id, instance id) triples. Semantic id 0 is
/// void; stuff and void pixels carry instance id 0.
struct LabelMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> semantic;
  std::vector<std::uint16_t> part;
  std::vector<std::uint16_t> instance;

  LabelMap() = default;
  LabelMap(int w, int h)
      : width(w),
        height(h),
        semantic(static_cast<std::size_t>(w) * h, kVoidId),
        part(static_cast<std::size_t>(w) * h, 0),
        instance(static_cast<std::size_t>(w) * h, 0) {}

  std::size_t pixels() const { return semantic.size(); }

  void set(std::size_t p, std::uint16_t s, std::uint16_t pt,
           std::uint16_t id) {
    semantic[p] = s;
    part[p] = pt;
    instance[p] = id;
  }

  void set_void(std::size_t p) { set(p, kVoidId, 0, 0); }

  bool operator==(const LabelMap&) const = default;
};

/// Hard part segmentation: per pixel, a part channel id (0 = background).
struct PartSegMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> ids;

  PartSegMap() = default;
  PartSegMap(int w, int h)
      : width(w), height(h), ids(static_cast<std::size_t>(w) * h, 0) {}

  bool operator==(const PartSegMap&) const = default;
};

}  // namespace jppf

#endif  // JPPF_LABEL_MAP_HPP_
