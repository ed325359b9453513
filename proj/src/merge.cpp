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

#include "jppf/merge.hpp"

#include <algorithm>
#include <vector>

#include "jppf/errors.hpp"
#include "jppf/parallel.hpp"

namespace jppf {

PartSegMap part_map_from_logits(const Tensor& part_logits) {
  part_logits.require_rank(3, "part logits");
  PartSegMap map(static_cast<int>(part_logits.width()),
                 static_cast<int>(part_logits.height()));
  const auto winners = argmax_channels(part_logits);
  for (std::size_t i = 0; i < winners.size(); ++i) {
    map.ids[i] = static_cast<std::uint16_t>(winners[i]);
  }
  return map;
}

LabelMap top_down_merge(const LabelMap& panoptic, const PartSegMap& parts,
                        const ClassCatalog& catalog, int threads) {
  if (panoptic.width != parts.width || panoptic.height != parts.height) {
    throw ShapeError("panoptic map and part map disagree on extents");
  }

  // class id -> bitmap over part channels, empty row for non-partitionable.
  int max_id = 0;
  for (const auto& c : catalog.classes()) {
    max_id = std::max(max_id, c.class_id);
  }
  const int n_p = catalog.n_part_channels();
  std::vector<char> partitionable(max_id + 1, 0);
  std::vector<char> owns(static_cast<std::size_t>(max_id + 1) * n_p, 0);
  for (const auto& c : catalog.classes()) {
    if (!c.partitionable()) {
      continue;
    }
    partitionable[c.class_id] = 1;
    for (int p : c.part_channel_ids) {
      if (p >= 0 && p < n_p) {
        owns[static_cast<std::size_t>(c.class_id) * n_p + p] = 1;
      }
    }
  }

  LabelMap out(panoptic.width, panoptic.height);
  parallel_for(panoptic.pixels(), threads,
               [&](std::size_t begin, std::size_t end) {
                 for (std::size_t px = begin; px < end; ++px) {
                   const std::uint16_t s = panoptic.semantic[px];
                   if (s == kVoidId || s > max_id || !partitionable[s]) {
                     out.set(px, s, 0, s == kVoidId ? 0 : panoptic.instance[px]);
                     continue;
                   }
                   const std::uint16_t p = parts.ids[px];
                   if (p < n_p && owns[static_cast<std::size_t>(s) * n_p + p]) {
                     out.set(px, s, p, panoptic.instance[px]);
                   } else {
                     out.set_void(px);  // conflicting part prediction
                   }
                 }
               });
  return out;
}

}  // namespace jppf
