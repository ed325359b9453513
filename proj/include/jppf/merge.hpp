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

#ifndef JPPF_MERGE_HPP_
#define JPPF_MERGE_HPP_

#include "jppf/catalog.hpp"
#include "jppf/label_map.hpp"
#include "jppf/tensor.hpp"

namespace jppf {

/// Hard part prediction: per-pixel argmax over the raw part logits.
PartSegMap part_map_from_logits(const Tensor& part_logits);

/// Uni-directional merging of a finished panoptic map with a hard part
/// prediction. Per pixel: non-partitionable panoptic classes are copied
/// verbatim with part 0; partitionable classes keep (s, p, id) when the part
/// map's value belongs to the class, and become void when it does not
/// (background, or a part of a different class). Void stays void.
LabelMap top_down_merge(const LabelMap& panoptic, const PartSegMap& parts,
                        const ClassCatalog& catalog, int threads = 1);

}  // namespace jppf

#endif  // JPPF_MERGE_HPP_
