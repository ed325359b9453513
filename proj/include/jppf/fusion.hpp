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

#ifndef JPPF_FUSION_HPP_
#define JPPF_FUSION_HPP_

#include <cstdint>
#include <vector>

#include "jppf/catalog.hpp"
#include "jppf/detection.hpp"
#include "jppf/label_map.hpp"
#include "jppf/tensor.hpp"

namespace jppf {

/// Knobs of the fusion pipeline. The defaults are the conventional values;
/// min_stuff defaults to the 1024x2048 reference threshold and should be
/// rescaled with default_min_stuff() for other resolutions.
struct FusionConfig {
  float confidence_threshold = 0.5f;
  float overlap_threshold = 0.5f;
  /// Stuff regions smaller than this many pixels become void.
  int min_stuff = 2048;
  /// Softmax-normalize the semantic and part heads before fusing. Instance
  /// mask logits are always used raw.
  bool normalize_heads = true;
};

/// The 2048-pixel reference threshold at 1024x2048, scaled proportionally to
/// the image area.
int default_min_stuff(int height, int width);

/// One fused channel's meaning: the (semantic, part, instance) triple a pixel
/// receives if this channel wins the canvas argmax. Stuff channels carry
/// part 0 and instance 0.
struct LegendEntry {
  std::uint16_t semantic_id = 0;
  std::uint16_t part_id = 0;
  std::uint16_t instance_id = 0;

  bool is_thing() const { return instance_id != 0; }
  bool operator==(const LegendEntry&) const = default;
};

/// Fused per-candidate scores with the channel -> (s, p, id) legend.
struct FusedLogitStack {
  Tensor logits;  // [K, H, W]
  std::vector<LegendEntry> legend;
};

/// The three box-masked logit sets built for one detection, all [P, H, W].
struct MaskedLogits {
  Tensor semantic;  // MLS: the detection's class channel, replicated
  Tensor instance;  // MLI: mask logits pasted at the box, replicated
  Tensor part;      // MLP: the class's part channels (or background)
};

/// Elementwise fusion of a set of equally-shaped logit tensors:
///   FL = (sum of sigmoids) * (sum of logits).
/// Both sums are evaluated in ascending value order per element, which makes
/// the result bit-exactly invariant to the order of the input list.
Tensor fuse_masked_logits(const std::vector<Tensor>& logit_sets);

/// Builds MLS / MLI / MLP for one filtered detection. `sem` and `parts` must
/// already be normalized when the config asks for normalization.
MaskedLogits build_masked_logits(const Detection& det, const Tensor& sem,
                                 const Tensor& parts,
                                 const ClassCatalog& catalog);

/// Fuses one detection's masked logit sets into its per-part candidate
/// channels, legend (class, part, instance id).
FusedLogitStack fuse_instance(const Detection& det, const Tensor& sem,
                              const Tensor& parts,
                              const ClassCatalog& catalog);

/// Fuses every stuff channel of the semantic head with the background channel
/// of the part head (two-element fusion, no box masking). Catalogs without
/// stuff classes yield an empty stack.
FusedLogitStack fuse_stuff(const Tensor& sem, const Tensor& parts,
                           const ClassCatalog& catalog);

/// Canvas assembly: argmax over the concatenated candidate channels
/// (instances first, then stuff); thing winners stamp their legend triple,
/// stuff winners receive the semantic head's stuff argmax; 4-connected stuff
/// regions below min_stuff become void.
LabelMap assemble_canvas(const std::vector<FusedLogitStack>& instance_stacks,
                         const FusedLogitStack& stuff_stack, const Tensor& sem,
                         const ClassCatalog& catalog,
                         const FusionConfig& config);

/// The full joint fusion pipeline: normalize heads (if configured), filter
/// detections, fuse each instance and the stuff channels, assemble the
/// canvas. Deterministic for fixed inputs; `threads` only splits independent
/// per-pixel work and never changes the result.
LabelMap jppf(const Tensor& sem_logits, const Tensor& part_logits,
              const DetectionSet& dets, const ClassCatalog& catalog,
              const FusionConfig& config, int threads = 1);

/// Two-way specialization without a part head: instances fuse {MLS, MLI},
/// stuff channels pass through from the semantic head. The output part plane
/// is 0 everywhere.
LabelMap panoptic_fuse_two(const Tensor& sem_logits, const DetectionSet& dets,
                           const ClassCatalog& catalog,
                           const FusionConfig& config, int threads = 1);

}  // namespace jppf

#endif  // JPPF_FUSION_HPP_
