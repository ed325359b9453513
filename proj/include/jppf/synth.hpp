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

#ifndef JPPF_SYNTH_HPP_
#define JPPF_SYNTH_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>

#include "jppf/catalog.hpp"
#include "jppf/detection.hpp"
#include "jppf/fusion.hpp"
#include "jppf/label_map.hpp"
#include "jppf/tensor.hpp"

namespace jppf {

/// SplitMix64 generator. The algorithm is pinned (and documented in the
/// README) so that identical seeds reproduce identical scenes across
/// implementations. uniform01 maps the top 53 bits to [0,1); normal draws
/// use the Box-Muller transform (cosine branch only).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi);
  double uniform01();
  double uniform(double lo, double hi);
  double normal(double sigma);

 private:
  std::uint64_t state_;
};

/// Generator knobs. Instances are axis-aligned rectangles or ellipses with
/// horizontal part bands, placed with disjoint bounding boxes over stuff
/// stripes. Head tensors carry a +4 margin on the true channel plus optional
/// Gaussian noise; detections get jittered boxes and uniform scores.
struct SceneConfig {
  int width = 64;
  int height = 64;
  int min_instances = 1;
  int max_instances = 4;
  std::string catalog = "cpp";
  double logit_noise_sigma = 0.0;
  double score_min = 0.6;
  double score_max = 0.95;
  int bbox_jitter = 0;
  std::uint64_t seed = 1;
};

struct Scene {
  LabelMap gt;
  Tensor sem_logits;
  Tensor part_logits;
  DetectionSet dets;
};

/// Deterministic per seed; throws GenerationError when the requested
/// instances cannot be placed.
Scene generate_scene(const SceneConfig& cfg);

/// The straight-line scalar re-implementation of the whole joint fusion
/// (normalization, pre-filtering, masking, fusion rule, canvas, small-stuff
/// filtering), with fully materialized intermediates and no shortcuts. It is
/// the equivalence reference for jppf and must stay independent of the
/// engine's code paths.
LabelMap naive_fusion_oracle(const Tensor& sem_logits,
                             const Tensor& part_logits,
                             const DetectionSet& dets,
                             const ClassCatalog& catalog,
                             const FusionConfig& config);

// SceneConfig sidecar: "key = value" lines.
void write_scene_config(std::ostream& sink, const SceneConfig& cfg);
SceneConfig read_scene_config(std::istream& source);

}  // namespace jppf

#endif  // JPPF_SYNTH_HPP_
