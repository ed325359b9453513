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

#ifndef JPPF_DETECTION_HPP_
#define JPPF_DETECTION_HPP_

#include <string>
#include <vector>

#include "jppf/tensor.hpp"

namespace jppf {

struct FusionConfig;

/// One instance proposal from the instance head. Mask logits are raw
/// (pre-sigmoid) and aligned to the bounding box: dims [1, box_h, box_w].
struct Detection {
  int class_id = 0;
  float score = 0.0f;
  BBox box;
  Tensor mask_logits;
  /// Assigned by filter_detections (1-based, in kept order); 0 before.
  int instance_id = 0;
};

using DetectionSet = std::vector<Detection>;

/// Throws ShapeError if mask dims do not match the box or the score is out
/// of [0,1]. Class kind is checked later, against the catalog, by fusion.
void require_valid(const Detection& det);

/// Pre-filtering before fusion: drops detections below the confidence
/// threshold, sorts the rest by descending score (stable), then suppresses
/// greedily: a detection is dropped when the overlap of its binarized mask
/// (logit > 0) with the union of already-kept masks, divided by its own mask
/// area, exceeds the overlap threshold. Detections with empty masks are
/// dropped. Survivors get instance ids 1..K in kept order.
DetectionSet filter_detections(const DetectionSet& dets,
                               const FusionConfig& config);

// Detection file: header "JPPF-DETS v1", then one record per detection:
// "class_id;score;x0;y0;x1;y1;mask_tensor_path". Mask tensors are stored as
// separate container files; relative paths are resolved against the
// detection file's directory. '#' starts a comment.
void save_detections(const std::string& path, const DetectionSet& dets);
DetectionSet load_detections(const std::string& path);

}  // namespace jppf

#endif  // JPPF_DETECTION_HPP_
