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

#ifndef JPPF_METRICS_HPP_
#define JPPF_METRICS_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "jppf/catalog.hpp"
#include "jppf/detection.hpp"
#include "jppf/label_map.hpp"

namespace jppf {

// All metric accumulation is done in double precision; label maps and masks
// stay integral. Ground-truth void (semantic id 0) is the only exclusion
// mechanism: void pixels never count against a prediction.

struct MiouResult {
  std::vector<double> per_class;  // index = class id, 0 unused
  std::vector<bool> present;      // class appears in gt or pred
  double mean = 0.0;
};

/// Confusion-matrix IoU over class-id maps (0 = void). Ground-truth void
/// pixels are excluded entirely; classes absent from both maps are excluded
/// from the mean.
MiouResult miou(const std::vector<std::uint16_t>& pred,
                const std::vector<std::uint16_t>& gt, int num_classes);

struct ClassPq {
  int class_id = 0;
  bool partitionable = false;
  int tp = 0;
  int fp = 0;
  int fn = 0;
  double iou_sum = 0.0;   // segment IoUs of matched pairs
  double part_sum = 0.0;  // PartPQ contributions of matched pairs
  double pq = 0.0;
  double sq = 0.0;
  double rq = 0.0;
  double part_pq = 0.0;
  bool included = false;  // tp + fp + fn > 0
};

struct PqResult {
  double pq = 0.0;
  double sq = 0.0;
  double rq = 0.0;
  double part_pq_all = 0.0;
  double part_pq_p = 0.0;   // partitionable classes only
  double part_pq_np = 0.0;  // the rest
  std::vector<ClassPq> per_class;
};

/// Panoptic and part-panoptic quality. Segments are (s, id) groups for
/// things and per-class pixel sets for stuff; pairs match when their IoU
/// (with gt-void removed from the denominator) exceeds 0.5. For matched
/// segments of partitionable classes the TP contribution is the mean
/// part-level IoU over the class's part channels inside the union of the
/// matched pair (parts absent from both sides excluded); all other classes
/// contribute the plain segment IoU.
PqResult pq_metrics(const LabelMap& pred, const LabelMap& gt,
                    const ClassCatalog& catalog);

struct PqSummary {
  double pq = 0.0;
  double sq = 0.0;
  double rq = 0.0;
};

struct PartPqSummary {
  double all = 0.0;
  double partitionable = 0.0;
  double non_partitionable = 0.0;
};

/// Convenience views over pq_metrics for callers that want one metric only.
PqSummary pq(const LabelMap& pred, const LabelMap& gt,
             const ClassCatalog& catalog);
PartPqSummary part_pq(const LabelMap& pred, const LabelMap& gt,
                      const ClassCatalog& catalog);

/// Fraction of non-void pixels.
double density(const LabelMap& pred);

/// A ground-truth instance as a full-image binary mask.
struct InstanceMask {
  int class_id = 0;
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> mask;
  std::size_t area = 0;
};

/// Collects the thing instances of a label map as binary masks.
std::vector<InstanceMask> extract_instances(const LabelMap& map,
                                            const ClassCatalog& catalog);

struct ApResult {
  std::vector<double> per_class;  // index = class id; classes w/o gt = -1
  double mean = 0.0;
};

/// Average precision of mask detections at one mask-IoU threshold:
/// score-ranked greedy matching, all-point interpolated PR area. Classes
/// with no ground-truth instances are excluded from the mean.
ApResult mask_ap(const DetectionSet& dets,
                 const std::vector<InstanceMask>& gt_instances,
                 double iou_threshold, int num_classes);

/// Mean AP over mask-IoU thresholds {0.50, 0.55, ..., 0.95}.
double mask_mean_ap(const DetectionSet& dets,
                    const std::vector<InstanceMask>& gt_instances,
                    int num_classes);

/// The full evaluation bundle mirroring the reporting columns:
/// semantic mIoU, instance AP (optional), part mIoU, PartPQ All/P/NP,
/// density, plus PQ/SQ/RQ and the per-class table.
struct EvalReport {
  double sem_miou = 0.0;
  double part_miou = 0.0;
  std::optional<double> inst_ap;
  double pq = 0.0;
  double sq = 0.0;
  double rq = 0.0;
  double part_pq_all = 0.0;
  double part_pq_p = 0.0;
  double part_pq_np = 0.0;
  double density_value = 0.0;
  std::vector<ClassPq> per_class;
};

EvalReport evaluate(const LabelMap& pred, const LabelMap& gt,
                    const ClassCatalog& catalog,
                    const DetectionSet* dets = nullptr);

/// Human-readable table.
void write_report_text(std::ostream& sink, const EvalReport& report,
                       const ClassCatalog& catalog);
/// Machine-readable "key = value" lines.
void write_report_kv(std::ostream& sink, const EvalReport& report);

}  // namespace jppf

#endif  // JPPF_METRICS_HPP_
