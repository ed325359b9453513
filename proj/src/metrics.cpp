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

#include "jppf/metrics.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include "jppf/errors.hpp"

namespace jppf {

MiouResult miou(const std::vector<std::uint16_t>& pred,
                const std::vector<std::uint16_t>& gt, int num_classes) {
  if (pred.size() != gt.size()) {
    throw ShapeError("miou: prediction and ground truth differ in size");
  }
  const int c_n = num_classes + 1;  // row/col 0 = void or out-of-range
  std::vector<std::int64_t> confusion(static_cast<std::size_t>(c_n) * c_n, 0);
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const int g = gt[i];
    if (g == 0 || g > num_classes) {
      continue;  // gt void excluded
    }
    const int p = pred[i] <= num_classes ? pred[i] : 0;
    ++confusion[static_cast<std::size_t>(g) * c_n + p];
  }

  MiouResult result;
  result.per_class.assign(c_n, 0.0);
  result.present.assign(c_n, false);
  double sum = 0.0;
  int included = 0;
  for (int c = 1; c <= num_classes; ++c) {
    std::int64_t gt_count = 0;
    std::int64_t pred_count = 0;
    for (int j = 0; j <= num_classes; ++j) {
      gt_count += confusion[static_cast<std::size_t>(c) * c_n + j];
      pred_count += confusion[static_cast<std::size_t>(j) * c_n + c];
    }
    const std::int64_t inter = confusion[static_cast<std::size_t>(c) * c_n + c];
    const std::int64_t uni = gt_count + pred_count - inter;
    if (uni == 0) {
      continue;  // absent from both gt and (gt-masked) prediction
    }
    result.present[c] = true;
    result.per_class[c] = static_cast<double>(inter) / uni;
    sum += result.per_class[c];
    ++included;
  }
  result.mean = included ? sum / included : 0.0;
  return result;
}

namespace {

// Segment extraction for PQ: things group by (s, id); every stuff class
// forms a single segment per image. Pixel indices are kept for the part-IoU
// pass.
struct Segment {
  int class_id = 0;
  std::vector<std::size_t> pixels;
};

struct SegmentIndex {
  std::vector<Segment> segments;
  std::vector<std::int32_t> id_at;  // per pixel, segment index or -1
};

SegmentIndex extract_segments(const LabelMap& map,
                              const ClassCatalog& catalog) {
  SegmentIndex index;
  index.id_at.assign(map.pixels(), -1);
  std::unordered_map<std::uint32_t, std::int32_t> by_key;
  for (std::size_t px = 0; px < map.pixels(); ++px) {
    const std::uint16_t s = map.semantic[px];
    if (s == kVoidId) {
      continue;
    }
    std::uint16_t id = map.instance[px];
    if (catalog.has_class(s) &&
        catalog.class_def(s).kind == ClassKind::kStuff) {
      id = 0;  // stuff: one segment per class
    }
    const std::uint32_t key = (static_cast<std::uint32_t>(s) << 16) | id;
    auto [it, inserted] = by_key.try_emplace(
        key, static_cast<std::int32_t>(index.segments.size()));
    if (inserted) {
      index.segments.push_back({s, {}});
    }
    index.segments[it->second].pixels.push_back(px);
    index.id_at[px] = it->second;
  }
  return index;
}

double part_iou_contribution(const Segment& pred_seg, const Segment& gt_seg,
                             double segment_iou, const LabelMap& pred,
                             const LabelMap& gt,
                             const std::vector<int>& channels,
                             const SegmentIndex& pred_index,
                             std::int32_t pred_id, int n_p) {
  // Part-level IoU inside the union of the matched pair. Union pixels are
  // walked as (pred segment) + (gt segment minus pred segment).
  std::vector<std::int64_t> inter(n_p, 0);
  std::vector<std::int64_t> uni(n_p, 0);
  auto tally = [&](std::size_t px) {
    const int pp = pred.part[px];
    const int gp = gt.part[px];
    if (pp == gp) {
      if (pp < n_p) {
        ++inter[pp];
        ++uni[pp];
      }
      return;
    }
    if (pp < n_p) {
      ++uni[pp];
    }
    if (gp < n_p) {
      ++uni[gp];
    }
  };
  for (std::size_t px : pred_seg.pixels) {
    tally(px);
  }
  for (std::size_t px : gt_seg.pixels) {
    if (pred_index.id_at[px] != pred_id) {
      tally(px);
    }
  }
  double sum = 0.0;
  int present = 0;
  for (int p : channels) {
    if (p < 0 || p >= n_p || uni[p] == 0) {
      continue;  // part absent from both sides
    }
    sum += static_cast<double>(inter[p]) / uni[p];
    ++present;
  }
  // No part of the class appears on either side; fall back to the plain
  // segment IoU rather than averaging over nothing.
  return present ? sum / present : segment_iou;
}

}  // namespace

PqResult pq_metrics(const LabelMap& pred, const LabelMap& gt,
                    const ClassCatalog& catalog) {
  if (pred.width != gt.width || pred.height != gt.height) {
    throw ShapeError("pq: prediction and ground truth differ in extents");
  }

  const SegmentIndex pred_index = extract_segments(pred, catalog);
  const SegmentIndex gt_index = extract_segments(gt, catalog);

  // Pairwise intersections and, per pred segment, overlap with gt void.
  std::unordered_map<std::uint64_t, std::int64_t> inter;
  std::vector<std::int64_t> void_overlap(pred_index.segments.size(), 0);
  for (std::size_t px = 0; px < pred.pixels(); ++px) {
    const std::int32_t p = pred_index.id_at[px];
    const std::int32_t g = gt_index.id_at[px];
    if (p >= 0 && gt.semantic[px] == kVoidId) {
      ++void_overlap[p];
    }
    if (p >= 0 && g >= 0) {
      ++inter[(static_cast<std::uint64_t>(p) << 32) |
              static_cast<std::uint32_t>(g)];
    }
  }

  std::vector<char> pred_matched(pred_index.segments.size(), 0);
  std::vector<char> gt_matched(gt_index.segments.size(), 0);

  std::map<int, ClassPq> per_class;
  auto class_entry = [&](int class_id) -> ClassPq& {
    auto [it, inserted] = per_class.try_emplace(class_id);
    if (inserted) {
      it->second.class_id = class_id;
      it->second.partitionable = catalog.has_class(class_id) &&
                                 catalog.class_def(class_id).partitionable();
    }
    return it->second;
  };

  // Matching: IoU > 0.5 pairs are unique, so a single pass suffices.
  for (const auto& [key, overlap] : inter) {
    const std::int32_t p = static_cast<std::int32_t>(key >> 32);
    const std::int32_t g = static_cast<std::int32_t>(key & 0xFFFFFFFF);
    const Segment& pseg = pred_index.segments[p];
    const Segment& gseg = gt_index.segments[g];
    if (pseg.class_id != gseg.class_id) {
      continue;
    }
    const double union_area =
        static_cast<double>(pseg.pixels.size()) + gseg.pixels.size() -
        overlap - void_overlap[p];
    const double iou = union_area > 0 ? overlap / union_area : 0.0;
    if (iou <= 0.5) {
      continue;
    }
    pred_matched[p] = 1;
    gt_matched[g] = 1;
    ClassPq& entry = class_entry(pseg.class_id);
    entry.tp += 1;
    entry.iou_sum += iou;
    if (entry.partitionable) {
      entry.part_sum += part_iou_contribution(
          pseg, gseg, iou, pred, gt,
          catalog.class_def(pseg.class_id).part_channel_ids, pred_index, p,
          catalog.n_part_channels());
    } else {
      entry.part_sum += iou;
    }
  }

  for (std::size_t g = 0; g < gt_index.segments.size(); ++g) {
    if (!gt_matched[g]) {
      class_entry(gt_index.segments[g].class_id).fn += 1;
    }
  }
  for (std::size_t p = 0; p < pred_index.segments.size(); ++p) {
    if (pred_matched[p]) {
      continue;
    }
    // Predictions mostly covering gt void are not penalized.
    const auto& seg = pred_index.segments[p];
    if (2 * void_overlap[p] > static_cast<std::int64_t>(seg.pixels.size())) {
      continue;
    }
    class_entry(seg.class_id).fp += 1;
  }

  PqResult result;
  double pq_sum = 0.0, sq_sum = 0.0, rq_sum = 0.0;
  double part_all = 0.0, part_p = 0.0, part_np = 0.0;
  int n_all = 0, n_p = 0, n_np = 0;
  for (auto& [class_id, entry] : per_class) {
    const double denom = entry.tp + 0.5 * entry.fp + 0.5 * entry.fn;
    entry.included = denom > 0;
    if (!entry.included) {
      continue;
    }
    entry.pq = entry.iou_sum / denom;
    entry.sq = entry.tp ? entry.iou_sum / entry.tp : 0.0;
    entry.rq = entry.tp / denom;
    entry.part_pq = entry.part_sum / denom;
    pq_sum += entry.pq;
    sq_sum += entry.sq;
    rq_sum += entry.rq;
    part_all += entry.part_pq;
    ++n_all;
    if (entry.partitionable) {
      part_p += entry.part_pq;
      ++n_p;
    } else {
      part_np += entry.part_pq;
      ++n_np;
    }
  }
  result.pq = n_all ? pq_sum / n_all : 0.0;
  result.sq = n_all ? sq_sum / n_all : 0.0;
  result.rq = n_all ? rq_sum / n_all : 0.0;
  result.part_pq_all = n_all ? part_all / n_all : 0.0;
  result.part_pq_p = n_p ? part_p / n_p : 0.0;
  result.part_pq_np = n_np ? part_np / n_np : 0.0;
  for (auto& [class_id, entry] : per_class) {
    result.per_class.push_back(entry);
  }
  return result;
}

PqSummary pq(const LabelMap& pred, const LabelMap& gt,
             const ClassCatalog& catalog) {
  const PqResult r = pq_metrics(pred, gt, catalog);
  return {r.pq, r.sq, r.rq};
}

PartPqSummary part_pq(const LabelMap& pred, const LabelMap& gt,
                      const ClassCatalog& catalog) {
  const PqResult r = pq_metrics(pred, gt, catalog);
  return {r.part_pq_all, r.part_pq_p, r.part_pq_np};
}

double density(const LabelMap& pred) {
  if (pred.pixels() == 0) {
    return 0.0;
  }
  std::size_t non_void = 0;
  for (std::uint16_t s : pred.semantic) {
    non_void += (s != kVoidId);
  }
  return static_cast<double>(non_void) / pred.pixels();
}

std::vector<InstanceMask> extract_instances(const LabelMap& map,
                                            const ClassCatalog& catalog) {
  std::map<std::uint32_t, std::size_t> by_key;
  std::vector<InstanceMask> out;
  for (std::size_t px = 0; px < map.pixels(); ++px) {
    const std::uint16_t s = map.semantic[px];
    const std::uint16_t id = map.instance[px];
    if (s == kVoidId || id == 0 || !catalog.has_class(s) ||
        catalog.class_def(s).kind != ClassKind::kThing) {
      continue;
    }
    const std::uint32_t key = (static_cast<std::uint32_t>(s) << 16) | id;
    auto it = by_key.find(key);
    if (it == by_key.end()) {
      it = by_key.emplace(key, out.size()).first;
      InstanceMask m;
      m.class_id = s;
      m.width = map.width;
      m.height = map.height;
      m.mask.assign(map.pixels(), 0);
      out.push_back(std::move(m));
    }
    out[it->second].mask[px] = 1;
    out[it->second].area += 1;
  }
  return out;
}

namespace {

double detection_iou(const Detection& det, const InstanceMask& gt) {
  const int bw = det.box.width();
  const float* logits = det.mask_logits.channel(0);
  std::int64_t det_area = 0;
  std::int64_t inter = 0;
  for (int y = det.box.y0; y < det.box.y1; ++y) {
    for (int x = det.box.x0; x < det.box.x1; ++x) {
      if (logits[(y - det.box.y0) * bw + (x - det.box.x0)] > 0.0f) {
        ++det_area;
        inter += gt.mask[static_cast<std::size_t>(y) * gt.width + x];
      }
    }
  }
  const std::int64_t uni = det_area + static_cast<std::int64_t>(gt.area) - inter;
  return uni > 0 ? static_cast<double>(inter) / uni : 0.0;
}

}  // namespace

ApResult mask_ap(const DetectionSet& dets,
                 const std::vector<InstanceMask>& gt_instances,
                 double iou_threshold, int num_classes) {
  ApResult result;
  result.per_class.assign(num_classes + 1, -1.0);

  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].score > dets[b].score;
  });

  double sum = 0.0;
  int included = 0;
  for (int c = 1; c <= num_classes; ++c) {
    std::vector<std::size_t> gt_ids;
    for (std::size_t g = 0; g < gt_instances.size(); ++g) {
      if (gt_instances[g].class_id == c) {
        gt_ids.push_back(g);
      }
    }
    if (gt_ids.empty()) {
      continue;  // AP undefined without ground truth
    }

    std::vector<char> taken(gt_ids.size(), 0);
    std::vector<char> is_tp;
    for (std::size_t rank : order) {
      if (dets[rank].class_id != c) {
        continue;
      }
      double best_iou = 0.0;
      int best_g = -1;
      for (std::size_t j = 0; j < gt_ids.size(); ++j) {
        if (taken[j]) {
          continue;
        }
        const double iou = detection_iou(dets[rank], gt_instances[gt_ids[j]]);
        if (iou > best_iou) {
          best_iou = iou;
          best_g = static_cast<int>(j);
        }
      }
      if (best_g >= 0 && best_iou >= iou_threshold) {
        taken[best_g] = 1;
        is_tp.push_back(1);
      } else {
        is_tp.push_back(0);
      }
    }

    // All-point interpolated area under the precision-recall curve.
    const std::size_t n = is_tp.size();
    std::vector<double> precision(n), recall(n);
    int tp = 0;
    for (std::size_t i = 0; i < n; ++i) {
      tp += is_tp[i];
      precision[i] = static_cast<double>(tp) / (i + 1);
      recall[i] = static_cast<double>(tp) / gt_ids.size();
    }
    for (std::size_t i = n; i-- > 1;) {
      precision[i - 1] = std::max(precision[i - 1], precision[i]);
    }
    double ap = 0.0;
    double prev_recall = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      ap += (recall[i] - prev_recall) * precision[i];
      prev_recall = recall[i];
    }
    result.per_class[c] = ap;
    sum += ap;
    ++included;
  }
  result.mean = included ? sum / included : 0.0;
  return result;
}

double mask_mean_ap(const DetectionSet& dets,
                    const std::vector<InstanceMask>& gt_instances,
                    int num_classes) {
  double sum = 0.0;
  int count = 0;
  for (int t = 50; t <= 95; t += 5) {
    sum += mask_ap(dets, gt_instances, t / 100.0, num_classes).mean;
    ++count;
  }
  return sum / count;
}

EvalReport evaluate(const LabelMap& pred, const LabelMap& gt,
                    const ClassCatalog& catalog, const DetectionSet* dets) {
  if (pred.width != gt.width || pred.height != gt.height) {
    throw ShapeError("evaluate: prediction and ground truth differ in extents");
  }
  EvalReport report;
  int max_id = 0;
  for (const auto& c : catalog.classes()) {
    max_id = std::max(max_id, c.class_id);
  }
  report.sem_miou = miou(pred.semantic, gt.semantic, max_id).mean;
  report.part_miou =
      miou(pred.part, gt.part, catalog.n_part_channels() - 1).mean;

  const PqResult pq = pq_metrics(pred, gt, catalog);
  report.pq = pq.pq;
  report.sq = pq.sq;
  report.rq = pq.rq;
  report.part_pq_all = pq.part_pq_all;
  report.part_pq_p = pq.part_pq_p;
  report.part_pq_np = pq.part_pq_np;
  report.per_class = pq.per_class;
  report.density_value = density(pred);

  if (dets != nullptr) {
    report.inst_ap =
        mask_mean_ap(*dets, extract_instances(gt, catalog), max_id);
  }
  return report;
}

void write_report_text(std::ostream& sink, const EvalReport& report,
                       const ClassCatalog& catalog) {
  sink << std::fixed << std::setprecision(4);
  sink << "Sem. mIoU   " << report.sem_miou << "\n";
  if (report.inst_ap) {
    sink << "Inst. AP    " << *report.inst_ap << "\n";
  }
  sink << "Part mIoU   " << report.part_miou << "\n";
  sink << "PQ          " << report.pq << "  (SQ " << report.sq << ", RQ "
       << report.rq << ")\n";
  sink << "PartPQ All  " << report.part_pq_all << "\n";
  sink << "PartPQ P    " << report.part_pq_p << "\n";
  sink << "PartPQ NP   " << report.part_pq_np << "\n";
  sink << "Density     " << report.density_value << "\n";
  sink << "\nper-class (id name tp fp fn pq sq rq partpq):\n";
  for (const auto& entry : report.per_class) {
    if (!entry.included) {
      continue;
    }
    const std::string name = catalog.has_class(entry.class_id)
                                 ? catalog.class_def(entry.class_id).name
                                 : "?";
    sink << "  " << std::setw(3) << entry.class_id << " " << std::setw(14)
         << name << " " << std::setw(3) << entry.tp << " " << std::setw(3)
         << entry.fp << " " << std::setw(3) << entry.fn << "  " << entry.pq
         << " " << entry.sq << " " << entry.rq << " " << entry.part_pq
         << "\n";
  }
}

void write_report_kv(std::ostream& sink, const EvalReport& report) {
  sink << std::setprecision(12);
  sink << "sem_miou = " << report.sem_miou << "\n";
  if (report.inst_ap) {
    sink << "inst_ap = " << *report.inst_ap << "\n";
  }
  sink << "part_miou = " << report.part_miou << "\n";
  sink << "pq = " << report.pq << "\n";
  sink << "sq = " << report.sq << "\n";
  sink << "rq = " << report.rq << "\n";
  sink << "part_pq_all = " << report.part_pq_all << "\n";
  sink << "part_pq_p = " << report.part_pq_p << "\n";
  sink << "part_pq_np = " << report.part_pq_np << "\n";
  sink << "density = " << report.density_value << "\n";
}

}  // namespace jppf
