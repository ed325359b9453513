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

#include <doctest.h>

#include <cmath>
#include "jppf/errors.hpp"
#include <sstream>

#include "jppf/metrics.hpp"
#include "jppf/synth.hpp"

using namespace jppf;

namespace {

constexpr int kRoad = 1;
constexpr int kSidewalk = 2;
constexpr int kPerson = 12;
constexpr int kCar = 14;
constexpr int kTrain = 17;

Detection mask_detection(int class_id, float score, BBox box,
                         const LabelMap& gt, int instance_id) {
  Detection det;
  det.class_id = class_id;
  det.score = score;
  det.box = box;
  det.mask_logits = Tensor({1, static_cast<std::size_t>(box.height()),
                            static_cast<std::size_t>(box.width())});
  float* m = det.mask_logits.channel(0);
  for (int y = box.y0; y < box.y1; ++y) {
    for (int x = box.x0; x < box.x1; ++x) {
      const bool inside = gt.instance[y * gt.width + x] == instance_id;
      m[(y - box.y0) * box.width() + (x - box.x0)] = inside ? 4.0f : -4.0f;
    }
  }
  return det;
}

}  // namespace

TEST_CASE("miou") {
  SUBCASE("perfect prediction is 1.0") {
    std::vector<std::uint16_t> gt = {1, 1, 2, 2, 3, 3};
    CHECK(miou(gt, gt, 3).mean == doctest::Approx(1.0));
  }
  SUBCASE("half coverage gives IoU 0.5") {
    // class 1 on 10 gt pixels; prediction covers 5 of them and is class 2
    // (gt class 2) elsewhere, so nothing spurious is added.
    std::vector<std::uint16_t> gt(20, 1), pred(20, 1);
    for (int i = 10; i < 20; ++i) {
      gt[i] = 2;
      pred[i] = 2;
    }
    for (int i = 5; i < 10; ++i) {
      pred[i] = 2;  // half of class 1 mispredicted as class 2
    }
    const MiouResult r = miou(pred, gt, 3);
    CHECK(r.per_class[1] == doctest::Approx(0.5));
    CHECK(!r.present[3]);
    // class 2: inter 10, union 15
    CHECK(r.per_class[2] == doctest::Approx(10.0 / 15.0));
    CHECK(r.mean == doctest::Approx(0.5 * (0.5 + 10.0 / 15.0)));
  }
  SUBCASE("gt void pixels are excluded") {
    std::vector<std::uint16_t> gt = {0, 0, 1, 1};
    std::vector<std::uint16_t> pred = {2, 2, 1, 1};
    // the two void pixels predicted as class 2 do not create a class-2 entry
    const MiouResult r = miou(pred, gt, 2);
    CHECK(r.per_class[1] == doctest::Approx(1.0));
    CHECK(!r.present[2]);
    CHECK(r.mean == doctest::Approx(1.0));
  }
  SUBCASE("shape mismatch is rejected") {
    std::vector<std::uint16_t> a(4), b(5);
    CHECK_THROWS_AS(miou(a, b, 2), ShapeError);
  }
}

TEST_CASE("pq hand-computed cases") {
  const ClassCatalog catalog = preset_catalog("cpp");

  SUBCASE("perfect prediction") {
    LabelMap gt(8, 4);
    for (std::size_t px = 0; px < gt.pixels(); ++px) {
      gt.set(px, px < 16 ? kRoad : kSidewalk, 0, 0);
    }
    gt.set(0, kTrain, 0, 1);
    gt.set(1, kTrain, 0, 1);
    const PqResult r = pq_metrics(gt, gt, catalog);
    CHECK(r.pq == doctest::Approx(1.0));
    CHECK(r.sq == doctest::Approx(1.0));
    CHECK(r.rq == doctest::Approx(1.0));
  }

  SUBCASE("one TP at IoU 0.6 plus one FN") {
    // gt: instance A covers 10 px, instance B covers 5 px (class train).
    // pred: one segment of 6 px inside A -> IoU 6/10 = 0.6; B missed.
    LabelMap gt(20, 1), pred(20, 1);
    for (int x = 0; x < 20; ++x) {
      gt.set(x, kRoad, 0, 0);
      pred.set(x, kRoad, 0, 0);
    }
    for (int x = 0; x < 10; ++x) {
      gt.set(x, kTrain, 0, 1);
    }
    for (int x = 12; x < 17; ++x) {
      gt.set(x, kTrain, 0, 2);
    }
    for (int x = 0; x < 6; ++x) {
      pred.set(x, kTrain, 0, 9);  // ids need not match
    }
    const PqResult r = pq_metrics(pred, gt, catalog);
    const ClassPq* train = nullptr;
    for (const auto& entry : r.per_class) {
      if (entry.class_id == kTrain) {
        train = &entry;
      }
    }
    REQUIRE(train != nullptr);
    CHECK(train->tp == 1);
    CHECK(train->fn == 1);
    CHECK(train->fp == 0);
    CHECK(train->pq == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(train->sq == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(train->rq == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  }

  SUBCASE("pure false positive gives PQ 0") {
    LabelMap gt(8, 1), pred(8, 1);
    for (int x = 0; x < 8; ++x) {
      gt.set(x, kRoad, 0, 0);
      pred.set(x, kRoad, 0, 0);
    }
    pred.set(0, kTrain, 0, 1);
    pred.set(1, kTrain, 0, 1);
    const PqResult r = pq_metrics(pred, gt, catalog);
    for (const auto& entry : r.per_class) {
      if (entry.class_id == kTrain) {
        CHECK(entry.tp == 0);
        CHECK(entry.fp == 1);
        CHECK(entry.pq == doctest::Approx(0.0));
      }
    }
  }
}

TEST_CASE("part_pq hand-computed case") {
  const ClassCatalog catalog = preset_catalog("cpp");
  const auto person_parts = catalog.class_def(kPerson).part_channel_ids;
  const int p1 = person_parts[0];
  const int p2 = person_parts[1];

  // One person instance over 20 px with perfect segment overlap. gt parts:
  // p1 on [0,10), p2 on [10,20). pred parts: p1 on [0,8) (IoU 0.8), p2 on
  // [10,16) (IoU 0.6), background elsewhere -> contribution (0.8+0.6)/2.
  LabelMap gt(20, 1), pred(20, 1);
  for (int x = 0; x < 20; ++x) {
    gt.set(x, kPerson, x < 10 ? p1 : p2, 1);
    int part = 0;
    if (x < 8) {
      part = p1;
    } else if (x >= 10 && x < 16) {
      part = p2;
    }
    pred.set(x, kPerson, part, 1);
  }
  const PqResult r = pq_metrics(pred, gt, catalog);
  CHECK(r.part_pq_p == doctest::Approx(0.7).epsilon(1e-12));
  // the segment itself matches perfectly
  CHECK(r.pq == doctest::Approx(1.0));

  SUBCASE("scenes with only non-partitionable classes have PartPQ == PQ") {
    LabelMap gt2(12, 1), pred2(12, 1);
    for (int x = 0; x < 12; ++x) {
      gt2.set(x, kRoad, 0, 0);
      pred2.set(x, x < 9 ? kRoad : kSidewalk, 0, 0);
    }
    const PqResult r2 = pq_metrics(pred2, gt2, catalog);
    CHECK(r2.part_pq_all == doctest::Approx(r2.pq).epsilon(1e-12));
  }
}

TEST_CASE("pq identities and invariances on generated scenes") {
  const ClassCatalog catalog = preset_catalog("cpp");
  for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
    SceneConfig cfg;
    cfg.seed = seed;
    cfg.logit_noise_sigma = 1.0;
    cfg.bbox_jitter = 1;
    const Scene scene = generate_scene(cfg);
    FusionConfig config;
    config.min_stuff = 16;
    const LabelMap pred = jppf::jppf(scene.sem_logits, scene.part_logits,
                               scene.dets, catalog, config);
    const PqResult r = pq_metrics(pred, scene.gt, catalog);

    for (const auto& entry : r.per_class) {
      if (!entry.included) {
        continue;
      }
      CHECK(entry.pq == doctest::Approx(entry.sq * entry.rq).epsilon(1e-12));
      CHECK(entry.pq >= 0.0);
      CHECK(entry.pq <= 1.0);
    }
    if (r.part_pq_p > 0 && r.part_pq_np > 0) {
      CHECK(r.part_pq_all >=
            std::min(r.part_pq_p, r.part_pq_np) - 1e-12);
      CHECK(r.part_pq_all <=
            std::max(r.part_pq_p, r.part_pq_np) + 1e-12);
    }

    // relabeling instance ids must not change anything
    LabelMap relabeled = pred;
    for (auto& id : relabeled.instance) {
      if (id != 0) {
        id = static_cast<std::uint16_t>(id * 7 + 3);
      }
    }
    const PqResult r2 = pq_metrics(relabeled, scene.gt, catalog);
    CHECK(r2.pq == doctest::Approx(r.pq).epsilon(1e-12));
    CHECK(r2.part_pq_all == doctest::Approx(r.part_pq_all).epsilon(1e-12));
  }
}

TEST_CASE("density") {
  LabelMap m(4, 3);
  for (std::size_t px = 0; px < m.pixels(); ++px) {
    m.set(px, kRoad, 0, 0);
  }
  CHECK(density(m) == doctest::Approx(1.0));
  m.set_void(0);
  m.set_void(1);
  m.set_void(2);
  CHECK(density(m) == doctest::Approx(0.75));
  for (std::size_t px = 0; px < m.pixels(); ++px) {
    m.set_void(px);
  }
  CHECK(density(m) == doctest::Approx(0.0));
}

TEST_CASE("mask_ap") {
  const ClassCatalog catalog = preset_catalog("cpp");
  // one car instance of 4x4 at (0,0)
  LabelMap gt(8, 8);
  for (std::size_t px = 0; px < gt.pixels(); ++px) {
    gt.set(px, kRoad, 0, 0);
  }
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) {
      gt.set(y * 8 + x, kCar, 0, 1);
    }
  }
  const auto gt_instances = extract_instances(gt, catalog);
  REQUIRE(gt_instances.size() == 1);

  SUBCASE("single perfect detection") {
    DetectionSet dets;
    dets.push_back(mask_detection(kCar, 0.9f, {0, 0, 4, 4}, gt, 1));
    const ApResult r = mask_ap(dets, gt_instances, 0.5, 19);
    CHECK(r.per_class[kCar] == doctest::Approx(1.0));
    CHECK(r.mean == doctest::Approx(1.0));
  }
  SUBCASE("correct detection ranked second gives AP 0.5") {
    DetectionSet dets;
    dets.push_back(mask_detection(kCar, 0.95f, {4, 4, 8, 8}, gt, 1));  // miss
    dets.push_back(mask_detection(kCar, 0.60f, {0, 0, 4, 4}, gt, 1));  // hit
    const ApResult r = mask_ap(dets, gt_instances, 0.5, 19);
    CHECK(r.per_class[kCar] == doctest::Approx(0.5));
  }
  SUBCASE("no detections at all") {
    const ApResult r = mask_ap({}, gt_instances, 0.5, 19);
    CHECK(r.per_class[kCar] == doctest::Approx(0.0));
    CHECK(r.mean == doctest::Approx(0.0));
  }
  SUBCASE("mean over thresholds drops with a sloppy mask") {
    // 3x4 detection over the 4x4 instance: IoU = 12/16 = 0.75
    DetectionSet dets;
    Detection det;
    det.class_id = kCar;
    det.score = 0.9f;
    det.box = {0, 0, 4, 3};
    det.mask_logits = Tensor({1, 3, 4}, 4.0f);
    dets.push_back(det);
    const double map = mask_mean_ap(dets, gt_instances, 19);
    // matched at thresholds 0.50..0.75 only: 6 of 10
    CHECK(map == doctest::Approx(0.6));
  }
}

TEST_CASE("evaluate bundles the table columns") {
  const ClassCatalog catalog = preset_catalog("cpp");
  SceneConfig cfg;
  cfg.seed = 3;
  cfg.min_instances = 4;
  const Scene scene = generate_scene(cfg);
  FusionConfig config;
  config.min_stuff = 0;
  const LabelMap pred =
      jppf::jppf(scene.sem_logits, scene.part_logits, scene.dets, catalog, config);
  const EvalReport report = evaluate(pred, scene.gt, catalog, &scene.dets);
  CHECK(report.sem_miou == doctest::Approx(1.0));
  CHECK(report.part_miou == doctest::Approx(1.0));
  CHECK(report.pq == doctest::Approx(1.0));
  CHECK(report.part_pq_all == doctest::Approx(1.0));
  CHECK(report.density_value == doctest::Approx(1.0));
  REQUIRE(report.inst_ap.has_value());
  CHECK(*report.inst_ap == doctest::Approx(1.0));

  std::ostringstream kv;
  write_report_kv(kv, report);
  CHECK(kv.str().find("part_pq_all = ") != std::string::npos);
  CHECK(kv.str().find("density = ") != std::string::npos);
  std::ostringstream text;
  write_report_text(text, report, catalog);
  CHECK(text.str().find("PartPQ All") != std::string::npos);

  SUBCASE("extent mismatches are rejected") {
    LabelMap smaller(scene.gt.width - 1, scene.gt.height);
    CHECK_THROWS_AS(evaluate(smaller, scene.gt, catalog), ShapeError);
    CHECK_THROWS_AS(pq_metrics(smaller, scene.gt, catalog), ShapeError);
  }
}

TEST_CASE("metrics stay in range on arbitrary label maps") {
  // Random garbage maps (ids far outside the catalog) must not crash and
  // must keep every reported quality within [0, 1].
  const ClassCatalog catalog = preset_catalog("cpp");
  SplitMix64 rng(404);
  for (int it = 0; it < 10; ++it) {
    LabelMap a(17, 13), b(17, 13);
    for (std::size_t px = 0; px < a.pixels(); ++px) {
      a.set(px, static_cast<std::uint16_t>(rng.uniform_int(0, 40)),
            static_cast<std::uint16_t>(rng.uniform_int(0, 12)),
            static_cast<std::uint16_t>(rng.uniform_int(0, 5)));
      b.set(px, static_cast<std::uint16_t>(rng.uniform_int(0, 40)),
            static_cast<std::uint16_t>(rng.uniform_int(0, 12)),
            static_cast<std::uint16_t>(rng.uniform_int(0, 5)));
    }
    const PqResult r = pq_metrics(a, b, catalog);
    for (double v : {r.pq, r.sq, r.rq, r.part_pq_all, r.part_pq_p,
                     r.part_pq_np}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    const double d = density(a);
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
  }
}

TEST_CASE("pq and part_pq wrappers agree with the bundle") {
  const ClassCatalog catalog = preset_catalog("cpp");
  SceneConfig cfg;
  cfg.seed = 62;
  cfg.logit_noise_sigma = 1.0;
  const Scene scene = generate_scene(cfg);
  FusionConfig config;
  config.min_stuff = 0;
  const LabelMap pred = jppf::jppf(scene.sem_logits, scene.part_logits,
                                   scene.dets, catalog, config);
  const PqResult full = pq_metrics(pred, scene.gt, catalog);
  const PqSummary s = pq(pred, scene.gt, catalog);
  CHECK(s.pq == full.pq);
  CHECK(s.sq == full.sq);
  CHECK(s.rq == full.rq);
  const PartPqSummary p = part_pq(pred, scene.gt, catalog);
  CHECK(p.all == full.part_pq_all);
  CHECK(p.partitionable == full.part_pq_p);
  CHECK(p.non_partitionable == full.part_pq_np);
}
