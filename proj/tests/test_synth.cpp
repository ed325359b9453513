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
#include <sstream>

#include "jppf/errors.hpp"
#include "jppf/metrics.hpp"
#include "jppf/synth.hpp"

using namespace jppf;

TEST_CASE("generate_scene is deterministic per seed") {
  SceneConfig cfg;
  cfg.seed = 42;
  cfg.logit_noise_sigma = 1.0;
  cfg.bbox_jitter = 2;
  const Scene a = generate_scene(cfg);
  const Scene b = generate_scene(cfg);
  CHECK(a.gt == b.gt);
  CHECK(a.sem_logits == b.sem_logits);
  CHECK(a.part_logits == b.part_logits);
  REQUIRE(a.dets.size() == b.dets.size());
  for (std::size_t i = 0; i < a.dets.size(); ++i) {
    CHECK(a.dets[i].score == b.dets[i].score);
    CHECK(a.dets[i].box == b.dets[i].box);
    CHECK(a.dets[i].mask_logits == b.dets[i].mask_logits);
  }

  cfg.seed = 43;
  const Scene c = generate_scene(cfg);
  CHECK(a.gt.semantic != c.gt.semantic);
}

TEST_CASE("generated ground truth is well-formed") {
  const ClassCatalog catalog = preset_catalog("cpp");
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SceneConfig cfg;
    cfg.seed = seed;
    cfg.min_instances = 2;
    const Scene scene = generate_scene(cfg);
    REQUIRE(scene.sem_logits.channels() == 19);
    REQUIRE(scene.part_logits.channels() == 10);
    CHECK(scene.dets.size() >= 2);
    for (std::size_t px = 0; px < scene.gt.pixels(); ++px) {
      const auto s = scene.gt.semantic[px];
      REQUIRE(catalog.has_class(s));
      const ClassDef& def = catalog.class_def(s);
      if (def.kind == ClassKind::kStuff) {
        CHECK(scene.gt.instance[px] == 0);
        CHECK(scene.gt.part[px] == 0);
      } else if (def.partitionable()) {
        CHECK(scene.gt.instance[px] > 0);
        CHECK(scene.gt.part[px] != 0);
      } else {
        CHECK(scene.gt.part[px] == 0);
      }
    }
    for (const auto& det : scene.dets) {
      CHECK(catalog.class_def(det.class_id).kind == ClassKind::kThing);
      CHECK(det.score >= 0.6f);
      CHECK(det.score <= 0.95f);
    }
  }
}

TEST_CASE("instance count 0 gives a pure stuff scene") {
  SceneConfig cfg;
  cfg.seed = 2;
  cfg.min_instances = 0;
  cfg.max_instances = 0;
  const Scene scene = generate_scene(cfg);
  CHECK(scene.dets.empty());
  for (std::size_t px = 0; px < scene.gt.pixels(); ++px) {
    CHECK(scene.gt.instance[px] == 0);
  }
}

TEST_CASE("infeasible configs raise GenerationError") {
  SceneConfig cfg;
  cfg.seed = 1;
  cfg.width = 16;
  cfg.height = 16;
  cfg.min_instances = 60;
  cfg.max_instances = 60;
  CHECK_THROWS_AS(generate_scene(cfg), GenerationError);

  SceneConfig bad;
  bad.min_instances = 3;
  bad.max_instances = 1;
  CHECK_THROWS_AS(generate_scene(bad), GenerationError);
  SceneConfig bad2;
  bad2.logit_noise_sigma = -1.0;
  CHECK_THROWS_AS(generate_scene(bad2), GenerationError);
}

TEST_CASE("oracle equals jppf across noise levels (smoke)") {
  const ClassCatalog catalog = preset_catalog("cpp");
  for (std::uint64_t seed : {100ull, 101ull, 102ull}) {
    SceneConfig cfg;
    cfg.seed = seed;
    cfg.logit_noise_sigma = 0.5 * static_cast<double>(seed % 3);
    cfg.bbox_jitter = static_cast<int>(seed % 2);
    const Scene scene = generate_scene(cfg);
    FusionConfig config;
    config.min_stuff = (seed % 2) ? 0 : 16;
    const LabelMap engine = jppf::jppf(scene.sem_logits, scene.part_logits,
                                 scene.dets, catalog, config);
    const LabelMap reference = naive_fusion_oracle(
        scene.sem_logits, scene.part_logits, scene.dets, catalog, config);
    CHECK(engine == reference);
  }
}

TEST_CASE("oracle arithmetic on a 1x1 image matches the hand formula") {
  // Tiny two-class catalog: stuff "ground", partitionable thing "widget"
  // with one part channel.
  ClassCatalog catalog({{1, "ground", ClassKind::kStuff, {}},
                        {2, "widget", ClassKind::kThing, {1}}},
                       2);
  REQUIRE(validate_catalog(catalog).empty());

  const float sem_ground = 0.0f, sem_widget = 1.0f;
  const float part_bg = 0.2f, part_widget = 0.8f;
  const float mask_logit = 0.7f;
  Tensor sem({2, 1, 1}, {sem_ground, sem_widget});
  Tensor parts({2, 1, 1}, {part_bg, part_widget});
  Detection det;
  det.class_id = 2;
  det.score = 0.9f;
  det.box = {0, 0, 1, 1};
  det.mask_logits = Tensor({1, 1, 1}, {mask_logit});

  FusionConfig config;
  config.min_stuff = 0;
  const LabelMap out = naive_fusion_oracle(sem, parts, {det}, catalog, config);

  // Hand evaluation in double precision.
  auto sigmoid = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
  const double es0 = std::exp(0.0), es1 = std::exp(1.0);
  const double sem_n0 = es0 / (es0 + es1), sem_n1 = es1 / (es0 + es1);
  const double ep0 = std::exp(0.2), ep1 = std::exp(0.8);
  const double part_n0 = ep0 / (ep0 + ep1), part_n1 = ep1 / (ep0 + ep1);
  const double fused_thing =
      (sigmoid(sem_n1) + sigmoid(mask_logit) + sigmoid(part_n1)) *
      (sem_n1 + mask_logit + part_n1);
  const double fused_stuff =
      (sigmoid(sem_n0) + sigmoid(part_n0)) * (sem_n0 + part_n0);
  REQUIRE(fused_thing > fused_stuff);  // the instance wins this pixel
  CHECK(out.semantic[0] == 2);
  CHECK(out.part[0] == 1);
  CHECK(out.instance[0] == 1);

  // And the engine agrees.
  const LabelMap engine = jppf::jppf(sem, parts, {det}, catalog, config);
  CHECK(engine == out);
}

TEST_CASE("noiseless scenes evaluate perfectly end to end") {
  const ClassCatalog catalog = preset_catalog("cpp");
  SceneConfig cfg;
  cfg.seed = 1234;
  cfg.min_instances = 3;
  const Scene scene = generate_scene(cfg);
  FusionConfig config;
  config.min_stuff = 0;
  const LabelMap out =
      jppf::jppf(scene.sem_logits, scene.part_logits, scene.dets, catalog, config);
  const PqResult r = pq_metrics(out, scene.gt, catalog);
  CHECK(r.pq == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.part_pq_all == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(density(out) == doctest::Approx(1.0));
}

TEST_CASE("scene config sidecar round-trips") {
  SceneConfig cfg;
  cfg.width = 128;
  cfg.height = 96;
  cfg.min_instances = 2;
  cfg.max_instances = 7;
  cfg.catalog = "ppp";
  cfg.logit_noise_sigma = 1.5;
  cfg.score_min = 0.55;
  cfg.score_max = 0.9;
  cfg.bbox_jitter = 3;
  cfg.seed = 987654321;
  std::stringstream buffer;
  write_scene_config(buffer, cfg);
  const SceneConfig back = read_scene_config(buffer);
  CHECK(back.width == cfg.width);
  CHECK(back.height == cfg.height);
  CHECK(back.min_instances == cfg.min_instances);
  CHECK(back.max_instances == cfg.max_instances);
  CHECK(back.catalog == cfg.catalog);
  CHECK(back.logit_noise_sigma == cfg.logit_noise_sigma);
  CHECK(back.score_min == cfg.score_min);
  CHECK(back.score_max == cfg.score_max);
  CHECK(back.bbox_jitter == cfg.bbox_jitter);
  CHECK(back.seed == cfg.seed);
}

TEST_CASE("splitmix64 reference values") {
  // First outputs for seed 0; pins the generator algorithm.
  SplitMix64 rng(0);
  CHECK(rng.next() == 0xE220A8397B1DCDAFull);
  CHECK(rng.next() == 0x6E789E6AA1B965F4ull);
  CHECK(rng.next() == 0x06C45D188009454Full);
}

TEST_CASE("PartPQ degrades monotonically with logit noise") {
  const ClassCatalog catalog = preset_catalog("cpp");
  const double sigmas[4] = {0.0, 0.5, 1.0, 2.0};
  double means[4] = {0, 0, 0, 0};
  const int seeds = 20;
  for (int level = 0; level < 4; ++level) {
    for (int seed = 1; seed <= seeds; ++seed) {
      SceneConfig cfg;
      cfg.seed = static_cast<std::uint64_t>(seed) + 900;
      cfg.logit_noise_sigma = sigmas[level];
      cfg.min_instances = 2;
      const Scene scene = generate_scene(cfg);
      FusionConfig config;
      config.min_stuff = 0;
      const LabelMap pred = jppf::jppf(scene.sem_logits, scene.part_logits,
                                       scene.dets, catalog, config);
      means[level] += pq_metrics(pred, scene.gt, catalog).part_pq_all;
    }
    means[level] /= seeds;
  }
  CHECK(means[0] == doctest::Approx(1.0));
  CHECK(means[0] >= means[1]);
  CHECK(means[1] >= means[2]);
  CHECK(means[2] >= means[3]);
}

TEST_CASE("oracle and engine agree on a scene with no detections") {
  const ClassCatalog catalog = preset_catalog("cpp");
  SceneConfig cfg;
  cfg.seed = 55;
  cfg.logit_noise_sigma = 0.5;
  const Scene scene = generate_scene(cfg);
  FusionConfig config;
  config.min_stuff = 8;
  const LabelMap engine = jppf::jppf(scene.sem_logits, scene.part_logits, {},
                                     catalog, config);
  const LabelMap reference = naive_fusion_oracle(
      scene.sem_logits, scene.part_logits, {}, catalog, config);
  CHECK(engine == reference);
  for (std::size_t px = 0; px < engine.pixels(); ++px) {
    CHECK(engine.instance[px] == 0);  // stuff-only output
  }
}
