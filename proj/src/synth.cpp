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

#include "jppf/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "jppf/errors.hpp"

namespace jppf {

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

int SplitMix64::uniform_int(int lo, int hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(next() % span);
}

double SplitMix64::uniform01() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

double SplitMix64::normal(double sigma) {
  // Box-Muller, cosine branch. u1 is shifted into (0, 1] to keep the log
  // finite.
  const double u1 =
      (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = uniform01();
  return sigma * std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

constexpr float kMargin = 4.0f;
constexpr int kPlacementAttempts = 500;

struct Placed {
  BBox box;
  int class_id = 0;
  bool ellipse = false;
};

bool boxes_overlap(const BBox& a, const BBox& b) {
  return a.x0 < b.x1 && b.x0 < a.x1 && a.y0 < b.y1 && b.y0 < a.y1;
}

void add_noise(Tensor& t, double sigma, SplitMix64& rng) {
  if (sigma <= 0.0) {
    return;
  }
  for (float& v : t.data()) {
    v = static_cast<float>(v + rng.normal(sigma));
  }
}

}  // namespace

Scene generate_scene(const SceneConfig& cfg) {
  if (cfg.width < 1 || cfg.height < 1) {
    throw GenerationError("scene extents must be positive");
  }
  if (cfg.min_instances < 0 || cfg.max_instances < cfg.min_instances) {
    throw GenerationError("invalid instance count range");
  }
  if (cfg.logit_noise_sigma < 0.0 || cfg.bbox_jitter < 0) {
    throw GenerationError("noise parameters must be non-negative");
  }
  if (cfg.score_min < 0.0 || cfg.score_max > 1.0 ||
      cfg.score_max < cfg.score_min) {
    throw GenerationError("score range must be within [0,1]");
  }

  const ClassCatalog catalog = resolve_catalog(cfg.catalog);
  const int w = cfg.width;
  const int h = cfg.height;
  SplitMix64 rng(cfg.seed);

  // Background: horizontal stripes of distinct stuff classes.
  const auto& stuff = catalog.stuff_channels();
  if (stuff.empty()) {
    throw GenerationError("catalog has no stuff classes for the background");
  }
  const int bands =
      std::min<int>(static_cast<int>(stuff.size()),
                    stuff.size() == 1 ? 1 : rng.uniform_int(2, 4));
  std::vector<int> band_class(bands);
  std::vector<int> pool(stuff.begin(), stuff.end());
  for (int b = 0; b < bands; ++b) {
    const int pick = rng.uniform_int(0, static_cast<int>(pool.size()) - 1);
    band_class[b] = catalog.class_at_channel(pool[pick]).class_id;
    pool.erase(pool.begin() + pick);
  }

  Scene scene;
  scene.gt = LabelMap(w, h);
  for (int y = 0; y < h; ++y) {
    const int band = std::min(bands - 1, y * bands / h);
    for (int x = 0; x < w; ++x) {
      scene.gt.set(static_cast<std::size_t>(y) * w + x,
                   static_cast<std::uint16_t>(band_class[band]), 0, 0);
    }
  }

  // Thing classes, biased towards partitionable ones so the part path is
  // exercised.
  std::vector<int> things;
  std::vector<int> partitionable;
  for (const auto& c : catalog.classes()) {
    if (c.kind == ClassKind::kThing) {
      things.push_back(c.class_id);
      if (c.partitionable()) {
        partitionable.push_back(c.class_id);
      }
    }
  }
  if (things.empty()) {
    throw GenerationError("catalog has no thing classes");
  }

  const int count = rng.uniform_int(cfg.min_instances, cfg.max_instances);
  const int raw_min = std::max(4, std::min(w, h) / 10);
  const int raw_max = std::max(raw_min + 1, std::min(w, h) / 4);
  const int max_w = std::min(raw_max, w);
  const int max_h = std::min(raw_max, h);
  const int min_w = std::min(raw_min, max_w);
  const int min_h = std::min(raw_min, max_h);

  std::vector<Placed> placed;
  for (int i = 0; i < count; ++i) {
    int class_id;
    if (!partitionable.empty() && rng.uniform01() < 0.75) {
      class_id = partitionable[rng.uniform_int(
          0, static_cast<int>(partitionable.size()) - 1)];
    } else {
      class_id =
          things[rng.uniform_int(0, static_cast<int>(things.size()) - 1)];
    }
    const bool ellipse = rng.uniform01() < 0.5;
    const int bw = rng.uniform_int(min_w, max_w);
    const int bh = rng.uniform_int(min_h, max_h);

    bool ok = false;
    BBox box;
    for (int attempt = 0; attempt < kPlacementAttempts && !ok; ++attempt) {
      box.x0 = rng.uniform_int(0, w - bw);
      box.y0 = rng.uniform_int(0, h - bh);
      box.x1 = box.x0 + bw;
      box.y1 = box.y0 + bh;
      ok = std::none_of(placed.begin(), placed.end(), [&](const Placed& p) {
        return boxes_overlap(box, p.box);
      });
    }
    if (!ok) {
      throw GenerationError("could not place instance " + std::to_string(i + 1) +
                            " of " + std::to_string(count));
    }
    placed.push_back({box, class_id, ellipse});

    const auto channels = part_channels_for_class(catalog, class_id);
    const bool has_parts = catalog.class_def(class_id).partitionable();
    const int p_n = static_cast<int>(channels.size());
    const double cx = (box.x0 + box.x1 - 1) / 2.0;
    const double cy = (box.y0 + box.y1 - 1) / 2.0;
    const double rx = std::max(1.0, bw / 2.0);
    const double ry = std::max(1.0, bh / 2.0);
    for (int y = box.y0; y < box.y1; ++y) {
      const int band = std::min(p_n - 1, (y - box.y0) * p_n / bh);
      for (int x = box.x0; x < box.x1; ++x) {
        if (ellipse) {
          const double dx = (x - cx) / rx;
          const double dy = (y - cy) / ry;
          if (dx * dx + dy * dy > 1.0) {
            continue;
          }
        }
        scene.gt.set(static_cast<std::size_t>(y) * w + x,
                     static_cast<std::uint16_t>(class_id),
                     has_parts ? static_cast<std::uint16_t>(channels[band]) : 0,
                     static_cast<std::uint16_t>(i + 1));
      }
    }
  }

  // Head tensors: one-hot with margin on the true channel, then noise.
  const std::size_t plane = static_cast<std::size_t>(w) * h;
  scene.sem_logits =
      Tensor({static_cast<std::size_t>(catalog.num_classes()),
              static_cast<std::size_t>(h), static_cast<std::size_t>(w)});
  for (std::size_t px = 0; px < plane; ++px) {
    const int ch = catalog.channel_of(scene.gt.semantic[px]);
    scene.sem_logits.data()[static_cast<std::size_t>(ch) * plane + px] =
        kMargin;
  }
  add_noise(scene.sem_logits, cfg.logit_noise_sigma, rng);

  scene.part_logits =
      Tensor({static_cast<std::size_t>(catalog.n_part_channels()),
              static_cast<std::size_t>(h), static_cast<std::size_t>(w)});
  for (std::size_t px = 0; px < plane; ++px) {
    const std::size_t ch = scene.gt.part[px];
    scene.part_logits.data()[ch * plane + px] = kMargin;
  }
  add_noise(scene.part_logits, cfg.logit_noise_sigma, rng);

  // Detections: one proposal per instance with a jittered box; mask logits
  // are +margin inside the instance, -margin elsewhere.
  for (std::size_t i = 0; i < placed.size(); ++i) {
    Detection det;
    det.class_id = placed[i].class_id;
    det.score = static_cast<float>(rng.uniform(cfg.score_min, cfg.score_max));
    BBox box = placed[i].box;
    if (cfg.bbox_jitter > 0) {
      const int j = cfg.bbox_jitter;
      box.x0 = std::clamp(box.x0 + rng.uniform_int(-j, j), 0, w - 1);
      box.y0 = std::clamp(box.y0 + rng.uniform_int(-j, j), 0, h - 1);
      box.x1 = std::clamp(box.x1 + rng.uniform_int(-j, j), box.x0 + 1, w);
      box.y1 = std::clamp(box.y1 + rng.uniform_int(-j, j), box.y0 + 1, h);
    }
    det.box = box;
    det.mask_logits = Tensor({1, static_cast<std::size_t>(box.height()),
                              static_cast<std::size_t>(box.width())});
    float* mask = det.mask_logits.channel(0);
    for (int y = box.y0; y < box.y1; ++y) {
      for (int x = box.x0; x < box.x1; ++x) {
        const bool inside =
            scene.gt.instance[static_cast<std::size_t>(y) * w + x] == i + 1;
        mask[(y - box.y0) * box.width() + (x - box.x0)] =
            inside ? kMargin : -kMargin;
      }
    }
    add_noise(det.mask_logits, cfg.logit_noise_sigma, rng);
    scene.dets.push_back(std::move(det));
  }

  return scene;
}

void write_scene_config(std::ostream& sink, const SceneConfig& cfg) {
  sink << "width = " << cfg.width << "\n";
  sink << "height = " << cfg.height << "\n";
  sink << "min_instances = " << cfg.min_instances << "\n";
  sink << "max_instances = " << cfg.max_instances << "\n";
  sink << "catalog = " << cfg.catalog << "\n";
  sink << "logit_noise_sigma = " << cfg.logit_noise_sigma << "\n";
  sink << "score_min = " << cfg.score_min << "\n";
  sink << "score_max = " << cfg.score_max << "\n";
  sink << "bbox_jitter = " << cfg.bbox_jitter << "\n";
  sink << "seed = " << cfg.seed << "\n";
}

SceneConfig read_scene_config(std::istream& source) {
  SceneConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(source, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      continue;
    }
    auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r\n");
      if (b == std::string::npos) {
        return std::string();
      }
      const auto e = s.find_last_not_of(" \t\r\n");
      return s.substr(b, e - b + 1);
    };
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    try {
      if (key == "width") {
        cfg.width = std::stoi(value);
      } else if (key == "height") {
        cfg.height = std::stoi(value);
      } else if (key == "min_instances") {
        cfg.min_instances = std::stoi(value);
      } else if (key == "max_instances") {
        cfg.max_instances = std::stoi(value);
      } else if (key == "catalog") {
        cfg.catalog = value;
      } else if (key == "logit_noise_sigma") {
        cfg.logit_noise_sigma = std::stod(value);
      } else if (key == "score_min") {
        cfg.score_min = std::stod(value);
      } else if (key == "score_max") {
        cfg.score_max = std::stod(value);
      } else if (key == "bbox_jitter") {
        cfg.bbox_jitter = std::stoi(value);
      } else if (key == "seed") {
        cfg.seed = std::stoull(value);
      } else {
        throw ParseError("scene config line " + std::to_string(line_no) +
                         ": unknown key '" + key + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError("scene config line " + std::to_string(line_no) +
                       ": bad value for '" + key + "'");
    }
  }
  return cfg;
}

}  // namespace jppf
