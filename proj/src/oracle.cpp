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

// The reference fusion: every step written as plain per-pixel loops over
// fully materialized intermediates. This file intentionally shares no code
// with the engine in fusion.cpp; the two must agree pixel for pixel.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "jppf/errors.hpp"
#include "jppf/synth.hpp"

namespace jppf {

namespace {

float oracle_sigmoid(float x) { return 1.0f / (1.0f + std::exp(-x)); }

// Channel-wise softmax, one pixel at a time.
Tensor oracle_softmax(const Tensor& t) {
  const std::size_t c_n = t.channels();
  const std::size_t plane = t.height() * t.width();
  Tensor out(t.dims());
  std::vector<float> exps(c_n);
  for (std::size_t px = 0; px < plane; ++px) {
    float max_v = t.data()[px];
    for (std::size_t c = 1; c < c_n; ++c) {
      max_v = std::max(max_v, t.data()[c * plane + px]);
    }
    float denom = 0.0f;
    for (std::size_t c = 0; c < c_n; ++c) {
      exps[c] = std::exp(t.data()[c * plane + px] - max_v);
      denom += exps[c];
    }
    for (std::size_t c = 0; c < c_n; ++c) {
      out.data()[c * plane + px] = exps[c] / denom;
    }
  }
  return out;
}

// Confidence thresholding, score ordering, and greedy suppression against
// the union of already kept binarized masks (mask overlap over own area).
DetectionSet oracle_filter(const DetectionSet& dets,
                           const FusionConfig& config, int width,
                           int height) {
  std::vector<const Detection*> ranked;
  for (const auto& det : dets) {
    if (det.score >= config.confidence_threshold) {
      ranked.push_back(&det);
    }
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const Detection* a, const Detection* b) {
                     return a->score > b->score;
                   });

  std::vector<char> claimed(static_cast<std::size_t>(width) * height, 0);
  DetectionSet kept;
  for (const Detection* det : ranked) {
    const int bw = det->box.width();
    long long area = 0;
    long long overlap = 0;
    for (int y = det->box.y0; y < det->box.y1; ++y) {
      for (int x = det->box.x0; x < det->box.x1; ++x) {
        const float logit =
            det->mask_logits.channel(0)[(y - det->box.y0) * bw +
                                        (x - det->box.x0)];
        if (logit > 0.0f) {
          ++area;
          overlap += claimed[static_cast<std::size_t>(y) * width + x];
        }
      }
    }
    if (area == 0) {
      continue;
    }
    if (static_cast<double>(overlap) / area > config.overlap_threshold) {
      continue;
    }
    for (int y = det->box.y0; y < det->box.y1; ++y) {
      for (int x = det->box.x0; x < det->box.x1; ++x) {
        const float logit =
            det->mask_logits.channel(0)[(y - det->box.y0) * bw +
                                        (x - det->box.x0)];
        if (logit > 0.0f) {
          claimed[static_cast<std::size_t>(y) * width + x] = 1;
        }
      }
    }
    Detection copy = *det;
    copy.instance_id = static_cast<int>(kept.size()) + 1;
    kept.push_back(std::move(copy));
  }
  return kept;
}

struct OracleChannel {
  std::vector<float> values;  // full image plane
  std::uint16_t semantic_id;
  std::uint16_t part_id;
  std::uint16_t instance_id;
};

}  // namespace

LabelMap naive_fusion_oracle(const Tensor& sem_logits,
                             const Tensor& part_logits,
                             const DetectionSet& dets,
                             const ClassCatalog& catalog,
                             const FusionConfig& config) {
  sem_logits.require_rank(3, "oracle semantic logits");
  part_logits.require_rank(3, "oracle part logits");
  const int h = static_cast<int>(sem_logits.height());
  const int w = static_cast<int>(sem_logits.width());
  const std::size_t plane = static_cast<std::size_t>(h) * w;

  const Tensor sem =
      config.normalize_heads ? oracle_softmax(sem_logits) : sem_logits;
  const Tensor parts =
      config.normalize_heads ? oracle_softmax(part_logits) : part_logits;

  const DetectionSet kept = oracle_filter(dets, config, w, h);

  // Fused candidate channels: every instance's part channels, then stuff.
  std::vector<OracleChannel> channels;
  for (const auto& det : kept) {
    const std::vector<int> part_ids =
        part_channels_for_class(catalog, det.class_id);
    const std::size_t p_n = part_ids.size();
    const int sem_channel = catalog.channel_of(det.class_id);

    // Masked logits, fully materialized: MLS and MLI replicated to P
    // channels, MLP the class's part channels; zero outside the box.
    std::vector<std::vector<float>> mls(p_n, std::vector<float>(plane, 0.0f));
    std::vector<std::vector<float>> mli(p_n, std::vector<float>(plane, 0.0f));
    std::vector<std::vector<float>> mlp(p_n, std::vector<float>(plane, 0.0f));
    for (std::size_t k = 0; k < p_n; ++k) {
      for (int y = det.box.y0; y < det.box.y1; ++y) {
        for (int x = det.box.x0; x < det.box.x1; ++x) {
          const std::size_t px = static_cast<std::size_t>(y) * w + x;
          mls[k][px] = sem.data()[sem_channel * plane + px];
          mli[k][px] =
              det.mask_logits.channel(0)[(y - det.box.y0) * det.box.width() +
                                         (x - det.box.x0)];
          mlp[k][px] =
              parts.data()[static_cast<std::size_t>(part_ids[k]) * plane + px];
        }
      }
    }

    for (std::size_t k = 0; k < p_n; ++k) {
      OracleChannel ch;
      ch.values.resize(plane);
      ch.semantic_id = static_cast<std::uint16_t>(det.class_id);
      ch.part_id = static_cast<std::uint16_t>(part_ids[k]);
      ch.instance_id = static_cast<std::uint16_t>(det.instance_id);
      for (std::size_t px = 0; px < plane; ++px) {
        // The fusion rule: (sum of sigmoids) x (sum of logits), with both
        // sums taken in ascending value order.
        float v[3] = {mls[k][px], mli[k][px], mlp[k][px]};
        std::sort(std::begin(v), std::end(v));
        const float sig_sum =
            oracle_sigmoid(v[0]) + oracle_sigmoid(v[1]) + oracle_sigmoid(v[2]);
        const float logit_sum = (v[0] + v[1]) + v[2];
        ch.values[px] = sig_sum * logit_sum;
      }
      channels.push_back(std::move(ch));
    }
  }

  const std::size_t thing_channels = channels.size();
  for (int stuff_ch : catalog.stuff_channels()) {
    OracleChannel ch;
    ch.values.resize(plane);
    ch.semantic_id = static_cast<std::uint16_t>(
        catalog.class_at_channel(stuff_ch).class_id);
    ch.part_id = 0;
    ch.instance_id = 0;
    for (std::size_t px = 0; px < plane; ++px) {
      float a = sem.data()[static_cast<std::size_t>(stuff_ch) * plane + px];
      float b = parts.data()[px];  // background channel
      if (b < a) {
        std::swap(a, b);
      }
      ch.values[px] = (oracle_sigmoid(a) + oracle_sigmoid(b)) * (a + b);
    }
    channels.push_back(std::move(ch));
  }

  LabelMap map(w, h);
  const auto& stuff_channels = catalog.stuff_channels();
  for (std::size_t px = 0; px < plane; ++px) {
    int best = -1;
    float best_v = 0.0f;
    for (std::size_t k = 0; k < channels.size(); ++k) {
      if (best < 0 || channels[k].values[px] > best_v) {
        best = static_cast<int>(k);
        best_v = channels[k].values[px];
      }
    }
    if (best >= 0 && static_cast<std::size_t>(best) < thing_channels) {
      map.set(px, channels[best].semantic_id, channels[best].part_id,
              channels[best].instance_id);
      continue;
    }
    // Stuff (or nothing) won: fill from the semantic head's stuff argmax.
    if (stuff_channels.empty()) {
      map.set_void(px);
      continue;
    }
    int best_stuff = stuff_channels[0];
    float best_stuff_v =
        sem.data()[static_cast<std::size_t>(stuff_channels[0]) * plane + px];
    for (std::size_t j = 1; j < stuff_channels.size(); ++j) {
      const float v =
          sem.data()[static_cast<std::size_t>(stuff_channels[j]) * plane + px];
      if (v > best_stuff_v) {
        best_stuff_v = v;
        best_stuff = stuff_channels[j];
      }
    }
    map.set(px,
            static_cast<std::uint16_t>(
                catalog.class_at_channel(best_stuff).class_id),
            0, 0);
  }

  // Small stuff regions (4-connected, same semantic id) become void.
  if (config.min_stuff > 0) {
    std::vector<char> visited(plane, 0);
    std::vector<std::size_t> stack;
    std::vector<std::size_t> region;
    for (std::size_t seed = 0; seed < plane; ++seed) {
      const std::uint16_t s = map.semantic[seed];
      if (visited[seed] || s == kVoidId || !catalog.has_class(s) ||
          catalog.class_def(s).kind != ClassKind::kStuff) {
        continue;
      }
      region.clear();
      stack.assign(1, seed);
      visited[seed] = 1;
      while (!stack.empty()) {
        const std::size_t p = stack.back();
        stack.pop_back();
        region.push_back(p);
        const int x = static_cast<int>(p % w);
        const int y = static_cast<int>(p / w);
        const int nx[4] = {x - 1, x + 1, x, x};
        const int ny[4] = {y, y, y - 1, y + 1};
        for (int n = 0; n < 4; ++n) {
          if (nx[n] < 0 || nx[n] >= w || ny[n] < 0 || ny[n] >= h) {
            continue;
          }
          const std::size_t q = static_cast<std::size_t>(ny[n]) * w + nx[n];
          if (!visited[q] && map.semantic[q] == s) {
            visited[q] = 1;
            stack.push_back(q);
          }
        }
      }
      if (region.size() < static_cast<std::size_t>(config.min_stuff)) {
        for (std::size_t p : region) {
          map.set_void(p);
        }
      }
    }
  }

  return map;
}

}  // namespace jppf
