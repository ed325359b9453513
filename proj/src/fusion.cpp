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

#include "jppf/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "jppf/errors.hpp"
#include "jppf/parallel.hpp"

namespace jppf {

int default_min_stuff(int height, int width) {
  const double reference_area = 1024.0 * 2048.0;
  const double area = static_cast<double>(height) * width;
  return static_cast<int>(std::llround(2048.0 * area / reference_area));
}

namespace {

inline float sigmoidf(float x) { return 1.0f / (1.0f + std::exp(-x)); }

inline void sort2(float& a, float& b) {
  if (b < a) {
    std::swap(a, b);
  }
}

// Sums inside the fusion rule run in ascending value order. Float addition
// commutes but does not associate, so a canonical order is what makes the
// fused result bit-exactly invariant to the order of the logit sets.
inline float fuse2(float a, float b) {
  sort2(a, b);
  return (sigmoidf(a) + sigmoidf(b)) * (a + b);
}

// fuse2 with the sigmoid of b precomputed; bit-identical since the sigmoid
// of a given input never changes.
inline float fuse2_cached(float a, float b, float sig_b) {
  if (b < a) {
    return (sig_b + sigmoidf(a)) * (b + a);
  }
  return (sigmoidf(a) + sig_b) * (a + b);
}

inline float fuse3(float a, float b, float c) {
  sort2(a, b);
  sort2(b, c);
  sort2(a, b);
  return (sigmoidf(a) + sigmoidf(b) + sigmoidf(c)) * ((a + b) + c);
}

void require_heads(const Tensor& sem, const ClassCatalog& catalog) {
  sem.require_rank(3, "semantic logits");
  if (sem.channels() != static_cast<std::size_t>(catalog.num_classes())) {
    throw ShapeError("semantic tensor has " + std::to_string(sem.channels()) +
                     " channels but the catalog defines " +
                     std::to_string(catalog.num_classes()) + " classes");
  }
}

void require_heads(const Tensor& sem, const Tensor& parts,
                   const ClassCatalog& catalog) {
  require_heads(sem, catalog);
  parts.require_rank(3, "part logits");
  if (parts.channels() !=
      static_cast<std::size_t>(catalog.n_part_channels())) {
    throw ShapeError("part tensor has " + std::to_string(parts.channels()) +
                     " channels but the catalog defines " +
                     std::to_string(catalog.n_part_channels()));
  }
  if (parts.height() != sem.height() || parts.width() != sem.width()) {
    throw ShapeError("semantic and part tensors disagree on H x W");
  }
}

const ClassDef& require_thing(const ClassCatalog& catalog, int class_id) {
  const ClassDef& def = catalog.class_def(class_id);
  if (def.kind != ClassKind::kThing) {
    throw CatalogError("detection class " + std::to_string(class_id) + " (" +
                       def.name + ") is not a thing class");
  }
  return def;
}

}  // namespace

Tensor fuse_masked_logits(const std::vector<Tensor>& logit_sets) {
  if (logit_sets.empty()) {
    throw ShapeError("fuse_masked_logits: empty logit set list");
  }
  for (const auto& t : logit_sets) {
    if (t.dims() != logit_sets.front().dims()) {
      throw ShapeError("fuse_masked_logits: logit sets differ in shape");
    }
  }
  const std::size_t k = logit_sets.size();
  const std::size_t n = logit_sets.front().size();
  Tensor out(logit_sets.front().dims());
  std::vector<float> values(k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < k; ++l) {
      values[l] = logit_sets[l].data()[i];
    }
    std::sort(values.begin(), values.end());
    float sig_sum = 0.0f;
    float logit_sum = 0.0f;
    for (std::size_t l = 0; l < k; ++l) {
      sig_sum += sigmoidf(values[l]);
    }
    for (std::size_t l = 0; l < k; ++l) {
      logit_sum += values[l];
    }
    out.data()[i] = sig_sum * logit_sum;
  }
  return out;
}

MaskedLogits build_masked_logits(const Detection& det, const Tensor& sem,
                                 const Tensor& parts,
                                 const ClassCatalog& catalog) {
  require_heads(sem, parts, catalog);
  require_valid(det);
  require_thing(catalog, det.class_id);
  require_box_within(det.box, sem.height(), sem.width());

  const std::vector<int> part_channels =
      part_channels_for_class(catalog, det.class_id);
  const std::size_t p = part_channels.size();
  const std::size_t h = sem.height();
  const std::size_t w = sem.width();

  MaskedLogits out{Tensor({p, h, w}), Tensor({p, h, w}), Tensor({p, h, w})};

  const float* class_plane = sem.channel(catalog.channel_of(det.class_id));
  const Tensor pasted = paste_into_canvas(det.mask_logits, det.box, h, w);
  for (std::size_t k = 0; k < p; ++k) {
    float* mls = out.semantic.channel(k);
    float* mli = out.instance.channel(k);
    float* mlp = out.part.channel(k);
    const float* part_plane = parts.channel(part_channels[k]);
    for (int y = det.box.y0; y < det.box.y1; ++y) {
      for (int x = det.box.x0; x < det.box.x1; ++x) {
        const std::size_t px = y * w + x;
        mls[px] = class_plane[px];
        mli[px] = pasted.channel(0)[px];
        mlp[px] = part_plane[px];
      }
    }
  }
  return out;
}

FusedLogitStack fuse_instance(const Detection& det, const Tensor& sem,
                              const Tensor& parts,
                              const ClassCatalog& catalog) {
  MaskedLogits ml = build_masked_logits(det, sem, parts, catalog);
  FusedLogitStack stack;
  stack.logits = fuse_masked_logits({ml.semantic, ml.instance, ml.part});
  for (int channel : part_channels_for_class(catalog, det.class_id)) {
    stack.legend.push_back({static_cast<std::uint16_t>(det.class_id),
                            static_cast<std::uint16_t>(channel),
                            static_cast<std::uint16_t>(det.instance_id)});
  }
  return stack;
}

FusedLogitStack fuse_stuff(const Tensor& sem, const Tensor& parts,
                           const ClassCatalog& catalog) {
  require_heads(sem, parts, catalog);
  const std::size_t h = sem.height();
  const std::size_t w = sem.width();
  const auto& stuff = catalog.stuff_channels();

  FusedLogitStack stack;
  if (stuff.empty()) {
    return stack;  // no stuff classes: empty stack, nothing to fuse
  }
  stack.logits = Tensor({stuff.size(), h, w});
  const float* background = parts.channel(0);
  for (std::size_t j = 0; j < stuff.size(); ++j) {
    const float* sem_plane = sem.channel(stuff[j]);
    float* dst = stack.logits.channel(j);
    for (std::size_t px = 0; px < h * w; ++px) {
      dst[px] = fuse2(sem_plane[px], background[px]);
    }
    stack.legend.push_back(
        {static_cast<std::uint16_t>(
             catalog.class_at_channel(stuff[j]).class_id),
         0, 0});
  }
  return stack;
}

namespace {

// Per-pixel argmax over the two candidate streams (instances, then stuff),
// preserving lowest-channel-index tie breaking. Instance channels are zero
// outside their boxes, so the zero of the first not-covering instance is a
// candidate too.
struct Winner {
  float value;
  int index;  // global channel index, -1 when no channel exists
};

inline void merge_candidate(Winner& best, float value, int index) {
  if (best.index < 0 || value > best.value ||
      (value == best.value && index < best.index)) {
    best = {value, index};
  }
}

int stuff_fill_class(const Tensor& sem, const std::vector<int>& stuff_channels,
                     const ClassCatalog& catalog, std::size_t px,
                     std::size_t plane) {
  if (stuff_channels.empty()) {
    return 0;
  }
  const float* data = sem.data().data();
  float best = data[static_cast<std::size_t>(stuff_channels[0]) * plane + px];
  int best_ch = stuff_channels[0];
  for (std::size_t j = 1; j < stuff_channels.size(); ++j) {
    const float v =
        data[static_cast<std::size_t>(stuff_channels[j]) * plane + px];
    if (v > best) {
      best = v;
      best_ch = stuff_channels[j];
    }
  }
  return catalog.class_at_channel(best_ch).class_id;
}

void filter_small_stuff(LabelMap& map, const ClassCatalog& catalog,
                        int min_stuff) {
  if (min_stuff <= 0) {
    return;
  }
  int max_id = 0;
  for (const auto& c : catalog.classes()) {
    max_id = std::max(max_id, c.class_id);
  }
  std::vector<char> is_stuff(max_id + 1, 0);
  for (const auto& c : catalog.classes()) {
    if (c.kind == ClassKind::kStuff && c.class_id >= 0) {
      is_stuff[c.class_id] = 1;
    }
  }

  const int w = map.width;
  const int h = map.height;
  std::vector<char> visited(map.pixels(), 0);
  std::vector<std::size_t> stack;
  std::vector<std::size_t> region;
  for (std::size_t seed = 0; seed < map.pixels(); ++seed) {
    const std::uint16_t s = map.semantic[seed];
    if (visited[seed] || s == kVoidId || s > max_id || !is_stuff[s]) {
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
    if (region.size() < static_cast<std::size_t>(min_stuff)) {
      for (std::size_t p : region) {
        map.set_void(p);
      }
    }
  }
}

// One fused instance living only inside its box: `values` holds the P
// channel planes restricted to the box, row-major per channel.
struct BoxStack {
  BBox box;
  int first_channel = 0;
  int channels = 0;
  std::vector<float> values;  // channels * box_h * box_w
  std::vector<LegendEntry> legend;
};

// Shared canvas assembly for the fast paths. StuffValue computes the j-th
// stuff candidate channel at a pixel; stuff legends map j to a class id.
template <typename StuffValue>
LabelMap assemble_fast(const std::vector<BoxStack>& instances,
                       int instance_channels, StuffValue&& stuff_value,
                       const std::vector<LegendEntry>& stuff_legend,
                       const Tensor& sem, const ClassCatalog& catalog,
                       const FusionConfig& config, int threads) {
  const std::size_t h = sem.height();
  const std::size_t w = sem.width();
  const std::size_t plane = h * w;
  LabelMap map(static_cast<int>(w), static_cast<int>(h));

  std::vector<float> best_val(plane, -std::numeric_limits<float>::infinity());
  std::vector<std::int32_t> best_idx(plane, -1);

  // Instance channels in order; per-pixel updates keep the first channel
  // attaining the maximum.
  for (const auto& inst : instances) {
    const int bw = inst.box.width();
    const int bh = inst.box.height();
    for (int k = 0; k < inst.channels; ++k) {
      const float* values = inst.values.data() +
                            static_cast<std::size_t>(k) * bw * bh;
      const int channel = inst.first_channel + k;
      parallel_for(bh, threads, [&](std::size_t row0, std::size_t row1) {
        for (std::size_t by = row0; by < row1; ++by) {
          const std::size_t y = inst.box.y0 + by;
          for (int bx = 0; bx < bw; ++bx) {
            const std::size_t px = y * w + inst.box.x0 + bx;
            const float v = values[by * bw + bx];
            if (best_idx[px] < 0 || v > best_val[px]) {
              best_val[px] = v;
              best_idx[px] = channel;
            }
          }
        }
      });
    }
  }

  const auto& stuff_channels = catalog.stuff_channels();
  const int n_stuff = static_cast<int>(stuff_legend.size());

  parallel_for(plane, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t px = begin; px < end; ++px) {
      Winner best{best_val[px], best_idx[px]};
      if (instance_channels > 0) {
        // The zero contributed by the first instance whose box misses this
        // pixel competes as well.
        int first_out = -1;
        int offset = 0;
        for (const auto& inst : instances) {
          const int x = static_cast<int>(px % w);
          const int y = static_cast<int>(px / w);
          if (x < inst.box.x0 || x >= inst.box.x1 || y < inst.box.y0 ||
              y >= inst.box.y1) {
            first_out = offset;
            break;
          }
          offset += inst.channels;
        }
        if (first_out >= 0) {
          merge_candidate(best, 0.0f, first_out);
        }
      }
      for (int j = 0; j < n_stuff; ++j) {
        merge_candidate(best, stuff_value(j, px), instance_channels + j);
      }

      bool thing = false;
      if (best.index >= 0 && best.index < instance_channels) {
        // Locate the owning instance; boxes are few, linear scan is fine.
        for (const auto& inst : instances) {
          if (best.index < inst.first_channel + inst.channels) {
            const LegendEntry& e =
                inst.legend[best.index - inst.first_channel];
            map.set(px, e.semantic_id, e.part_id, e.instance_id);
            thing = true;
            break;
          }
        }
      }
      if (!thing) {
        const int fill =
            stuff_fill_class(sem, stuff_channels, catalog, px, plane);
        if (fill == 0) {
          map.set_void(px);
        } else {
          map.set(px, static_cast<std::uint16_t>(fill), 0, 0);
        }
      }
    }
  });

  filter_small_stuff(map, catalog, config.min_stuff);
  return map;
}

}  // namespace

LabelMap assemble_canvas(const std::vector<FusedLogitStack>& instance_stacks,
                         const FusedLogitStack& stuff_stack, const Tensor& sem,
                         const ClassCatalog& catalog,
                         const FusionConfig& config) {
  require_heads(sem, catalog);
  const std::size_t h = sem.height();
  const std::size_t w = sem.width();
  const std::size_t plane = h * w;

  // Concatenated channel view: instance stacks first, then stuff.
  std::vector<const float*> channels;
  std::vector<LegendEntry> legend;
  for (const auto& stack : instance_stacks) {
    if (stack.legend.size() != stack.logits.channels() ||
        stack.logits.height() != h || stack.logits.width() != w) {
      throw ShapeError("instance stack does not match the canvas extents");
    }
    for (std::size_t k = 0; k < stack.legend.size(); ++k) {
      channels.push_back(stack.logits.channel(k));
      legend.push_back(stack.legend[k]);
    }
  }
  if (!stuff_stack.legend.empty()) {
    if (stuff_stack.logits.ndim() != 3 || stuff_stack.logits.height() != h ||
        stuff_stack.logits.width() != w) {
      throw ShapeError("stuff stack does not match the canvas extents");
    }
    for (std::size_t k = 0; k < stuff_stack.legend.size(); ++k) {
      channels.push_back(stuff_stack.logits.channel(k));
      legend.push_back(stuff_stack.legend[k]);
    }
  }

  LabelMap map(static_cast<int>(w), static_cast<int>(h));
  const auto& stuff_channels = catalog.stuff_channels();
  for (std::size_t px = 0; px < plane; ++px) {
    int best = -1;
    float best_v = 0.0f;
    for (std::size_t k = 0; k < channels.size(); ++k) {
      const float v = channels[k][px];
      if (best < 0 || v > best_v) {
        best = static_cast<int>(k);
        best_v = v;
      }
    }
    if (best >= 0 && legend[best].is_thing()) {
      map.set(px, legend[best].semantic_id, legend[best].part_id,
              legend[best].instance_id);
    } else {
      const int fill = stuff_fill_class(sem, stuff_channels, catalog, px, plane);
      if (fill == 0) {
        map.set_void(px);
      } else {
        map.set(px, static_cast<std::uint16_t>(fill), 0, 0);
      }
    }
  }
  filter_small_stuff(map, catalog, config.min_stuff);
  return map;
}

namespace {

// Builds the fused per-part box values for one detection without
// materializing full-resolution tensors. Arithmetic matches
// fuse_masked_logits on the materialized masked logits bit for bit.
BoxStack fuse_instance_box(const Detection& det, const Tensor& sem,
                           const Tensor& parts, const ClassCatalog& catalog,
                           int first_channel) {
  const std::vector<int> part_channels =
      part_channels_for_class(catalog, det.class_id);
  const std::size_t w = sem.width();
  BoxStack out;
  out.box = det.box;
  out.first_channel = first_channel;
  out.channels = static_cast<int>(part_channels.size());
  const int bw = det.box.width();
  const int bh = det.box.height();
  out.values.resize(static_cast<std::size_t>(out.channels) * bw * bh);

  const float* class_plane = sem.channel(catalog.channel_of(det.class_id));
  const float* mask = det.mask_logits.channel(0);
  for (int k = 0; k < out.channels; ++k) {
    const float* part_plane = parts.channel(part_channels[k]);
    float* dst = out.values.data() + static_cast<std::size_t>(k) * bw * bh;
    for (int by = 0; by < bh; ++by) {
      const std::size_t y = det.box.y0 + by;
      for (int bx = 0; bx < bw; ++bx) {
        const std::size_t px = y * w + det.box.x0 + bx;
        dst[by * bw + bx] =
            fuse3(class_plane[px], mask[by * bw + bx], part_plane[px]);
      }
    }
    out.legend.push_back({static_cast<std::uint16_t>(det.class_id),
                          static_cast<std::uint16_t>(part_channels[k]),
                          static_cast<std::uint16_t>(det.instance_id)});
  }
  return out;
}

BoxStack fuse_instance_box_two(const Detection& det, const Tensor& sem,
                               const ClassCatalog& catalog,
                               int first_channel) {
  const std::size_t w = sem.width();
  BoxStack out;
  out.box = det.box;
  out.first_channel = first_channel;
  out.channels = 1;
  const int bw = det.box.width();
  const int bh = det.box.height();
  out.values.resize(static_cast<std::size_t>(bw) * bh);

  const float* class_plane = sem.channel(catalog.channel_of(det.class_id));
  const float* mask = det.mask_logits.channel(0);
  for (int by = 0; by < bh; ++by) {
    const std::size_t y = det.box.y0 + by;
    for (int bx = 0; bx < bw; ++bx) {
      const std::size_t px = y * w + det.box.x0 + bx;
      out.values[by * bw + bx] = fuse2(class_plane[px], mask[by * bw + bx]);
    }
  }
  out.legend.push_back({static_cast<std::uint16_t>(det.class_id), 0,
                        static_cast<std::uint16_t>(det.instance_id)});
  return out;
}

void validate_detections(const DetectionSet& dets, const Tensor& sem,
                         const ClassCatalog& catalog) {
  for (const auto& det : dets) {
    require_valid(det);
    require_thing(catalog, det.class_id);
    require_box_within(det.box, sem.height(), sem.width());
  }
}

}  // namespace

LabelMap jppf(const Tensor& sem_logits, const Tensor& part_logits,
              const DetectionSet& dets, const ClassCatalog& catalog,
              const FusionConfig& config, int threads) {
  require_heads(sem_logits, part_logits, catalog);
  validate_detections(dets, sem_logits, catalog);

  const Tensor sem = config.normalize_heads
                         ? softmax_channels(sem_logits, threads)
                         : sem_logits;
  const Tensor parts = config.normalize_heads
                           ? softmax_channels(part_logits, threads)
                           : part_logits;

  const DetectionSet kept = filter_detections(dets, config);

  std::vector<BoxStack> instances(kept.size());
  int next_channel = 0;
  std::vector<int> offsets(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    offsets[i] = next_channel;
    next_channel += static_cast<int>(
        part_channels_for_class(catalog, kept[i].class_id).size());
  }
  parallel_for(kept.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      instances[i] = fuse_instance_box(kept[i], sem, parts, catalog,
                                       offsets[i]);
    }
  });

  const auto& stuff_channels = catalog.stuff_channels();
  std::vector<LegendEntry> stuff_legend;
  stuff_legend.reserve(stuff_channels.size());
  for (int ch : stuff_channels) {
    stuff_legend.push_back(
        {static_cast<std::uint16_t>(catalog.class_at_channel(ch).class_id), 0,
         0});
  }

  // The background channel is fused with every stuff channel; its sigmoid is
  // worth computing once per pixel.
  const std::size_t plane = sem.height() * sem.width();
  const float* background = parts.channel(0);
  std::vector<float> sig_background(plane);
  parallel_for(plane, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t px = begin; px < end; ++px) {
      sig_background[px] = sigmoidf(background[px]);
    }
  });
  const float* sem_data = sem.data().data();
  auto stuff_value = [&](int j, std::size_t px) {
    return fuse2_cached(
        sem_data[static_cast<std::size_t>(stuff_channels[j]) * plane + px],
        background[px], sig_background[px]);
  };
  return assemble_fast(instances, next_channel, stuff_value, stuff_legend,
                       sem, catalog, config, threads);
}

LabelMap panoptic_fuse_two(const Tensor& sem_logits, const DetectionSet& dets,
                           const ClassCatalog& catalog,
                           const FusionConfig& config, int threads) {
  require_heads(sem_logits, catalog);
  validate_detections(dets, sem_logits, catalog);

  const Tensor sem = config.normalize_heads
                         ? softmax_channels(sem_logits, threads)
                         : sem_logits;

  const DetectionSet kept = filter_detections(dets, config);

  std::vector<BoxStack> instances(kept.size());
  parallel_for(kept.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      instances[i] = fuse_instance_box_two(kept[i], sem, catalog,
                                           static_cast<int>(i));
    }
  });

  const auto& stuff_channels = catalog.stuff_channels();
  std::vector<LegendEntry> stuff_legend;
  for (int ch : stuff_channels) {
    stuff_legend.push_back(
        {static_cast<std::uint16_t>(catalog.class_at_channel(ch).class_id), 0,
         0});
  }

  // Without a part head there is nothing to fuse stuff with; the semantic
  // channels pass through directly.
  const std::size_t plane = sem.height() * sem.width();
  const float* sem_data = sem.data().data();
  auto stuff_value = [&](int j, std::size_t px) {
    return sem_data[static_cast<std::size_t>(stuff_channels[j]) * plane + px];
  };
  return assemble_fast(instances, static_cast<int>(kept.size()), stuff_value,
                       stuff_legend, sem, catalog, config, threads);
}

}  // namespace jppf
