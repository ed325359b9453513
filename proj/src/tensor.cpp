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

#include "jppf/tensor.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "jppf/errors.hpp"
#include "jppf/parallel.hpp"

namespace jppf {

namespace {

std::size_t checked_size(const std::vector<std::size_t>& dims) {
  if (dims.empty()) {
    throw ShapeError("tensor dims must be non-empty");
  }
  std::size_t n = 1;
  for (std::size_t d : dims) {
    if (d == 0) {
      throw ShapeError("tensor extents must be >= 1");
    }
    n *= d;
  }
  return n;
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> dims, float fill)
    : dims_(std::move(dims)), data_(checked_size(dims_), fill) {}

Tensor::Tensor(std::vector<std::size_t> dims, std::vector<float> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
  if (checked_size(dims_) != data_.size()) {
    throw ShapeError("tensor data length does not match product of dims");
  }
}

void Tensor::require_rank(std::size_t rank, const char* what) const {
  if (dims_.size() != rank) {
    throw ShapeError(std::string(what) + ": expected rank " +
                     std::to_string(rank) + " tensor, got rank " +
                     std::to_string(dims_.size()));
  }
}

Tensor softmax_channels(const Tensor& t, int threads) {
  t.require_rank(3, "softmax_channels");
  const std::size_t c_n = t.channels();
  const std::size_t plane = t.height() * t.width();
  Tensor out(t.dims());
  const float* in = t.data().data();
  float* dst = out.data().data();
  parallel_for(plane, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      float max_v = in[p];
      for (std::size_t c = 1; c < c_n; ++c) {
        max_v = std::max(max_v, in[c * plane + p]);
      }
      float denom = 0.0f;
      for (std::size_t c = 0; c < c_n; ++c) {
        const float e = std::exp(in[c * plane + p] - max_v);
        dst[c * plane + p] = e;
        denom += e;
      }
      for (std::size_t c = 0; c < c_n; ++c) {
        dst[c * plane + p] /= denom;
      }
    }
  });
  return out;
}

void require_box_within(const BBox& box, std::size_t h, std::size_t w) {
  if (box.x0 < 0 || box.y0 < 0 || box.x0 >= box.x1 || box.y0 >= box.y1 ||
      static_cast<std::size_t>(box.x1) > w ||
      static_cast<std::size_t>(box.y1) > h) {
    throw BoundsError("box [" + std::to_string(box.x0) + "," +
                      std::to_string(box.y0) + "," + std::to_string(box.x1) +
                      "," + std::to_string(box.y1) + ") out of bounds for " +
                      std::to_string(w) + "x" + std::to_string(h));
  }
}

Tensor mask_by_bbox(const Tensor& t, const BBox& box) {
  t.require_rank(3, "mask_by_bbox");
  require_box_within(box, t.height(), t.width());
  Tensor out(t.dims());
  const std::size_t w = t.width();
  for (std::size_t c = 0; c < t.channels(); ++c) {
    const float* src = t.channel(c);
    float* dst = out.channel(c);
    for (int y = box.y0; y < box.y1; ++y) {
      for (int x = box.x0; x < box.x1; ++x) {
        dst[y * w + x] = src[y * w + x];
      }
    }
  }
  return out;
}

std::vector<std::int32_t> argmax_channels(const Tensor& t) {
  t.require_rank(3, "argmax_channels");
  const std::size_t c_n = t.channels();
  const std::size_t plane = t.height() * t.width();
  std::vector<std::int32_t> out(plane, 0);
  const float* in = t.data().data();
  for (std::size_t p = 0; p < plane; ++p) {
    float best = in[p];
    std::int32_t best_c = 0;
    for (std::size_t c = 1; c < c_n; ++c) {
      const float v = in[c * plane + p];
      if (v > best) {
        best = v;
        best_c = static_cast<std::int32_t>(c);
      }
    }
    out[p] = best_c;
  }
  return out;
}

Tensor paste_into_canvas(const Tensor& patch, const BBox& box, std::size_t h,
                         std::size_t w) {
  patch.require_rank(3, "paste_into_canvas");
  require_box_within(box, h, w);
  if (patch.channels() != 1 ||
      patch.height() != static_cast<std::size_t>(box.height()) ||
      patch.width() != static_cast<std::size_t>(box.width())) {
    throw ShapeError("patch extents do not match the target box");
  }
  Tensor out({1, h, w});
  float* dst = out.channel(0);
  const float* src = patch.channel(0);
  for (int y = box.y0; y < box.y1; ++y) {
    for (int x = box.x0; x < box.x1; ++x) {
      dst[y * w + x] = src[(y - box.y0) * box.width() + (x - box.x0)];
    }
  }
  return out;
}

}  // namespace jppf
