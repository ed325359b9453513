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

#ifndef JPPF_TENSOR_HPP_
#define JPPF_TENSOR_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

namespace jppf {

/// Axis-aligned pixel box, half-open: [x0, x1) x [y0, y1).
struct BBox {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  int area() const { return width() * height(); }

  bool operator==(const BBox&) const = default;
};

/// N-dimensional row-major float32 array. Outermost extent first, so channel
/// tensors are [C, H, W]. Deliberately minimal: a shape-tagged buffer, not a
/// tensor-algebra library.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::vector<std::size_t> dims, float fill = 0.0f);
  Tensor(std::vector<std::size_t> dims, std::vector<float> data);

  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t ndim() const { return dims_.size(); }
  std::size_t size() const { return data_.size(); }

  const std::vector<float>& data() const { return data_; }
  std::vector<float>& data() { return data_; }

  // [C,H,W] accessors; valid only for rank-3 tensors.
  std::size_t channels() const { return dims_[0]; }
  std::size_t height() const { return dims_[1]; }
  std::size_t width() const { return dims_[2]; }

  float at(std::size_t c, std::size_t y, std::size_t x) const {
    return data_[(c * dims_[1] + y) * dims_[2] + x];
  }
  float& at(std::size_t c, std::size_t y, std::size_t x) {
    return data_[(c * dims_[1] + y) * dims_[2] + x];
  }

  /// Pointer to the start of channel c (rank-3 tensors).
  const float* channel(std::size_t c) const {
    return data_.data() + c * dims_[1] * dims_[2];
  }
  float* channel(std::size_t c) {
    return data_.data() + c * dims_[1] * dims_[2];
  }

  bool operator==(const Tensor&) const = default;

  /// Throws ShapeError unless the tensor has the given rank.
  void require_rank(std::size_t rank, const char* what) const;

 private:
  std::vector<std::size_t> dims_;
  std::vector<float> data_;
};

/// Channel-wise softmax of a [C,H,W] tensor: per pixel, exponentials are
/// stabilized by the per-pixel channel maximum and normalized to sum to 1.
Tensor softmax_channels(const Tensor& t, int threads = 1);

/// Copies values inside `box`, zeroes everything outside. The zero fill makes
/// masked logits inert in the fused canvas (the fused score of an all-zero
/// logit set is exactly 0).
Tensor mask_by_bbox(const Tensor& t, const BBox& box);

/// Per-pixel channel argmax of a [C,H,W] tensor. Ties break to the lowest
/// channel index.
std::vector<std::int32_t> argmax_channels(const Tensor& t);

/// Pastes a [1,bh,bw] patch into a zero canvas of extent [1,h,w] at `box`.
/// Patch extents must match the box.
Tensor paste_into_canvas(const Tensor& patch, const BBox& box, std::size_t h,
                         std::size_t w);

/// Throws BoundsError unless `box` is non-degenerate and within [0,w)x[0,h).
void require_box_within(const BBox& box, std::size_t h, std::size_t w);

}  // namespace jppf

#endif  // JPPF_TENSOR_HPP_
