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
#include "jppf/synth.hpp"
#include "jppf/tensor.hpp"

using namespace jppf;

namespace {

Tensor random_tensor(std::vector<std::size_t> dims, SplitMix64& rng,
                     double lo = -6.0, double hi = 6.0) {
  Tensor t(std::move(dims));
  for (float& v : t.data()) {
    v = static_cast<float>(rng.uniform(lo, hi));
  }
  return t;
}

}  // namespace

TEST_CASE("tensor construction validates dims") {
  CHECK_THROWS_AS(Tensor(std::vector<std::size_t>{}), ShapeError);
  CHECK_THROWS_AS(Tensor({2, 0, 3}), ShapeError);
  CHECK_THROWS_AS(Tensor({2, 2}, std::vector<float>(3)), ShapeError);
  const Tensor t({2, 3, 4});
  CHECK(t.size() == 24);
}

TEST_CASE("softmax_channels basics") {
  SUBCASE("symmetric logits split evenly") {
    Tensor t({2, 1, 1}, {0.0f, 0.0f});
    const Tensor s = softmax_channels(t);
    CHECK(s.at(0, 0, 0) == doctest::Approx(0.5));
    CHECK(s.at(1, 0, 0) == doctest::Approx(0.5));
  }
  SUBCASE("ln 2 margin gives 2/3 vs 1/3") {
    Tensor t({2, 1, 1}, {std::log(2.0f), 0.0f});
    const Tensor s = softmax_channels(t);
    CHECK(s.at(0, 0, 0) == doctest::Approx(2.0 / 3).epsilon(1e-6));
    CHECK(s.at(1, 0, 0) == doctest::Approx(1.0 / 3).epsilon(1e-6));
  }
  SUBCASE("extreme logits are stabilized") {
    Tensor t({2, 1, 1}, {-1000.0f, 0.0f});
    const Tensor s = softmax_channels(t);
    CHECK(std::isfinite(s.at(0, 0, 0)));
    CHECK(s.at(0, 0, 0) == doctest::Approx(0.0));
    CHECK(s.at(1, 0, 0) == doctest::Approx(1.0));
  }
  SUBCASE("wrong rank is rejected") {
    CHECK_THROWS_AS(softmax_channels(Tensor({2, 2})), ShapeError);
  }
}

TEST_CASE("softmax_channels properties on random tensors") {
  SplitMix64 rng(7);
  for (int it = 0; it < 20; ++it) {
    const Tensor t = random_tensor({5, 3, 4}, rng);
    const Tensor s = softmax_channels(t);
    const std::size_t plane = t.height() * t.width();
    for (std::size_t px = 0; px < plane; ++px) {
      double sum = 0.0;
      for (std::size_t c = 0; c < t.channels(); ++c) {
        const float v = s.data()[c * plane + px];
        CHECK(v > 0.0f);
        sum += v;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
    }

    // invariance to a per-pixel constant shift
    Tensor shifted = t;
    for (std::size_t px = 0; px < plane; ++px) {
      const float delta = static_cast<float>(rng.uniform(-3.0, 3.0));
      for (std::size_t c = 0; c < t.channels(); ++c) {
        shifted.data()[c * plane + px] += delta;
      }
    }
    const Tensor s2 = softmax_channels(shifted);
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(s.data()[i] == doctest::Approx(s2.data()[i]).epsilon(1e-6));
    }

    // softmax preserves the argmax
    CHECK(argmax_channels(s) == argmax_channels(t));
  }
}

TEST_CASE("mask_by_bbox") {
  SUBCASE("interior box keeps only the interior") {
    Tensor t({1, 4, 4}, 1.0f);
    const Tensor m = mask_by_bbox(t, {1, 1, 3, 3});
    for (std::size_t y = 0; y < 4; ++y) {
      for (std::size_t x = 0; x < 4; ++x) {
        const bool inside = x >= 1 && x < 3 && y >= 1 && y < 3;
        CHECK(m.at(0, y, x) == (inside ? 1.0f : 0.0f));
      }
    }
  }
  SUBCASE("full box is the identity") {
    SplitMix64 rng(3);
    const Tensor t = random_tensor({2, 3, 5}, rng);
    CHECK(mask_by_bbox(t, {0, 0, 5, 3}) == t);
  }
  SUBCASE("single pixel box") {
    Tensor t({1, 2, 2}, {1, 2, 3, 4});
    const Tensor m = mask_by_bbox(t, {0, 0, 1, 1});
    CHECK(m.at(0, 0, 0) == 1.0f);
    CHECK(m.at(0, 0, 1) == 0.0f);
    CHECK(m.at(0, 1, 0) == 0.0f);
    CHECK(m.at(0, 1, 1) == 0.0f);
  }
  SUBCASE("masking is idempotent") {
    SplitMix64 rng(11);
    const Tensor t = random_tensor({3, 6, 7}, rng);
    const BBox box{2, 1, 6, 5};
    const Tensor once = mask_by_bbox(t, box);
    CHECK(mask_by_bbox(once, box) == once);
  }
  SUBCASE("out of bounds box is rejected") {
    Tensor t({1, 4, 4}, 0.0f);
    CHECK_THROWS_AS(mask_by_bbox(t, {0, 0, 5, 4}), BoundsError);
    CHECK_THROWS_AS(mask_by_bbox(t, {2, 2, 2, 3}), BoundsError);
    CHECK_THROWS_AS(mask_by_bbox(t, {-1, 0, 2, 2}), BoundsError);
  }
}

TEST_CASE("argmax_channels") {
  SUBCASE("picks the larger channel") {
    Tensor t({2, 1, 1}, {0.1f, 0.9f});
    CHECK(argmax_channels(t) == std::vector<std::int32_t>{1});
  }
  SUBCASE("exact ties break to the lowest index") {
    Tensor t({3, 1, 1}, {0.5f, 0.5f, 0.5f});
    CHECK(argmax_channels(t) == std::vector<std::int32_t>{0});
  }
  SUBCASE("single channel is zero everywhere") {
    Tensor t({1, 2, 2}, {5, -1, 0, 2});
    CHECK(argmax_channels(t) ==
          std::vector<std::int32_t>{0, 0, 0, 0});
  }
}

TEST_CASE("paste_into_canvas places the patch at the box") {
  Tensor patch({1, 2, 2}, {1, 2, 3, 4});
  const Tensor canvas = paste_into_canvas(patch, {1, 0, 3, 2}, 3, 4);
  CHECK(canvas.at(0, 0, 1) == 1.0f);
  CHECK(canvas.at(0, 0, 2) == 2.0f);
  CHECK(canvas.at(0, 1, 1) == 3.0f);
  CHECK(canvas.at(0, 1, 2) == 4.0f);
  CHECK(canvas.at(0, 0, 0) == 0.0f);
  CHECK(canvas.at(0, 2, 3) == 0.0f);
  CHECK_THROWS_AS(paste_into_canvas(patch, {0, 0, 3, 2}, 3, 4), ShapeError);
}
