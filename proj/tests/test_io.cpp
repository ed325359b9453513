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
#include <cstring>
#include <sstream>

#include "jppf/errors.hpp"
#include "jppf/io.hpp"
#include "jppf/synth.hpp"

using namespace jppf;

namespace {

// Random finite float from raw bits (exponent forced below the inf/nan
// range); keeps negative zero and denormals in play.
float random_finite(SplitMix64& rng) {
  while (true) {
    std::uint32_t bits = static_cast<std::uint32_t>(rng.next());
    if (((bits >> 23) & 0xFF) == 0xFF) {
      continue;
    }
    float f;
    std::memcpy(&f, &bits, sizeof(f));
    return f;
  }
}

}  // namespace

TEST_CASE("tensor container round-trips bit-exactly") {
  SplitMix64 rng(99);
  Tensor t({3, 5, 7});
  for (float& v : t.data()) {
    v = random_finite(rng);
  }
  t.data()[0] = -0.0f;
  std::stringstream buffer;
  write_tensor(buffer, t);
  const Tensor back = read_tensor(buffer);
  REQUIRE(back.dims() == t.dims());
  CHECK(std::memcmp(back.data().data(), t.data().data(),
                    t.size() * sizeof(float)) == 0);
}

TEST_CASE("label map and part map containers round-trip") {
  SplitMix64 rng(5);
  LabelMap m(9, 4);
  for (std::size_t i = 0; i < m.pixels(); ++i) {
    m.semantic[i] = static_cast<std::uint16_t>(rng.next());
    m.part[i] = static_cast<std::uint16_t>(rng.next());
    m.instance[i] = static_cast<std::uint16_t>(rng.next());
  }
  std::stringstream buffer;
  write_label_map(buffer, m);
  CHECK(read_label_map(buffer) == m);

  PartSegMap p(6, 3);
  for (auto& v : p.ids) {
    v = static_cast<std::uint16_t>(rng.next());
  }
  std::stringstream buffer2;
  write_part_map(buffer2, p);
  CHECK(read_part_map(buffer2) == p);
}

TEST_CASE("malformed containers raise distinct errors") {
  Tensor t({2, 2}, {1, 2, 3, 4});
  std::stringstream good;
  write_tensor(good, t);
  const std::string bytes = good.str();

  SUBCASE("bad magic") {
    std::string broken = bytes;
    broken[0] = 'X';
    broken[1] = 'X';
    broken[2] = 'X';
    broken[3] = 'X';
    std::stringstream s(broken);
    try {
      read_tensor(s);
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(e.kind() == FormatError::Kind::kBadMagic);
    }
  }
  SUBCASE("unsupported version") {
    std::string broken = bytes;
    broken[4] = 9;  // version little-endian low byte
    std::stringstream s(broken);
    try {
      read_tensor(s);
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(e.kind() == FormatError::Kind::kBadVersion);
    }
  }
  SUBCASE("unsupported dtype") {
    std::string broken = bytes;
    broken[8] = 7;  // dtype byte
    std::stringstream s(broken);
    try {
      read_tensor(s);
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(e.kind() == FormatError::Kind::kBadDtype);
    }
  }
  SUBCASE("truncated payload") {
    std::string broken = bytes.substr(0, bytes.size() - 4);  // drop one float
    std::stringstream s(broken);
    try {
      read_tensor(s);
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(e.kind() == FormatError::Kind::kTruncated);
    }
  }
  SUBCASE("truncated header") {
    std::string broken = bytes.substr(0, 6);
    std::stringstream s(broken);
    try {
      read_tensor(s);
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(e.kind() == FormatError::Kind::kTruncated);
    }
  }
  SUBCASE("label map needs dims [3,H,W]") {
    std::stringstream s(bytes);  // float tensor, not a label map
    try {
      read_label_map(s);
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(e.kind() == FormatError::Kind::kBadDtype);
    }
  }
}

TEST_CASE("file helpers raise IoError for missing paths") {
  CHECK_THROWS_AS(load_tensor("/nonexistent/path/t.jptf"), IoError);
  CHECK_THROWS_AS(load_label_map("/nonexistent/path/m.jplm"), IoError);
}
