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

#include <cstring>
#include <filesystem>
#include <fstream>

#include "jppf/viz.hpp"

using namespace jppf;

TEST_CASE("void renders black, colors are deterministic") {
  CHECK(color_for(0, 0) == Rgb{0, 0, 0});
  CHECK(color_for(0, 5) == Rgb{0, 0, 0});
  CHECK(color_for(12, 1) == color_for(12, 1));
  CHECK(color_for(12, 1) != color_for(12, 2));

  LabelMap m(3, 2);  // all void by construction
  const auto pixels = render_label_map(m);
  for (const auto& p : pixels) {
    CHECK(p == Rgb{0, 0, 0});
  }
}

TEST_CASE("instance boundaries are outlined in white") {
  LabelMap m(4, 1);
  m.set(0, 1, 0, 0);   // stuff
  m.set(1, 12, 1, 1);  // instance 1
  m.set(2, 12, 1, 1);
  m.set(3, 12, 1, 2);  // neighboring instance 2
  const auto pixels = render_label_map(m);
  CHECK(pixels[0] == color_for(1, 0));        // stuff, no outline
  CHECK(pixels[1] == Rgb{255, 255, 255});     // borders the stuff pixel
  CHECK(pixels[2] == Rgb{255, 255, 255});     // borders instance 2
  CHECK(pixels[3] == Rgb{255, 255, 255});     // borders instance 1
}

TEST_CASE("write_png produces a valid signature") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "jppf_viz_test.png";
  LabelMap m(5, 4);
  for (std::size_t px = 0; px < m.pixels(); ++px) {
    m.set(px, 1, 0, 0);
  }
  write_png(path.string(), render_label_map(m), m.width, m.height);
  std::ifstream f(path, std::ios::binary);
  unsigned char sig[8];
  f.read(reinterpret_cast<char*>(sig), 8);
  const unsigned char expected[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A,
                                     0x1A, 0x0A};
  CHECK(std::memcmp(sig, expected, 8) == 0);
  fs::remove(path);
}
