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

#ifndef JPPF_IO_HPP_
#define JPPF_IO_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "jppf/label_map.hpp"
#include "jppf/tensor.hpp"

namespace jppf {

// Binary tensor container, little-endian:
//   magic   u8[4]  = 4A 50 54 46 ("JPTF")
//   version u32    = 1
//   dtype   u8     (1 = float32, 2 = uint16)
//   ndim    u8
//   reserved u16   = 0
//   extents u64[ndim], outermost first
//   payload, row-major
// Label maps are stored as dtype 2 with dims [3, H, W], plane order
// (semantic, part, instance); part maps as dtype 2 with dims [H, W].

enum class Dtype : std::uint8_t {
  kFloat32 = 1,
  kUint16 = 2,
};

/// Decoded container payload; exactly one of f32/u16 is populated,
/// depending on dtype.
struct Container {
  Dtype dtype = Dtype::kFloat32;
  std::vector<std::uint64_t> dims;
  std::vector<float> f32;
  std::vector<std::uint16_t> u16;
};

void write_container(std::ostream& sink, const Container& c);
Container read_container(std::istream& source);

void write_tensor(std::ostream& sink, const Tensor& t);
Tensor read_tensor(std::istream& source);

void write_label_map(std::ostream& sink, const LabelMap& m);
LabelMap read_label_map(std::istream& source);

void write_part_map(std::ostream& sink, const PartSegMap& m);
PartSegMap read_part_map(std::istream& source);

// File-path convenience wrappers; IoError on filesystem failures.
void save_tensor(const std::string& path, const Tensor& t);
Tensor load_tensor(const std::string& path);
void save_label_map(const std::string& path, const LabelMap& m);
LabelMap load_label_map(const std::string& path);
void save_part_map(const std::string& path, const PartSegMap& m);
PartSegMap load_part_map(const std::string& path);

}  // namespace jppf

#endif  // JPPF_IO_HPP_
