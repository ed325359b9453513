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

#include "jppf/io.hpp"

#include <cstring>
#include <fstream>
#include <limits>

#include "jppf/errors.hpp"

namespace jppf {

namespace {

constexpr unsigned char kMagic[4] = {0x4A, 0x50, 0x54, 0x46};  // "JPTF"
constexpr std::uint32_t kVersion = 1;

// Multi-byte fields are serialized little-endian regardless of host order.
template <typename T>
void put_le(std::ostream& sink, T value) {
  unsigned char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    buf[i] = static_cast<unsigned char>((value >> (8 * i)) & 0xFF);
  }
  sink.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
bool get_le(std::istream& source, T* value) {
  unsigned char buf[sizeof(T)];
  source.read(reinterpret_cast<char*>(buf), sizeof(T));
  if (static_cast<std::size_t>(source.gcount()) != sizeof(T)) {
    return false;
  }
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v |= static_cast<T>(buf[i]) << (8 * i);
  }
  *value = v;
  return true;
}

void put_f32(std::ostream& sink, float f) {
  std::uint32_t bits;
  std::memcpy(&bits, &f, sizeof(bits));
  put_le(sink, bits);
}

bool get_f32(std::istream& source, float* f) {
  std::uint32_t bits;
  if (!get_le(source, &bits)) {
    return false;
  }
  std::memcpy(f, &bits, sizeof(bits));
  return true;
}

[[noreturn]] void truncated(const char* where) {
  throw FormatError(FormatError::Kind::kTruncated,
                    std::string("container truncated in ") + where);
}

}  // namespace

void write_container(std::ostream& sink, const Container& c) {
  sink.write(reinterpret_cast<const char*>(kMagic), 4);
  put_le(sink, kVersion);
  put_le(sink, static_cast<std::uint8_t>(c.dtype));
  put_le(sink, static_cast<std::uint8_t>(c.dims.size()));
  put_le(sink, static_cast<std::uint16_t>(0));
  for (std::uint64_t d : c.dims) {
    put_le(sink, d);
  }
  if (c.dtype == Dtype::kFloat32) {
    for (float f : c.f32) {
      put_f32(sink, f);
    }
  } else {
    for (std::uint16_t v : c.u16) {
      put_le(sink, v);
    }
  }
  if (!sink) {
    throw IoError("failed to write container payload");
  }
}

Container read_container(std::istream& source) {
  unsigned char magic[4];
  source.read(reinterpret_cast<char*>(magic), 4);
  if (source.gcount() != 4) {
    truncated("magic");
  }
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError(FormatError::Kind::kBadMagic,
                      "bad magic: not a JPTF container");
  }
  std::uint32_t version = 0;
  if (!get_le(source, &version)) {
    truncated("version");
  }
  if (version != kVersion) {
    throw FormatError(FormatError::Kind::kBadVersion,
                      "unsupported container version " +
                          std::to_string(version));
  }
  std::uint8_t dtype = 0;
  std::uint8_t ndim = 0;
  std::uint16_t reserved = 0;
  if (!get_le(source, &dtype) || !get_le(source, &ndim) ||
      !get_le(source, &reserved)) {
    truncated("header");
  }
  if (dtype != static_cast<std::uint8_t>(Dtype::kFloat32) &&
      dtype != static_cast<std::uint8_t>(Dtype::kUint16)) {
    throw FormatError(FormatError::Kind::kBadDtype,
                      "unsupported dtype tag " + std::to_string(dtype));
  }
  if (ndim == 0) {
    throw FormatError(FormatError::Kind::kBadHeader,
                      "container declares zero dimensions");
  }

  Container c;
  c.dtype = static_cast<Dtype>(dtype);
  std::uint64_t count = 1;
  for (std::uint8_t i = 0; i < ndim; ++i) {
    std::uint64_t extent = 0;
    if (!get_le(source, &extent)) {
      truncated("extents");
    }
    if (extent == 0) {
      throw FormatError(FormatError::Kind::kBadHeader,
                        "container declares a zero extent");
    }
    if (count > std::numeric_limits<std::uint64_t>::max() / extent) {
      throw FormatError(FormatError::Kind::kBadHeader,
                        "container element count overflows");
    }
    count *= extent;
    c.dims.push_back(extent);
  }
  if (c.dtype == Dtype::kFloat32) {
    c.f32.resize(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      if (!get_f32(source, &c.f32[i])) {
        truncated("payload");
      }
    }
  } else {
    c.u16.resize(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      if (!get_le(source, &c.u16[i])) {
        truncated("payload");
      }
    }
  }
  return c;
}

void write_tensor(std::ostream& sink, const Tensor& t) {
  Container c;
  c.dtype = Dtype::kFloat32;
  c.dims.assign(t.dims().begin(), t.dims().end());
  c.f32 = t.data();
  write_container(sink, c);
}

Tensor read_tensor(std::istream& source) {
  Container c = read_container(source);
  if (c.dtype != Dtype::kFloat32) {
    throw FormatError(FormatError::Kind::kBadDtype,
                      "expected a float32 tensor container");
  }
  std::vector<std::size_t> dims(c.dims.begin(), c.dims.end());
  return Tensor(std::move(dims), std::move(c.f32));
}

void write_label_map(std::ostream& sink, const LabelMap& m) {
  Container c;
  c.dtype = Dtype::kUint16;
  c.dims = {3, static_cast<std::uint64_t>(m.height),
            static_cast<std::uint64_t>(m.width)};
  c.u16.reserve(m.pixels() * 3);
  c.u16.insert(c.u16.end(), m.semantic.begin(), m.semantic.end());
  c.u16.insert(c.u16.end(), m.part.begin(), m.part.end());
  c.u16.insert(c.u16.end(), m.instance.begin(), m.instance.end());
  write_container(sink, c);
}

LabelMap read_label_map(std::istream& source) {
  Container c = read_container(source);
  if (c.dtype != Dtype::kUint16) {
    throw FormatError(FormatError::Kind::kBadDtype,
                      "label map container must be uint16");
  }
  if (c.dims.size() != 3 || c.dims[0] != 3) {
    throw FormatError(FormatError::Kind::kBadHeader,
                      "label map container must have dims [3, H, W]");
  }
  LabelMap m(static_cast<int>(c.dims[2]), static_cast<int>(c.dims[1]));
  const std::size_t plane = m.pixels();
  std::copy_n(c.u16.begin(), plane, m.semantic.begin());
  std::copy_n(c.u16.begin() + plane, plane, m.part.begin());
  std::copy_n(c.u16.begin() + 2 * plane, plane, m.instance.begin());
  return m;
}

void write_part_map(std::ostream& sink, const PartSegMap& m) {
  Container c;
  c.dtype = Dtype::kUint16;
  c.dims = {static_cast<std::uint64_t>(m.height),
            static_cast<std::uint64_t>(m.width)};
  c.u16 = m.ids;
  write_container(sink, c);
}

PartSegMap read_part_map(std::istream& source) {
  Container c = read_container(source);
  if (c.dtype != Dtype::kUint16) {
    throw FormatError(FormatError::Kind::kBadDtype,
                      "part map container must be uint16");
  }
  if (c.dims.size() != 2) {
    throw FormatError(FormatError::Kind::kBadHeader,
                      "part map container must have dims [H, W]");
  }
  PartSegMap m(static_cast<int>(c.dims[1]), static_cast<int>(c.dims[0]));
  m.ids = std::move(c.u16);
  return m;
}

namespace {

std::ofstream open_sink(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw IoError("cannot open for writing: " + path);
  }
  return f;
}

std::ifstream open_source(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    throw IoError("cannot open for reading: " + path);
  }
  return f;
}

}  // namespace

void save_tensor(const std::string& path, const Tensor& t) {
  auto f = open_sink(path);
  write_tensor(f, t);
}

Tensor load_tensor(const std::string& path) {
  auto f = open_source(path);
  return read_tensor(f);
}

void save_label_map(const std::string& path, const LabelMap& m) {
  auto f = open_sink(path);
  write_label_map(f, m);
}

LabelMap load_label_map(const std::string& path) {
  auto f = open_source(path);
  return read_label_map(f);
}

void save_part_map(const std::string& path, const PartSegMap& m) {
  auto f = open_sink(path);
  write_part_map(f, m);
}

PartSegMap load_part_map(const std::string& path) {
  auto f = open_source(path);
  return read_part_map(f);
}

}  // namespace jppf
