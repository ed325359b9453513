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

#ifndef JPPF_ERRORS_HPP_
#define JPPF_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace jppf {

/// Shape or argument mismatch between tensors, maps, or configs.
class ShapeError : public std::invalid_argument {
 public:
  explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

/// A bounding box or index lies outside the valid extent.
class BoundsError : public std::out_of_range {
 public:
  explicit BoundsError(const std::string& what) : std::out_of_range(what) {}
};

/// Lookup of an unknown class id or preset name in a catalog.
class CatalogError : public std::runtime_error {
 public:
  explicit CatalogError(const std::string& what) : std::runtime_error(what) {}
};

/// Binary container decoding failures. Each failure mode has its own kind so
/// callers (and tests) can tell them apart.
class FormatError : public std::runtime_error {
 public:
  enum class Kind {
    kBadMagic,
    kBadVersion,
    kBadDtype,
    kBadHeader,
    kTruncated,
  };

  FormatError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Malformed text inputs (catalog files, detection files, configs).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// File-system level failures (missing file, unwritable sink).
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// The synthetic-scene generator could not satisfy its config.
class GenerationError : public std::runtime_error {
 public:
  explicit GenerationError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace jppf

#endif  // JPPF_ERRORS_HPP_
