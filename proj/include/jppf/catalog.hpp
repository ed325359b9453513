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

#ifndef JPPF_CATALOG_HPP_
#define JPPF_CATALOG_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace jppf {

enum class ClassKind { kStuff, kThing };

/// One scene-level class. Partitionable classes list the part channels their
/// pixels subdivide into; semantically identical parts of different classes
/// may share a channel (e.g. all vehicle windows). Channel 0 is the part
/// background and is never listed.
struct ClassDef {
  int class_id = 0;  // >= 1; id 0 is reserved for void
  std::string name;
  ClassKind kind = ClassKind::kStuff;
  std::vector<int> part_channel_ids;

  bool partitionable() const { return !part_channel_ids.empty(); }
  bool operator==(const ClassDef&) const = default;
};

struct CatalogViolation {
  int class_id = 0;  // 0 for catalog-level violations
  std::string message;
};

/// Immutable scene taxonomy: the class list plus the part-channel count
/// N_P (grouped parts + 1 background channel). Safe to share across threads
/// once built.
class ClassCatalog {
 public:
  ClassCatalog() = default;
  ClassCatalog(std::vector<ClassDef> classes, int n_part_channels);

  const std::vector<ClassDef>& classes() const { return classes_; }
  int n_part_channels() const { return n_part_channels_; }
  static constexpr int void_semantic_id() { return 0; }

  int num_classes() const { return static_cast<int>(classes_.size()); }
  int num_stuff() const;
  int num_things() const;

  bool has_class(int class_id) const;
  /// Throws CatalogError for unknown ids.
  const ClassDef& class_def(int class_id) const;

  /// Index of the class's channel in [N,H,W] head tensors (catalog order).
  int channel_of(int class_id) const;
  const ClassDef& class_at_channel(int channel) const {
    return classes_[channel];
  }

  /// Channels of the semantic head that belong to stuff classes, in catalog
  /// order.
  const std::vector<int>& stuff_channels() const { return stuff_channels_; }

  bool operator==(const ClassCatalog& other) const {
    return classes_ == other.classes_ &&
           n_part_channels_ == other.n_part_channels_;
  }

 private:
  std::vector<ClassDef> classes_;
  int n_part_channels_ = 1;
  std::vector<int> channel_by_id_;  // class_id -> channel, -1 if absent
  std::vector<int> stuff_channels_;
};

/// Compiled-in taxonomies for the two supported urban/indoor scene datasets:
/// "cpp" (19 classes, 11 stuff / 8 things, 5 partitionable, 9 grouped parts)
/// and "ppp" (59 classes, 39 stuff / 20 things, 16 partitionable, 58 grouped
/// parts). Throws CatalogError for other names.
ClassCatalog preset_catalog(const std::string& name);

/// Part channels an instance of `class_id` selects from the part head:
/// the class's own channels for partitionable classes, the single-element
/// background list {0} otherwise.
std::vector<int> part_channels_for_class(const ClassCatalog& catalog,
                                         int class_id);

/// Checks every catalog invariant; one entry per violation, empty iff valid.
std::vector<CatalogViolation> validate_catalog(const ClassCatalog& catalog);

// Text format: header line "JPPF-CATALOG v1", then one class per line as
// "class_id;name;kind;part_channel_ids" with a comma-separated (possibly
// empty) channel list; '#' starts a comment.
void write_catalog(std::ostream& sink, const ClassCatalog& catalog);
ClassCatalog read_catalog(std::istream& source);
void save_catalog(const std::string& path, const ClassCatalog& catalog);
ClassCatalog load_catalog(const std::string& path);

/// Resolves a preset name or, failing that, a catalog file path.
ClassCatalog resolve_catalog(const std::string& name_or_path);

}  // namespace jppf

#endif  // JPPF_CATALOG_HPP_
