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

#include <set>
#include <sstream>

#include "jppf/catalog.hpp"
#include "jppf/errors.hpp"

using namespace jppf;

namespace {

int find_class(const ClassCatalog& c, const std::string& name) {
  for (const auto& def : c.classes()) {
    if (def.name == name) {
      return def.class_id;
    }
  }
  return -1;
}

}  // namespace

TEST_CASE("cpp preset has the urban-scene shape") {
  const ClassCatalog c = preset_catalog("cpp");
  CHECK(c.num_classes() == 19);
  CHECK(c.num_stuff() == 11);
  CHECK(c.num_things() == 8);
  int partitionable = 0;
  for (const auto& def : c.classes()) {
    partitionable += def.partitionable();
  }
  CHECK(partitionable == 5);
  CHECK(c.n_part_channels() == 10);

  const int person = find_class(c, "person");
  REQUIRE(person > 0);
  CHECK(part_channels_for_class(c, person).size() == 4);
  // person and rider share the grouped human parts
  CHECK(part_channels_for_class(c, person) ==
        part_channels_for_class(c, find_class(c, "rider")));
  CHECK(part_channels_for_class(c, find_class(c, "car")) ==
        part_channels_for_class(c, find_class(c, "bus")));
  CHECK(validate_catalog(c).empty());
}

TEST_CASE("ppp preset has the everyday-scene shape") {
  const ClassCatalog c = preset_catalog("ppp");
  CHECK(c.num_classes() == 59);
  CHECK(c.num_stuff() == 39);
  CHECK(c.num_things() == 20);
  int partitionable = 0;
  for (const auto& def : c.classes()) {
    partitionable += def.partitionable();
  }
  CHECK(partitionable == 16);
  CHECK(c.n_part_channels() == 59);  // 58 grouped parts + background
  CHECK(validate_catalog(c).empty());
}

TEST_CASE("preset_catalog is deterministic and rejects unknown names") {
  CHECK(preset_catalog("cpp") == preset_catalog("cpp"));
  CHECK(preset_catalog("ppp") == preset_catalog("ppp"));
  CHECK_THROWS_AS(preset_catalog("coco"), CatalogError);
}

TEST_CASE("part_channels_for_class maps non-partitionable to background") {
  const ClassCatalog c = preset_catalog("cpp");
  CHECK(part_channels_for_class(c, find_class(c, "road")) ==
        std::vector<int>{0});
  CHECK(part_channels_for_class(c, find_class(c, "train")) ==
        std::vector<int>{0});
  CHECK_THROWS_AS(part_channels_for_class(c, 999), CatalogError);
}

TEST_CASE("part channel union covers exactly 0..N_P-1") {
  for (const char* name : {"cpp", "ppp"}) {
    const ClassCatalog c = preset_catalog(name);
    std::set<int> channels;
    for (const auto& def : c.classes()) {
      const auto list = part_channels_for_class(c, def.class_id);
      CHECK(!list.empty());
      channels.insert(list.begin(), list.end());
    }
    CHECK(static_cast<int>(channels.size()) == c.n_part_channels());
    CHECK(*channels.begin() == 0);
    CHECK(*channels.rbegin() == c.n_part_channels() - 1);
  }
}

TEST_CASE("validate_catalog flags each invariant violation") {
  SUBCASE("duplicate class id") {
    ClassCatalog bad({{5, "a", ClassKind::kStuff, {}},
                      {5, "b", ClassKind::kThing, {}}},
                     1);
    const auto report = validate_catalog(bad);
    REQUIRE(report.size() == 1);
    CHECK(report[0].class_id == 5);
  }
  SUBCASE("stuff class with part channels") {
    ClassCatalog bad({{1, "sky", ClassKind::kStuff, {1}}}, 2);
    const auto report = validate_catalog(bad);
    REQUIRE(report.size() == 1);
    CHECK(report[0].class_id == 1);
  }
  SUBCASE("background channel referenced") {
    ClassCatalog bad({{1, "person", ClassKind::kThing, {0}}}, 1);
    CHECK(!validate_catalog(bad).empty());
  }
  SUBCASE("n_part_channels mismatch") {
    ClassCatalog bad({{1, "person", ClassKind::kThing, {1, 2}}}, 2);
    const auto report = validate_catalog(bad);
    // both the count mismatch and the out-of-range channel are reported
    REQUIRE(!report.empty());
    CHECK(report[0].class_id == 0);
  }
}

TEST_CASE("catalog text format round-trips") {
  const ClassCatalog c = preset_catalog("cpp");
  std::stringstream buffer;
  write_catalog(buffer, c);
  const ClassCatalog back = read_catalog(buffer);
  CHECK(back == c);
}

TEST_CASE("catalog parser reports malformed input") {
  SUBCASE("missing header") {
    std::stringstream s("1;road;stuff;\n");
    CHECK_THROWS_AS(read_catalog(s), ParseError);
  }
  SUBCASE("bad kind") {
    std::stringstream s("JPPF-CATALOG v1\n1;road;fluff;\n");
    CHECK_THROWS_AS(read_catalog(s), ParseError);
  }
  SUBCASE("comments and blank lines are fine") {
    std::stringstream s(
        "JPPF-CATALOG v1\n# a comment\n\n1;road;stuff;\n2;person;thing;1,2\n");
    const ClassCatalog c = read_catalog(s);
    CHECK(c.num_classes() == 2);
    CHECK(c.n_part_channels() == 3);
    CHECK(c.class_def(2).part_channel_ids == std::vector<int>{1, 2});
  }
}
