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

#include "jppf/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "jppf/errors.hpp"

namespace jppf {

ClassCatalog::ClassCatalog(std::vector<ClassDef> classes, int n_part_channels)
    : classes_(std::move(classes)), n_part_channels_(n_part_channels) {
  int max_id = 0;
  for (const auto& c : classes_) {
    max_id = std::max(max_id, c.class_id);
  }
  channel_by_id_.assign(static_cast<std::size_t>(max_id) + 1, -1);
  for (std::size_t ch = 0; ch < classes_.size(); ++ch) {
    const int id = classes_[ch].class_id;
    if (id >= 0 && channel_by_id_[id] < 0) {
      channel_by_id_[id] = static_cast<int>(ch);
    }
    if (classes_[ch].kind == ClassKind::kStuff) {
      stuff_channels_.push_back(static_cast<int>(ch));
    }
  }
}

int ClassCatalog::num_stuff() const {
  return static_cast<int>(stuff_channels_.size());
}

int ClassCatalog::num_things() const {
  return num_classes() - num_stuff();
}

bool ClassCatalog::has_class(int class_id) const {
  return class_id >= 0 &&
         class_id < static_cast<int>(channel_by_id_.size()) &&
         channel_by_id_[class_id] >= 0;
}

const ClassDef& ClassCatalog::class_def(int class_id) const {
  return classes_[static_cast<std::size_t>(channel_of(class_id))];
}

int ClassCatalog::channel_of(int class_id) const {
  if (!has_class(class_id)) {
    throw CatalogError("unknown class id " + std::to_string(class_id));
  }
  return channel_by_id_[class_id];
}

std::vector<int> part_channels_for_class(const ClassCatalog& catalog,
                                         int class_id) {
  const ClassDef& def = catalog.class_def(class_id);
  if (def.partitionable()) {
    return def.part_channel_ids;
  }
  return {0};  // background channel stands in for non-partitionable classes
}

namespace {

struct PresetRow {
  int id;
  const char* name;
  ClassKind kind;
  std::vector<int> parts;
};

ClassCatalog build_preset(const std::vector<PresetRow>& rows) {
  std::vector<ClassDef> classes;
  classes.reserve(rows.size());
  std::set<int> channels;
  for (const auto& r : rows) {
    classes.push_back({r.id, r.name, r.kind, r.parts});
    channels.insert(r.parts.begin(), r.parts.end());
  }
  return ClassCatalog(std::move(classes),
                      1 + static_cast<int>(channels.size()));
}

// Urban street scenes: 11 stuff + 8 thing classes. Human parts (channels
// 1-4) are shared by person/rider, vehicle parts (channels 5-9) by
// car/truck/bus. Channel names: 1 head, 2 torso, 3 arms, 4 legs,
// 5 window, 6 wheel, 7 light, 8 license plate, 9 chassis.
ClassCatalog make_cpp() {
  const std::vector<int> human = {1, 2, 3, 4};
  const std::vector<int> vehicle = {5, 6, 7, 8, 9};
  return build_preset({
      {1, "road", ClassKind::kStuff, {}},
      {2, "sidewalk", ClassKind::kStuff, {}},
      {3, "building", ClassKind::kStuff, {}},
      {4, "wall", ClassKind::kStuff, {}},
      {5, "fence", ClassKind::kStuff, {}},
      {6, "pole", ClassKind::kStuff, {}},
      {7, "traffic_light", ClassKind::kStuff, {}},
      {8, "traffic_sign", ClassKind::kStuff, {}},
      {9, "vegetation", ClassKind::kStuff, {}},
      {10, "terrain", ClassKind::kStuff, {}},
      {11, "sky", ClassKind::kStuff, {}},
      {12, "person", ClassKind::kThing, human},
      {13, "rider", ClassKind::kThing, human},
      {14, "car", ClassKind::kThing, vehicle},
      {15, "truck", ClassKind::kThing, vehicle},
      {16, "bus", ClassKind::kThing, vehicle},
      {17, "train", ClassKind::kThing, {}},
      {18, "motorcycle", ClassKind::kThing, {}},
      {19, "bicycle", ClassKind::kThing, {}},
  });
}

// Indoor/outdoor everyday scenes: 39 stuff + 20 thing classes, 16 of the
// things partitionable, 58 grouped part channels. Bus and car share the
// vehicle channels (17-21); all other part channels are class-specific.
ClassCatalog make_ppp() {
  const std::vector<int> vehicle = {17, 18, 19, 20, 21};
  return build_preset({
      {1, "aeroplane", ClassKind::kThing, {1, 2, 3, 4}},
      {2, "bag", ClassKind::kStuff, {}},
      {3, "bed", ClassKind::kStuff, {}},
      {4, "bedclothes", ClassKind::kStuff, {}},
      {5, "bench", ClassKind::kStuff, {}},
      {6, "bicycle", ClassKind::kThing, {5, 6, 7, 8}},
      {7, "bird", ClassKind::kThing, {9, 10, 11, 12, 13, 14}},
      {8, "boat", ClassKind::kThing, {}},
      {9, "book", ClassKind::kStuff, {}},
      {10, "bottle", ClassKind::kThing, {15, 16}},
      {11, "building", ClassKind::kStuff, {}},
      {12, "bus", ClassKind::kThing, vehicle},
      {13, "cabinet", ClassKind::kStuff, {}},
      {14, "car", ClassKind::kThing, vehicle},
      {15, "cat", ClassKind::kThing, {22, 23, 24, 25, 26}},
      {16, "ceiling", ClassKind::kStuff, {}},
      {17, "chair", ClassKind::kThing, {}},
      {18, "cloth", ClassKind::kStuff, {}},
      {19, "computer", ClassKind::kStuff, {}},
      {20, "cow", ClassKind::kThing, {27, 28, 29, 30, 31}},
      {21, "cup", ClassKind::kStuff, {}},
      {22, "curtain", ClassKind::kStuff, {}},
      {23, "dog", ClassKind::kThing, {32, 33, 34, 35, 36}},
      {24, "door", ClassKind::kStuff, {}},
      {25, "fence", ClassKind::kStuff, {}},
      {26, "floor", ClassKind::kStuff, {}},
      {27, "flower", ClassKind::kStuff, {}},
      {28, "food", ClassKind::kStuff, {}},
      {29, "grass", ClassKind::kStuff, {}},
      {30, "ground", ClassKind::kStuff, {}},
      {31, "horse", ClassKind::kThing, {37, 38, 39, 40, 41, 42}},
      {32, "keyboard", ClassKind::kStuff, {}},
      {33, "light", ClassKind::kStuff, {}},
      {34, "motorbike", ClassKind::kThing, {43, 44, 45, 46}},
      {35, "mountain", ClassKind::kStuff, {}},
      {36, "mouse", ClassKind::kStuff, {}},
      {37, "person", ClassKind::kThing, {47, 48, 49, 50}},
      {38, "plate", ClassKind::kStuff, {}},
      {39, "platform", ClassKind::kStuff, {}},
      {40, "pottedplant", ClassKind::kThing, {51, 52}},
      {41, "road", ClassKind::kStuff, {}},
      {42, "rock", ClassKind::kStuff, {}},
      {43, "sheep", ClassKind::kThing, {53, 54}},
      {44, "shelves", ClassKind::kStuff, {}},
      {45, "sidewalk", ClassKind::kStuff, {}},
      {46, "sign", ClassKind::kStuff, {}},
      {47, "sky", ClassKind::kStuff, {}},
      {48, "snow", ClassKind::kStuff, {}},
      {49, "sofa", ClassKind::kThing, {}},
      {50, "table", ClassKind::kThing, {}},
      {51, "track", ClassKind::kStuff, {}},
      {52, "train", ClassKind::kThing, {55, 56}},
      {53, "tree", ClassKind::kStuff, {}},
      {54, "truck", ClassKind::kStuff, {}},
      {55, "tvmonitor", ClassKind::kThing, {57, 58}},
      {56, "wall", ClassKind::kStuff, {}},
      {57, "water", ClassKind::kStuff, {}},
      {58, "window", ClassKind::kStuff, {}},
      {59, "wood", ClassKind::kStuff, {}},
  });
}

}  // namespace

ClassCatalog preset_catalog(const std::string& name) {
  if (name == "cpp") {
    static const ClassCatalog cpp = make_cpp();
    return cpp;
  }
  if (name == "ppp") {
    static const ClassCatalog ppp = make_ppp();
    return ppp;
  }
  throw CatalogError("unknown catalog preset '" + name +
                     "' (expected cpp or ppp)");
}

std::vector<CatalogViolation> validate_catalog(const ClassCatalog& catalog) {
  std::vector<CatalogViolation> report;
  std::unordered_set<int> seen;
  std::set<int> referenced;
  for (const auto& c : catalog.classes()) {
    if (c.class_id < 1) {
      report.push_back({c.class_id, "class id must be >= 1 (0 is void)"});
    }
    if (!seen.insert(c.class_id).second) {
      report.push_back({c.class_id, "duplicate class id"});
    }
    if (c.kind == ClassKind::kStuff && !c.part_channel_ids.empty()) {
      report.push_back({c.class_id, "stuff class lists part channels"});
    }
    for (int p : c.part_channel_ids) {
      if (p < 1) {
        report.push_back(
            {c.class_id,
             "part channel " + std::to_string(p) +
                 " is invalid (channel 0 is the reserved background)"});
      } else {
        referenced.insert(p);
      }
    }
    std::set<int> unique(c.part_channel_ids.begin(),
                         c.part_channel_ids.end());
    if (unique.size() != c.part_channel_ids.size()) {
      report.push_back({c.class_id, "repeated part channel in class"});
    }
  }
  const int expected = 1 + static_cast<int>(referenced.size());
  if (catalog.n_part_channels() != expected) {
    report.push_back(
        {0, "n_part_channels is " + std::to_string(catalog.n_part_channels()) +
                " but classes reference " + std::to_string(expected - 1) +
                " distinct channels"});
  }
  for (int p : referenced) {
    if (p >= catalog.n_part_channels()) {
      report.push_back(
          {0, "part channel " + std::to_string(p) +
                  " is out of range for n_part_channels " +
                  std::to_string(catalog.n_part_channels())});
    }
  }
  return report;
}

namespace {

constexpr char kCatalogHeader[] = "JPPF-CATALOG v1";

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) {
    return "";
  }
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

void write_catalog(std::ostream& sink, const ClassCatalog& catalog) {
  sink << kCatalogHeader << "\n";
  for (const auto& c : catalog.classes()) {
    sink << c.class_id << ";" << c.name << ";"
         << (c.kind == ClassKind::kStuff ? "stuff" : "thing") << ";";
    for (std::size_t i = 0; i < c.part_channel_ids.size(); ++i) {
      if (i) {
        sink << ",";
      }
      sink << c.part_channel_ids[i];
    }
    sink << "\n";
  }
}

ClassCatalog read_catalog(std::istream& source) {
  std::string line;
  if (!std::getline(source, line) || trim(line) != kCatalogHeader) {
    throw ParseError("catalog file must start with '" +
                     std::string(kCatalogHeader) + "'");
  }
  std::vector<ClassDef> classes;
  std::set<int> channels;
  int line_no = 1;
  while (std::getline(source, line)) {
    ++line_no;
    const std::string body = trim(line.substr(0, line.find('#')));
    if (body.empty()) {
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(body);
    std::string field;
    while (std::getline(ss, field, ';')) {
      fields.push_back(trim(field));
    }
    // A trailing ';' with no channel list yields 3 fields.
    if (fields.size() < 3 || fields.size() > 4) {
      throw ParseError("catalog line " + std::to_string(line_no) +
                       ": expected class_id;name;kind;part_channel_ids");
    }
    ClassDef def;
    try {
      def.class_id = std::stoi(fields[0]);
    } catch (const std::exception&) {
      throw ParseError("catalog line " + std::to_string(line_no) +
                       ": bad class id '" + fields[0] + "'");
    }
    def.name = fields[1];
    if (fields[2] == "stuff") {
      def.kind = ClassKind::kStuff;
    } else if (fields[2] == "thing") {
      def.kind = ClassKind::kThing;
    } else {
      throw ParseError("catalog line " + std::to_string(line_no) +
                       ": kind must be stuff or thing, got '" + fields[2] +
                       "'");
    }
    if (fields.size() == 4 && !fields[3].empty()) {
      std::stringstream ps(fields[3]);
      std::string tok;
      while (std::getline(ps, tok, ',')) {
        try {
          def.part_channel_ids.push_back(std::stoi(trim(tok)));
        } catch (const std::exception&) {
          throw ParseError("catalog line " + std::to_string(line_no) +
                           ": bad part channel '" + tok + "'");
        }
      }
    }
    channels.insert(def.part_channel_ids.begin(), def.part_channel_ids.end());
    classes.push_back(std::move(def));
  }
  if (classes.empty()) {
    throw ParseError("catalog file lists no classes");
  }
  return ClassCatalog(std::move(classes), 1 + static_cast<int>(channels.size()));
}

void save_catalog(const std::string& path, const ClassCatalog& catalog) {
  std::ofstream f(path);
  if (!f) {
    throw IoError("cannot open for writing: " + path);
  }
  write_catalog(f, catalog);
}

ClassCatalog load_catalog(const std::string& path) {
  std::ifstream f(path);
  if (!f) {
    throw IoError("cannot open for reading: " + path);
  }
  return read_catalog(f);
}

ClassCatalog resolve_catalog(const std::string& name_or_path) {
  if (name_or_path == "cpp" || name_or_path == "ppp") {
    return preset_catalog(name_or_path);
  }
  return load_catalog(name_or_path);
}

}  // namespace jppf
