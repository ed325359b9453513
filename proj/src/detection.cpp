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

#include "jppf/detection.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "jppf/errors.hpp"
#include "jppf/fusion.hpp"
#include "jppf/io.hpp"

namespace jppf {

void require_valid(const Detection& det) {
  if (det.score < 0.0f || det.score > 1.0f) {
    throw ShapeError("detection score " + std::to_string(det.score) +
                     " outside [0,1]");
  }
  if (det.box.x0 >= det.box.x1 || det.box.y0 >= det.box.y1 || det.box.x0 < 0 ||
      det.box.y0 < 0) {
    throw ShapeError("detection box is degenerate");
  }
  if (det.mask_logits.ndim() != 3 || det.mask_logits.channels() != 1 ||
      det.mask_logits.height() != static_cast<std::size_t>(det.box.height()) ||
      det.mask_logits.width() != static_cast<std::size_t>(det.box.width())) {
    throw ShapeError("detection mask logits do not match the box extents");
  }
}

DetectionSet filter_detections(const DetectionSet& dets,
                               const FusionConfig& config) {
  DetectionSet kept;
  DetectionSet ranked;
  ranked.reserve(dets.size());
  std::size_t canvas_w = 0;
  std::size_t canvas_h = 0;
  for (const auto& det : dets) {
    require_valid(det);
    if (det.score < config.confidence_threshold) {
      continue;
    }
    canvas_w = std::max(canvas_w, static_cast<std::size_t>(det.box.x1));
    canvas_h = std::max(canvas_h, static_cast<std::size_t>(det.box.y1));
    ranked.push_back(det);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const Detection& a, const Detection& b) {
                     return a.score > b.score;
                   });

  // Greedy class-agnostic suppression against the union of kept masks.
  std::vector<char> claimed(canvas_w * canvas_h, 0);
  for (auto& det : ranked) {
    const int bw = det.box.width();
    std::size_t area = 0;
    std::size_t inter = 0;
    const float* logits = det.mask_logits.channel(0);
    for (int y = det.box.y0; y < det.box.y1; ++y) {
      for (int x = det.box.x0; x < det.box.x1; ++x) {
        if (logits[(y - det.box.y0) * bw + (x - det.box.x0)] > 0.0f) {
          ++area;
          inter += claimed[y * canvas_w + x];
        }
      }
    }
    if (area == 0) {
      continue;  // empty binarized mask, nothing to place on the canvas
    }
    const double overlap = static_cast<double>(inter) / area;
    if (overlap > config.overlap_threshold) {
      continue;
    }
    for (int y = det.box.y0; y < det.box.y1; ++y) {
      for (int x = det.box.x0; x < det.box.x1; ++x) {
        if (logits[(y - det.box.y0) * bw + (x - det.box.x0)] > 0.0f) {
          claimed[y * canvas_w + x] = 1;
        }
      }
    }
    det.instance_id = static_cast<int>(kept.size()) + 1;
    kept.push_back(std::move(det));
  }
  return kept;
}

namespace {

constexpr char kDetsHeader[] = "JPPF-DETS v1";

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) {
    return "";
  }
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

void save_detections(const std::string& path, const DetectionSet& dets) {
  namespace fs = std::filesystem;
  std::ofstream f(path);
  if (!f) {
    throw IoError("cannot open for writing: " + path);
  }
  const fs::path base(path);
  const std::string stem = base.stem().string();
  f << kDetsHeader << "\n";
  for (std::size_t i = 0; i < dets.size(); ++i) {
    std::ostringstream mask_name;
    mask_name << stem << "_mask_" << std::setfill('0') << std::setw(3) << i
              << ".jptf";
    save_tensor((base.parent_path() / mask_name.str()).string(),
                dets[i].mask_logits);
    f << dets[i].class_id << ";" << std::setprecision(9) << dets[i].score
      << ";" << dets[i].box.x0 << ";" << dets[i].box.y0 << ";"
      << dets[i].box.x1 << ";" << dets[i].box.y1 << ";" << mask_name.str()
      << "\n";
  }
}

DetectionSet load_detections(const std::string& path) {
  namespace fs = std::filesystem;
  std::ifstream f(path);
  if (!f) {
    throw IoError("cannot open for reading: " + path);
  }
  std::string line;
  if (!std::getline(f, line) || trim(line) != kDetsHeader) {
    throw ParseError("detection file must start with '" +
                     std::string(kDetsHeader) + "'");
  }
  const fs::path dir = fs::path(path).parent_path();
  DetectionSet dets;
  int line_no = 1;
  while (std::getline(f, line)) {
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
    if (fields.size() != 7) {
      throw ParseError(
          "detections line " + std::to_string(line_no) +
          ": expected class_id;score;x0;y0;x1;y1;mask_tensor_path");
    }
    Detection det;
    try {
      det.class_id = std::stoi(fields[0]);
      det.score = std::stof(fields[1]);
      det.box = {std::stoi(fields[2]), std::stoi(fields[3]),
                 std::stoi(fields[4]), std::stoi(fields[5])};
    } catch (const std::exception&) {
      throw ParseError("detections line " + std::to_string(line_no) +
                       ": malformed numeric field");
    }
    fs::path mask_path(fields[6]);
    if (mask_path.is_relative()) {
      mask_path = dir / mask_path;
    }
    det.mask_logits = load_tensor(mask_path.string());
    require_valid(det);
    dets.push_back(std::move(det));
  }
  return dets;
}

}  // namespace jppf
