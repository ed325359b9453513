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

#include "jppf/bench.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>

#include "jppf/errors.hpp"
#include "jppf/merge.hpp"

namespace jppf {

namespace {

double median(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  if (n == 0) {
    return 0.0;
  }
  return n % 2 ? samples[n / 2]
               : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
}

// Cheap output digest so the timed calls cannot be optimized away.
std::uint64_t digest(const LabelMap& map) {
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < map.pixels(); ++i) {
    acc = acc * 1315423911ull + map.semantic[i] + map.part[i] +
          map.instance[i];
  }
  return acc;
}

}  // namespace

BenchReport run_bench(const Scene& scene, const ClassCatalog& catalog,
                      const FusionConfig& config, int repetitions,
                      int threads) {
  if (repetitions < 1) {
    throw ShapeError("bench repetitions must be >= 1");
  }
  using clock = std::chrono::steady_clock;
  BenchReport report;
  report.repetitions = repetitions;
  report.threads = threads;

  volatile std::uint64_t sink = 0;
  for (int r = 0; r < repetitions; ++r) {
    const auto t0 = clock::now();
    const LabelMap joint = jppf(scene.sem_logits, scene.part_logits,
                                scene.dets, catalog, config, threads);
    const auto t1 = clock::now();
    sink ^= digest(joint);
    report.joint_ms.push_back(
        std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  for (int r = 0; r < repetitions; ++r) {
    const auto t0 = clock::now();
    const LabelMap panoptic = panoptic_fuse_two(scene.sem_logits, scene.dets,
                                                catalog, config, threads);
    const PartSegMap part_map = part_map_from_logits(scene.part_logits);
    const LabelMap merged =
        top_down_merge(panoptic, part_map, catalog, threads);
    const auto t1 = clock::now();
    sink ^= digest(merged);
    report.merge_ms.push_back(
        std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  (void)sink;

  report.joint_ms_median = median(report.joint_ms);
  report.merge_ms_median = median(report.merge_ms);
  report.ratio = report.joint_ms_median > 0
                     ? report.merge_ms_median / report.joint_ms_median
                     : 0.0;
  return report;
}

void write_bench_text(std::ostream& sink, const BenchReport& report) {
  sink << "repetitions = " << report.repetitions << "\n";
  sink << "threads = " << report.threads << "\n";
  sink << "joint_fusion_ms = " << report.joint_ms_median << "\n";
  sink << "merge_path_ms = " << report.merge_ms_median << "\n";
  sink << "merge_over_joint_ratio = " << report.ratio << "\n";
}

}  // namespace jppf
