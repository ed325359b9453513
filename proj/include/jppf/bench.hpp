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

#ifndef JPPF_BENCH_HPP_
#define JPPF_BENCH_HPP_

#include <iosfwd>
#include <vector>

#include "jppf/synth.hpp"

namespace jppf {

/// Wall-clock comparison of the two ways to produce a panoptic-part map
/// from head tensors already in memory (no file I/O inside the timed
/// regions):
///   (a) the joint fusion,
///   (b) the two-way panoptic fusion followed by top-down merging of the
///       part argmax.
struct BenchReport {
  int repetitions = 0;
  int threads = 1;
  double joint_ms_median = 0.0;
  double merge_ms_median = 0.0;
  double ratio = 0.0;  // merge path over joint path
  std::vector<double> joint_ms;
  std::vector<double> merge_ms;
};

BenchReport run_bench(const Scene& scene, const ClassCatalog& catalog,
                      const FusionConfig& config, int repetitions,
                      int threads);

void write_bench_text(std::ostream& sink, const BenchReport& report);

}  // namespace jppf

#endif  // JPPF_BENCH_HPP_
