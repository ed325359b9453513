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

#ifndef JPPF_PARALLEL_HPP_
#define JPPF_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace jppf {

/// Runs fn(begin, end) over disjoint chunks of [0, n), using up to `threads`
/// workers. Every output element must depend only on its own index, so the
/// result is identical for any thread count. threads <= 1 runs inline.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace jppf

#endif  // JPPF_PARALLEL_HPP_
