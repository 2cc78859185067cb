/*
 * Copyright 2026 The A3 Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef A3_SRC_BATCHING_H_
#define A3_SRC_BATCHING_H_

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "a3/random.h"

namespace a3::internal {

// Calls fn(indices) for consecutive chunks of a fresh permutation of [0, n).
template <typename Fn>
void ForEachMinibatch(std::size_t n, std::size_t batch_size, Rng& rng, Fn&& fn) {
  const std::vector<std::size_t> order = rng.Permutation(n);
  for (std::size_t start = 0; start < n; start += batch_size) {
    const std::size_t end = std::min(n, start + batch_size);
    fn(std::span<const std::size_t>(order.data() + start, end - start));
  }
}

}  // namespace a3::internal

#endif  // A3_SRC_BATCHING_H_
