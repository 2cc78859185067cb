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

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "a3/data.h"
#include "a3/error.h"
#include "a3/random.h"

namespace a3::data {
namespace {

std::size_t RoundCount(std::size_t n, double ratio) {
  return static_cast<std::size_t>(std::llround(static_cast<double>(n) * ratio));
}

// Largest-remainder apportionment of `total` slots over classes, capped by
// each class's remaining capacity.
std::vector<std::size_t> Apportion(const std::vector<std::size_t>& class_sizes,
                                   const std::vector<std::size_t>& capacity,
                                   double ratio, std::size_t total) {
  const std::size_t k = class_sizes.size();
  std::vector<std::size_t> quota(k);
  std::vector<double> remainder(k);
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < k; ++c) {
    const double ideal = static_cast<double>(class_sizes[c]) * ratio;
    quota[c] = std::min(capacity[c], static_cast<std::size_t>(std::floor(ideal)));
    remainder[c] = ideal - std::floor(ideal);
    assigned += quota[c];
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainder[a] > remainder[b];
  });
  // Several passes in case capacity caps block the first choices.
  while (assigned < total) {
    bool progressed = false;
    for (std::size_t c : order) {
      if (assigned == total) break;
      if (quota[c] < capacity[c]) {
        ++quota[c];
        ++assigned;
        progressed = true;
      }
    }
    if (!progressed) break;
  }
  return quota;
}

SplitIndices Unstratified(std::size_t n, std::size_t n_val, std::size_t n_test,
                          Rng& rng) {
  const std::vector<std::size_t> perm = rng.Permutation(n);
  SplitIndices out;
  out.validation.assign(perm.begin(), perm.begin() + static_cast<long>(n_val));
  out.test.assign(perm.begin() + static_cast<long>(n_val),
                  perm.begin() + static_cast<long>(n_val + n_test));
  out.train.assign(perm.begin() + static_cast<long>(n_val + n_test), perm.end());
  return out;
}

}  // namespace

SplitIndices StratifiedSplit(std::span<const int> labels,
                             const SplitRatios& ratios, std::uint64_t seed,
                             std::vector<std::string>* warnings) {
  if (ratios.train < 0 || ratios.validation < 0 || ratios.test < 0 ||
      std::abs(ratios.train + ratios.validation + ratios.test - 1.0) > 1e-9) {
    throw InvalidArgument("StratifiedSplit: ratios must be >= 0 and sum to 1");
  }
  const std::size_t n = labels.size();
  const std::size_t n_val = RoundCount(n, ratios.validation);
  const std::size_t n_test = std::min(n - n_val, RoundCount(n, ratios.test));
  Rng rng(seed);

  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < n; ++i) by_class[labels[i]].push_back(i);

  const std::size_t buckets = (ratios.train > 0 ? 1 : 0) +
                              (ratios.validation > 0 ? 1 : 0) +
                              (ratios.test > 0 ? 1 : 0);
  bool stratify = true;
  for (const auto& [label, rows] : by_class) {
    if (rows.size() < buckets) stratify = false;
  }

  SplitIndices out;
  if (!stratify) {
    if (warnings != nullptr) {
      warnings->push_back(
          "a class has fewer rows than split buckets; using an unstratified "
          "split");
    }
    out = Unstratified(n, n_val, n_test, rng);
  } else {
    std::vector<std::size_t> sizes;
    for (const auto& [label, rows] : by_class) sizes.push_back(rows.size());
    const std::vector<std::size_t> val_quota =
        Apportion(sizes, sizes, ratios.validation, n_val);
    std::vector<std::size_t> capacity(sizes.size());
    for (std::size_t c = 0; c < sizes.size(); ++c) {
      capacity[c] = sizes[c] - val_quota[c];
    }
    const std::vector<std::size_t> test_quota =
        Apportion(sizes, capacity, ratios.test, n_test);

    std::size_t c = 0;
    for (auto& [label, rows] : by_class) {
      const std::vector<std::size_t> perm = rng.Permutation(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t row = rows[perm[i]];
        if (i < val_quota[c]) {
          out.validation.push_back(row);
        } else if (i < val_quota[c] + test_quota[c]) {
          out.test.push_back(row);
        } else {
          out.train.push_back(row);
        }
      }
      ++c;
    }
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.validation.begin(), out.validation.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

}  // namespace a3::data
