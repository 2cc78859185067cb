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

#include "a3/baselines.h"

#include <algorithm>
#include <cmath>
#include <functional>

#include "a3/error.h"
#include "a3/nn.h"
#include "a3/random.h"

namespace a3::baselines {
namespace {

constexpr double kEulerGamma = 0.5772156649015329;

struct Builder {
  const Matrix& data;
  std::size_t height_limit;
  Rng& rng;
  IsolationForest::Tree tree;
  std::vector<std::size_t> candidates;

  std::uint32_t Grow(std::span<std::size_t> rows, std::size_t depth) {
    const auto id = static_cast<std::uint32_t>(tree.size());
    tree.push_back({});
    tree[id].size = static_cast<std::uint32_t>(rows.size());
    if (depth >= height_limit || rows.size() <= 1) return id;

    // Features with spread in this node; constant ones cannot split.
    candidates.clear();
    for (std::size_t f = 0; f < data.cols(); ++f) {
      const double first = data(rows[0], f);
      for (std::size_t r : rows) {
        if (data(r, f) != first) {
          candidates.push_back(f);
          break;
        }
      }
    }
    if (candidates.empty()) return id;

    const std::size_t feature = candidates[rng.Index(candidates.size())];
    double lo = data(rows[0], feature);
    double hi = lo;
    for (std::size_t r : rows) {
      lo = std::min(lo, data(r, feature));
      hi = std::max(hi, data(r, feature));
    }
    double threshold = rng.Uniform(lo, hi);
    if (threshold <= lo) threshold = std::nextafter(lo, hi);

    auto mid = std::partition(rows.begin(), rows.end(), [&](std::size_t r) {
      return data(r, feature) < threshold;
    });
    const auto n_left = static_cast<std::size_t>(mid - rows.begin());
    const std::uint32_t left = Grow(rows.subspan(0, n_left), depth + 1);
    const std::uint32_t right = Grow(rows.subspan(n_left), depth + 1);
    tree[id].feature = static_cast<std::int32_t>(feature);
    tree[id].threshold = threshold;
    tree[id].left = left;
    tree[id].right = right;
    return id;
  }
};

}  // namespace

std::vector<double> AeReconstructionScore(const Target& target,
                                          const Matrix& x) {
  if (target.kind != TargetKind::kAutoencoder) {
    throw InvalidArgument(
        "AeReconstructionScore: baseline is undefined for classifier targets");
  }
  const Matrix x_hat = nn::Predict(target.net, x);
  std::vector<double> scores(x.rows(), 0.0);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto a = x.row(r);
    auto b = x_hat.row(r);
    double s = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
      const double d = b[c] - a[c];
      s += d * d;
    }
    scores[r] = s;
  }
  return scores;
}

double AveragePathLength(double n) {
  if (n <= 1.0) return 0.0;
  if (n <= 2.0) return 1.0;
  return 2.0 * (std::log(n - 1.0) + kEulerGamma) - 2.0 * (n - 1.0) / n;
}

IsolationForest IsolationForest::Fit(const Matrix& data,
                                     const IsolationForestOptions& options) {
  if (data.rows() == 0) throw InvalidArgument("IsolationForest: empty data");
  if (!data.all_finite()) {
    throw InvalidArgument("IsolationForest: non-finite feature values");
  }
  if (options.n_trees == 0 || options.subsample == 0) {
    throw InvalidArgument("IsolationForest: n_trees and subsample must be > 0");
  }
  IsolationForest forest;
  forest.n_features_ = data.cols();
  forest.sample_size_ = std::min(options.subsample, data.rows());
  forest.height_limit_ = static_cast<std::size_t>(
      std::ceil(std::log2(static_cast<double>(std::max<std::size_t>(
          forest.sample_size_, 2)))));

  forest.trees_.reserve(options.n_trees);
  for (std::size_t t = 0; t < options.n_trees; ++t) {
    // Independent per-tree stream: trees can be grown in any order.
    Rng rng(DeriveSeed(options.seed, t));
    std::vector<std::size_t> rows =
        rng.SampleWithoutReplacement(data.rows(), forest.sample_size_);
    Builder builder{data, forest.height_limit_, rng, {}, {}};
    builder.Grow(rows, 0);
    forest.trees_.push_back(std::move(builder.tree));
  }
  return forest;
}

double IsolationForest::AveragePath(std::span<const double> row) const {
  if (!fitted()) throw StateError("IsolationForest: scoring before fit");
  if (row.size() != n_features_) {
    throw DimensionError("IsolationForest", std::to_string(n_features_),
                         std::to_string(row.size()));
  }
  double total = 0.0;
  for (const Tree& tree : trees_) {
    std::uint32_t node = 0;
    double depth = 0.0;
    while (tree[node].feature >= 0) {
      const Node& n = tree[node];
      node = row[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left
                                                                      : n.right;
      depth += 1.0;
    }
    total += depth + AveragePathLength(tree[node].size);
  }
  return total / static_cast<double>(trees_.size());
}

std::vector<double> IsolationForest::Score(const Matrix& x) const {
  if (!fitted()) throw StateError("IsolationForest: scoring before fit");
  const double norm = AveragePathLength(static_cast<double>(sample_size_));
  std::vector<double> scores(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const double h = AveragePath(x.row(r));
    scores[r] = norm > 0.0 ? std::exp2(-h / norm) : 0.5;
  }
  return scores;
}

std::size_t IsolationForest::MaxDepth() const {
  std::size_t best = 0;
  for (const Tree& tree : trees_) {
    std::function<void(std::uint32_t, std::size_t)> walk =
        [&](std::uint32_t id, std::size_t depth) {
          best = std::max(best, depth);
          if (tree[id].feature >= 0) {
            walk(tree[id].left, depth + 1);
            walk(tree[id].right, depth + 1);
          }
        };
    walk(0, 0);
  }
  return best;
}

}  // namespace a3::baselines
