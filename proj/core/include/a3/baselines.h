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

// Reference scorers: autoencoder reconstruction error and Isolation Forest.

#ifndef A3_BASELINES_H_
#define A3_BASELINES_H_

#include <cstdint>
#include <span>
#include <vector>

#include "a3/matrix.h"
#include "a3/target.h"

namespace a3::baselines {

// Per-row squared reconstruction error ||x_hat - x||^2 of an autoencoder
// target. Throws for classifier targets.
std::vector<double> AeReconstructionScore(const Target& target, const Matrix& x);

// c(n): average path length of an unsuccessful BST search over n points,
// 2 H(n-1) - 2 (n-1) / n with H(i) = ln(i) + Euler's constant.
// c(1) = 0 and c(2) = 1.
double AveragePathLength(double n);

struct IsolationForestOptions {
  std::size_t n_trees = 100;
  std::size_t subsample = 256;
  std::uint64_t seed = 0;
};

class IsolationForest {
 public:
  struct Node {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::uint32_t size = 0;  // training points that reached the node
  };
  using Tree = std::vector<Node>;

  IsolationForest() = default;

  static IsolationForest Fit(const Matrix& data,
                             const IsolationForestOptions& options);

  bool fitted() const { return !trees_.empty(); }
  std::size_t num_trees() const { return trees_.size(); }
  std::size_t sample_size() const { return sample_size_; }
  std::size_t height_limit() const { return height_limit_; }
  const std::vector<Tree>& trees() const { return trees_; }

  // Mean path length E[h(x)] over the trees, leaf credit c(m) included.
  double AveragePath(std::span<const double> row) const;
  // s(x) = 2^(-E[h(x)] / c(sample_size)) per row, in (0, 1).
  std::vector<double> Score(const Matrix& x) const;

  // Depth of the deepest node across all trees.
  std::size_t MaxDepth() const;

 private:
  std::vector<Tree> trees_;
  std::size_t sample_size_ = 0;
  std::size_t height_limit_ = 0;
  std::size_t n_features_ = 0;
};

}  // namespace a3::baselines

#endif  // A3_BASELINES_H_
