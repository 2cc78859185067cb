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

#ifndef A3_TARGET_H_
#define A3_TARGET_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "a3/matrix.h"
#include "a3/nn.h"

namespace a3 {

enum class TargetKind : std::uint8_t { kAutoencoder = 0, kClassifier = 1 };

std::string TargetKindName(TargetKind kind);

struct TargetSpec {
  TargetKind kind = TargetKind::kAutoencoder;
  std::vector<std::size_t> hidden_widths;
  std::size_t input_dim = 0;
  std::size_t n_classes = 0;  // classifier only
  double dropout_rate = 0.1;  // before the last layer
};

// Named architectures: "nsl-kdd", "ids", "creditcard", "mnist-dense-ae",
// "mnist-dense-clf".
TargetSpec TargetPreset(std::string_view name, std::size_t input_dim);
std::vector<std::string> TargetPresetNames();

// A network trained on normal data for a task unrelated to anomaly
// detection. Once trained it is never modified again.
struct Target {
  TargetKind kind = TargetKind::kAutoencoder;
  nn::Network net;
};

// Autoencoder: ReLU hidden stack + sigmoid output of input_dim.
// Classifier: ReLU hidden stack + linear class scores.
Target BuildTarget(const TargetSpec& spec, Rng& init_rng);

struct TrainOptions {
  std::size_t epochs = 30;
  double learning_rate = 1e-3;
  std::size_t batch_size = 256;
  std::uint64_t seed = 0;
};

struct TrainHistory {
  std::vector<double> epoch_loss;  // mean minibatch loss per epoch
};

// MSE reconstruction for autoencoders, softmax cross-entropy for
// classifiers (labels in [0, n_classes), ignored for autoencoders).
TrainHistory TrainTarget(Target& target, const Matrix& normal_data,
                         std::span<const int> labels,
                         const TrainOptions& options);

}  // namespace a3

#endif  // A3_TARGET_H_
