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

#include "a3/target.h"

#include <utility>

#include "a3/error.h"
#include "batching.h"

namespace a3 {

std::string TargetKindName(TargetKind kind) {
  return kind == TargetKind::kAutoencoder ? "autoencoder" : "classifier";
}

TargetSpec TargetPreset(std::string_view name, std::size_t input_dim) {
  TargetSpec spec;
  spec.input_dim = input_dim;
  if (name == "nsl-kdd") {
    spec.hidden_widths = {200, 100, 50, 25, 50, 100, 200};
  } else if (name == "ids") {
    spec.hidden_widths = {150, 80, 40, 20, 40, 80, 150};
  } else if (name == "creditcard") {
    spec.hidden_widths = {50, 25, 10, 5, 10, 25, 50};
  } else if (name == "mnist-dense-ae") {
    spec.hidden_widths = {512, 256, 64, 256, 512};
  } else if (name == "mnist-dense-clf") {
    spec.kind = TargetKind::kClassifier;
    spec.hidden_widths = {512, 256, 128};
    spec.n_classes = 10;
  } else {
    throw InvalidArgument("unknown target preset \"" + std::string(name) + "\"");
  }
  return spec;
}

std::vector<std::string> TargetPresetNames() {
  return {"nsl-kdd", "ids", "creditcard", "mnist-dense-ae", "mnist-dense-clf"};
}

Target BuildTarget(const TargetSpec& spec, Rng& init_rng) {
  if (spec.hidden_widths.empty()) {
    throw InvalidArgument("BuildTarget: hidden_widths is empty");
  }
  if (spec.input_dim == 0) throw InvalidArgument("BuildTarget: input_dim is 0");
  if (spec.kind == TargetKind::kClassifier && spec.n_classes < 2) {
    throw InvalidArgument("BuildTarget: classifier needs n_classes >= 2");
  }
  std::vector<nn::LayerSpec> layers;
  for (std::size_t w : spec.hidden_widths) {
    layers.push_back({w, nn::Activation::kReLU, 0.0});
  }
  if (spec.kind == TargetKind::kAutoencoder) {
    layers.push_back(
        {spec.input_dim, nn::Activation::kSigmoid, spec.dropout_rate});
  } else {
    layers.push_back(
        {spec.n_classes, nn::Activation::kLinear, spec.dropout_rate});
  }
  return Target{spec.kind, nn::Network::Build(spec.input_dim, layers, init_rng)};
}

TrainHistory TrainTarget(Target& target, const Matrix& normal_data,
                         std::span<const int> labels,
                         const TrainOptions& options) {
  if (normal_data.rows() == 0) throw InvalidArgument("TrainTarget: empty dataset");
  if (normal_data.cols() != target.net.input_dim()) {
    throw DimensionError("TrainTarget",
                         "width " + std::to_string(target.net.input_dim()),
                         std::to_string(normal_data.cols()));
  }
  const bool classifier = target.kind == TargetKind::kClassifier;
  if (classifier && labels.size() != normal_data.rows()) {
    throw DimensionError("TrainTarget labels", std::to_string(normal_data.rows()),
                         std::to_string(labels.size()));
  }
  if (options.batch_size == 0) throw InvalidArgument("TrainTarget: batch_size 0");

  Rng rng(options.seed);
  nn::AdamState adam = nn::MakeAdam(options.learning_rate);
  nn::Tape tape;
  TrainHistory history;
  std::vector<int> batch_labels;

  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    double total = 0.0;
    std::size_t batches = 0;
    internal::ForEachMinibatch(
        normal_data.rows(), options.batch_size, rng,
        [&](std::span<const std::size_t> idx) {
          const Matrix x = GatherRows(normal_data, idx);
          nn::ForwardResult fwd =
              nn::Forward(target.net, x, nn::Mode::kTrain, &rng, &tape);
          nn::Loss loss;
          if (classifier) {
            batch_labels.clear();
            for (std::size_t i : idx) batch_labels.push_back(labels[i]);
            loss = nn::SoftmaxCrossEntropy(fwd.output, batch_labels);
          } else {
            loss = nn::MeanSquaredError(fwd.output, x);
          }
          const nn::Gradients grads = nn::Backprop(target.net, tape, loss.grad);
          nn::AdamStep(adam, target.net, grads);
          total += loss.value;
          ++batches;
        });
    history.epoch_loss.push_back(total / static_cast<double>(batches));
  }
  return history;
}

}  // namespace a3
