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

// Minimal dense neural-network engine: layers, forward pass with activation
// capture, reverse-mode gradients, Adam and the losses used by the target,
// anomaly and alarm networks.
//
// Layer i computes h_i = act(W_i * h_{i-1} + b_i) with h_0 = x. Weights are
// stored (out_dim x in_dim). A layer's dropout is applied to its *input*
// in training mode only, so "dropout before the last layer" is a dropout
// rate on the final DenseLayer.

#ifndef A3_NN_H_
#define A3_NN_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "a3/matrix.h"
#include "a3/random.h"

namespace a3::nn {

enum class Activation : std::uint8_t { kLinear = 0, kReLU = 1, kSigmoid = 2 };
enum class Mode { kTrain, kInfer };

std::string ActivationName(Activation a);

struct DenseLayer {
  Matrix weights;            // out_dim x in_dim
  std::vector<double> bias;  // out_dim
  Activation activation = Activation::kLinear;
  double dropout_rate = 0.0;  // on the layer input, train mode only

  std::size_t in_dim() const { return weights.cols(); }
  std::size_t out_dim() const { return weights.rows(); }

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

struct LayerSpec {
  std::size_t width = 0;
  Activation activation = Activation::kReLU;
  double dropout_rate = 0.0;
};

class Network {
 public:
  Network() = default;
  // Validates that adjacent layer dimensions chain.
  explicit Network(std::vector<DenseLayer> layers);

  // Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero biases.
  static Network Build(std::size_t input_dim, std::span<const LayerSpec> specs,
                       Rng& init_rng);

  std::size_t input_dim() const;
  std::size_t output_dim() const;
  std::size_t num_layers() const { return layers_.size(); }
  bool empty() const { return layers_.empty(); }

  // Sum of the widths of every layer except the output layer.
  std::size_t trace_width() const;
  std::size_t num_parameters() const;

  const std::vector<DenseLayer>& layers() const { return layers_; }
  DenseLayer& layer(std::size_t i) { return layers_[i]; }
  const DenseLayer& layer(std::size_t i) const { return layers_[i]; }

  friend bool operator==(const Network&, const Network&) = default;

 private:
  std::vector<DenseLayer> layers_;
};

// Hidden activations h_1 .. h_{L-1} for one batch. Excludes the input and
// the output layer.
struct ActivationTrace {
  std::vector<Matrix> hidden;

  std::size_t width() const;
  // batch x width(), layers side by side in order.
  Matrix Concat() const;
};

// Intermediates recorded by a training-mode forward pass; consumed by
// Backprop.
class Tape {
 public:
  bool empty() const { return inputs_.empty(); }
  void Clear();

 private:
  friend struct TapeAccess;
  std::vector<Matrix> inputs_;   // per layer, after dropout
  std::vector<Matrix> outputs_;  // per layer, post activation
  std::vector<Matrix> masks_;    // per layer, empty when no dropout applied
};

struct ForwardResult {
  Matrix output;
  ActivationTrace trace;
};

// Runs the network on a batch (one sample per row). In train mode a
// dropout Rng is required when any layer has a nonzero rate; passing a
// tape records what Backprop needs.
ForwardResult Forward(const Network& net, const Matrix& x, Mode mode,
                      Rng* dropout_rng = nullptr, Tape* tape = nullptr);

// Inference-mode output only.
Matrix Predict(const Network& net, const Matrix& x);

// Inference-mode concatenated trace only (the alarm input).
Matrix TraceConcat(const Network& net, const Matrix& x);

struct Gradients {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> bias;
  Matrix input;  // dL/dx
};

// Gradients of a scalar loss with respect to every parameter, given
// dL/d(output) for the batch recorded on the tape. Does not touch the
// network.
Gradients Backprop(const Network& net, const Tape& tape,
                   const Matrix& grad_output);

struct AdamState {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t step = 0;
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
};

AdamState MakeAdam(double learning_rate);

// One bias-corrected Adam update over parameter blocks. Moment buffers are
// sized on the first call; later calls must present the same shapes.
void AdamStep(AdamState& state, std::span<const std::span<double>> params,
              std::span<const std::span<const double>> grads);
void AdamStep(AdamState& state, Network& net, const Gradients& grads);

// Smallest and largest probability fed to a log.
inline constexpr double kProbabilityClamp = 1e-7;

struct Loss {
  double value = 0.0;  // mean over all entries (rows for softmax)
  Matrix grad;         // d value / d prediction
};

Loss MeanSquaredError(const Matrix& prediction, const Matrix& target);
// Prediction is clamped to [1e-7, 1 - 1e-7] before the log.
Loss BinaryCrossEntropy(const Matrix& prediction, const Matrix& target);
// Row-wise log-softmax cross-entropy over logits; labels in [0, cols).
Loss SoftmaxCrossEntropy(const Matrix& logits, std::span<const int> labels);

double Sigmoid(double z);

}  // namespace a3::nn

#endif  // A3_NN_H_
