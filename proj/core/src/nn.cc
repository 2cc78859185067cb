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

#include "a3/nn.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "a3/error.h"

namespace a3::nn {

struct TapeAccess {
  static std::vector<Matrix>& inputs(Tape& t) { return t.inputs_; }
  static std::vector<Matrix>& outputs(Tape& t) { return t.outputs_; }
  static std::vector<Matrix>& masks(Tape& t) { return t.masks_; }
  static const std::vector<Matrix>& inputs(const Tape& t) { return t.inputs_; }
  static const std::vector<Matrix>& outputs(const Tape& t) {
    return t.outputs_;
  }
  static const std::vector<Matrix>& masks(const Tape& t) { return t.masks_; }
};

namespace {

void ApplyActivation(Activation act, Matrix& z) {
  auto data = z.data();
  switch (act) {
    case Activation::kLinear:
      break;
    case Activation::kReLU:
      for (double& v : data) v = v > 0.0 ? v : 0.0;
      break;
    case Activation::kSigmoid:
      for (double& v : data) v = Sigmoid(v);
      break;
  }
}

// grad <- grad * act'(z) expressed through the activation output y.
void ChainActivation(Activation act, const Matrix& y, Matrix& grad) {
  auto g = grad.data();
  auto out = y.data();
  switch (act) {
    case Activation::kLinear:
      break;
    case Activation::kReLU:
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (out[i] <= 0.0) g[i] = 0.0;
      }
      break;
    case Activation::kSigmoid:
      for (std::size_t i = 0; i < g.size(); ++i) {
        g[i] *= out[i] * (1.0 - out[i]);
      }
      break;
  }
}

Matrix Affine(const DenseLayer& layer, const Matrix& input) {
  Matrix z = MultiplyTransposed(input, layer.weights);
  for (std::size_t r = 0; r < z.rows(); ++r) {
    auto row = z.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] += layer.bias[c];
  }
  return z;
}

void CheckInput(const Network& net, const Matrix& x) {
  if (net.empty()) throw StateError("Forward: network has no layers");
  if (x.cols() != net.input_dim()) {
    throw DimensionError("Forward layer 0",
                         "input width " + std::to_string(net.input_dim()),
                         std::to_string(x.cols()));
  }
}

}  // namespace

std::string ActivationName(Activation a) {
  switch (a) {
    case Activation::kLinear:
      return "linear";
    case Activation::kReLU:
      return "relu";
    case Activation::kSigmoid:
      return "sigmoid";
  }
  return "unknown";
}

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Network::Network(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const DenseLayer& l = layers_[i];
    if (l.bias.size() != l.out_dim()) {
      throw DimensionError("layer " + std::to_string(i) + " bias",
                           std::to_string(l.out_dim()),
                           std::to_string(l.bias.size()));
    }
    if (l.dropout_rate < 0.0 || l.dropout_rate >= 1.0) {
      throw InvalidArgument("layer " + std::to_string(i) +
                            ": dropout rate must lie in [0, 1)");
    }
    if (i > 0 && layers_[i - 1].out_dim() != l.in_dim()) {
      throw DimensionError("layer " + std::to_string(i) + " input",
                           std::to_string(layers_[i - 1].out_dim()),
                           std::to_string(l.in_dim()));
    }
  }
}

Network Network::Build(std::size_t input_dim, std::span<const LayerSpec> specs,
                       Rng& init_rng) {
  if (input_dim == 0) throw InvalidArgument("Network::Build: input_dim is 0");
  std::vector<DenseLayer> layers;
  layers.reserve(specs.size());
  std::size_t fan_in = input_dim;
  for (const LayerSpec& s : specs) {
    if (s.width == 0) throw InvalidArgument("Network::Build: zero-width layer");
    DenseLayer l;
    l.weights = Matrix(s.width, fan_in);
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + s.width));
    for (double& w : l.weights.data()) w = init_rng.Uniform(-limit, limit);
    l.bias.assign(s.width, 0.0);
    l.activation = s.activation;
    l.dropout_rate = s.dropout_rate;
    layers.push_back(std::move(l));
    fan_in = s.width;
  }
  return Network(std::move(layers));
}

std::size_t Network::input_dim() const {
  return layers_.empty() ? 0 : layers_.front().in_dim();
}

std::size_t Network::output_dim() const {
  return layers_.empty() ? 0 : layers_.back().out_dim();
}

std::size_t Network::trace_width() const {
  std::size_t w = 0;
  for (std::size_t i = 0; i + 1 < layers_.size(); ++i) w += layers_[i].out_dim();
  return w;
}

std::size_t Network::num_parameters() const {
  std::size_t n = 0;
  for (const DenseLayer& l : layers_) n += l.weights.size() + l.bias.size();
  return n;
}

std::size_t ActivationTrace::width() const {
  std::size_t w = 0;
  for (const Matrix& h : hidden) w += h.cols();
  return w;
}

Matrix ActivationTrace::Concat() const { return HStack(hidden); }

void Tape::Clear() {
  inputs_.clear();
  outputs_.clear();
  masks_.clear();
}

ForwardResult Forward(const Network& net, const Matrix& x, Mode mode,
                      Rng* dropout_rng, Tape* tape) {
  CheckInput(net, x);
  if (tape != nullptr) tape->Clear();

  ForwardResult result;
  result.trace.hidden.reserve(net.num_layers() - 1);
  Matrix current = x;
  for (std::size_t i = 0; i < net.num_layers(); ++i) {
    const DenseLayer& layer = net.layer(i);
    Matrix mask;
    if (mode == Mode::kTrain && layer.dropout_rate > 0.0) {
      if (dropout_rng == nullptr) {
        throw StateError("Forward layer " + std::to_string(i) +
                         ": dropout in train mode needs an Rng");
      }
      const double keep_scale = 1.0 / (1.0 - layer.dropout_rate);
      mask = Matrix(current.rows(), current.cols());
      auto m = mask.data();
      auto v = current.data();
      for (std::size_t k = 0; k < m.size(); ++k) {
        m[k] = dropout_rng->Uniform() < layer.dropout_rate ? 0.0 : keep_scale;
        v[k] *= m[k];
      }
    }
    Matrix out = Affine(layer, current);
    ApplyActivation(layer.activation, out);

    if (tape != nullptr) {
      TapeAccess::inputs(*tape).push_back(std::move(current));
      TapeAccess::masks(*tape).push_back(std::move(mask));
      TapeAccess::outputs(*tape).push_back(out);
    }
    if (i + 1 < net.num_layers()) {
      result.trace.hidden.push_back(out);
    }
    current = std::move(out);
  }
  result.output = std::move(current);
  return result;
}

Matrix Predict(const Network& net, const Matrix& x) {
  CheckInput(net, x);
  Matrix current = x;
  for (const DenseLayer& layer : net.layers()) {
    Matrix out = Affine(layer, current);
    ApplyActivation(layer.activation, out);
    current = std::move(out);
  }
  return current;
}

Matrix TraceConcat(const Network& net, const Matrix& x) {
  CheckInput(net, x);
  Matrix features(x.rows(), net.trace_width());
  Matrix current = x;
  std::size_t offset = 0;
  for (std::size_t i = 0; i + 1 < net.num_layers(); ++i) {
    const DenseLayer& layer = net.layer(i);
    Matrix out = Affine(layer, current);
    ApplyActivation(layer.activation, out);
    for (std::size_t r = 0; r < out.rows(); ++r) {
      auto src = out.row(r);
      std::copy(src.begin(), src.end(), features.row(r).begin() + offset);
    }
    offset += out.cols();
    current = std::move(out);
  }
  return features;
}

Gradients Backprop(const Network& net, const Tape& tape,
                   const Matrix& grad_output) {
  const auto& inputs = TapeAccess::inputs(tape);
  const auto& outputs = TapeAccess::outputs(tape);
  const auto& masks = TapeAccess::masks(tape);
  if (tape.empty()) {
    throw StateError("Backprop: no recorded forward pass");
  }
  if (inputs.size() != net.num_layers()) {
    throw StateError("Backprop: tape was recorded on a different network");
  }
  const Matrix& y = outputs.back();
  if (grad_output.rows() != y.rows() || grad_output.cols() != y.cols()) {
    throw DimensionError("Backprop output gradient", y.shape_string(),
                         grad_output.shape_string());
  }

  const std::size_t n = net.num_layers();
  Gradients g;
  g.weights.resize(n);
  g.bias.resize(n);

  Matrix delta = grad_output;
  for (std::size_t k = n; k-- > 0;) {
    const DenseLayer& layer = net.layer(k);
    ChainActivation(layer.activation, outputs[k], delta);
    g.weights[k] = TransposedMultiply(delta, inputs[k]);
    std::vector<double> db(layer.out_dim(), 0.0);
    for (std::size_t r = 0; r < delta.rows(); ++r) {
      auto row = delta.row(r);
      for (std::size_t c = 0; c < row.size(); ++c) db[c] += row[c];
    }
    g.bias[k] = std::move(db);

    Matrix upstream = Multiply(delta, layer.weights);
    if (!masks[k].empty()) {
      auto u = upstream.data();
      auto m = masks[k].data();
      for (std::size_t i = 0; i < u.size(); ++i) u[i] *= m[i];
    }
    delta = std::move(upstream);
  }
  g.input = std::move(delta);
  return g;
}

AdamState MakeAdam(double learning_rate) {
  AdamState s;
  s.learning_rate = learning_rate;
  return s;
}

void AdamStep(AdamState& state, std::span<const std::span<double>> params,
              std::span<const std::span<const double>> grads) {
  if (params.size() != grads.size()) {
    throw DimensionError("AdamStep", std::to_string(params.size()) + " blocks",
                         std::to_string(grads.size()));
  }
  if (state.m.empty()) {
    for (const auto& p : params) {
      state.m.emplace_back(p.size(), 0.0);
      state.v.emplace_back(p.size(), 0.0);
    }
  }
  if (state.m.size() != params.size()) {
    throw DimensionError("AdamStep state",
                         std::to_string(state.m.size()) + " blocks",
                         std::to_string(params.size()));
  }
  for (std::size_t b = 0; b < params.size(); ++b) {
    if (params[b].size() != grads[b].size() ||
        params[b].size() != state.m[b].size()) {
      throw DimensionError("AdamStep block " + std::to_string(b),
                           std::to_string(state.m[b].size()),
                           std::to_string(grads[b].size()));
    }
  }

  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(state.beta1, t);
  const double correction2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t b = 0; b < params.size(); ++b) {
    auto p = params[b];
    auto g = grads[b];
    auto& m = state.m[b];
    auto& v = state.v[b];
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g[i];
      v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g[i] * g[i];
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      p[i] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
  }
}

void AdamStep(AdamState& state, Network& net, const Gradients& grads) {
  if (grads.weights.size() != net.num_layers()) {
    throw DimensionError("AdamStep gradients",
                         std::to_string(net.num_layers()) + " layers",
                         std::to_string(grads.weights.size()));
  }
  std::vector<std::span<double>> params;
  std::vector<std::span<const double>> gs;
  for (std::size_t i = 0; i < net.num_layers(); ++i) {
    DenseLayer& l = net.layer(i);
    if (grads.weights[i].rows() != l.weights.rows() ||
        grads.weights[i].cols() != l.weights.cols()) {
      throw DimensionError("AdamStep layer " + std::to_string(i),
                           l.weights.shape_string(),
                           grads.weights[i].shape_string());
    }
    params.emplace_back(l.weights.data());
    gs.emplace_back(grads.weights[i].data());
    params.emplace_back(l.bias);
    gs.emplace_back(grads.bias[i]);
  }
  AdamStep(state, params, gs);
}

Loss MeanSquaredError(const Matrix& prediction, const Matrix& target) {
  if (prediction.rows() != target.rows() || prediction.cols() != target.cols()) {
    throw DimensionError("MeanSquaredError", prediction.shape_string(),
                         target.shape_string());
  }
  Loss loss;
  loss.grad = Matrix(prediction.rows(), prediction.cols());
  if (prediction.empty()) return loss;
  const double n = static_cast<double>(prediction.size());
  auto p = prediction.data();
  auto t = target.data();
  auto g = loss.grad.data();
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - t[i];
    sum += d * d;
    g[i] = 2.0 * d / n;
  }
  loss.value = sum / n;
  return loss;
}

Loss BinaryCrossEntropy(const Matrix& prediction, const Matrix& target) {
  if (prediction.rows() != target.rows() || prediction.cols() != target.cols()) {
    throw DimensionError("BinaryCrossEntropy", prediction.shape_string(),
                         target.shape_string());
  }
  Loss loss;
  loss.grad = Matrix(prediction.rows(), prediction.cols());
  if (prediction.empty()) return loss;
  const double n = static_cast<double>(prediction.size());
  auto p = prediction.data();
  auto t = target.data();
  auto g = loss.grad.data();
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double q =
        std::clamp(p[i], kProbabilityClamp, 1.0 - kProbabilityClamp);
    sum -= t[i] * std::log(q) + (1.0 - t[i]) * std::log(1.0 - q);
    g[i] = (q - t[i]) / (q * (1.0 - q)) / n;
  }
  loss.value = sum / n;
  return loss;
}

Loss SoftmaxCrossEntropy(const Matrix& logits, std::span<const int> labels) {
  if (labels.size() != logits.rows()) {
    throw DimensionError("SoftmaxCrossEntropy labels",
                         std::to_string(logits.rows()),
                         std::to_string(labels.size()));
  }
  Loss loss;
  loss.grad = Matrix(logits.rows(), logits.cols());
  if (logits.rows() == 0) return loss;
  const double n = static_cast<double>(logits.rows());
  double sum = 0.0;
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    const int label = labels[r];
    if (label < 0 || static_cast<std::size_t>(label) >= logits.cols()) {
      throw InvalidArgument("SoftmaxCrossEntropy: label " +
                            std::to_string(label) + " out of range");
    }
    auto z = logits.row(r);
    const double zmax = *std::max_element(z.begin(), z.end());
    double denom = 0.0;
    for (double v : z) denom += std::exp(v - zmax);
    const double log_denom = zmax + std::log(denom);
    sum += log_denom - z[static_cast<std::size_t>(label)];
    auto g = loss.grad.row(r);
    for (std::size_t c = 0; c < z.size(); ++c) {
      const double prob = std::exp(z[c] - log_denom);
      g[c] = (prob - (static_cast<int>(c) == label ? 1.0 : 0.0)) / n;
    }
  }
  loss.value = sum / n;
  return loss;
}

}  // namespace a3::nn
