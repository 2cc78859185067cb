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

#include "a3/alarm.h"

#include <algorithm>
#include <cmath>

#include "a3/error.h"

namespace a3 {
namespace {

constexpr std::size_t kScoreChunk = 2048;

}  // namespace

void AlarmSpec::Validate() const {
  if (lambda < 0.0) throw InvalidArgument("AlarmSpec: lambda must be >= 0");
  if (regularizer_weight < 0.0) {
    throw InvalidArgument("AlarmSpec: regularizer_weight must be >= 0");
  }
  if (batch_size < 2) throw InvalidArgument("AlarmSpec: batch_size < 2");
  if (anomaly_fraction < 0.0 || anomaly_fraction >= 1.0) {
    throw InvalidArgument("AlarmSpec: anomaly_fraction must lie in [0, 1)");
  }
  if (hidden_widths.empty()) throw InvalidArgument("AlarmSpec: no hidden layers");
}

Matrix TraceFeatures(const Target& target, const Matrix& x) {
  return nn::TraceConcat(target.net, x);
}

nn::Network BuildAlarm(std::size_t trace_width, const AlarmSpec& spec,
                       Rng& init_rng) {
  spec.Validate();
  std::vector<nn::LayerSpec> layers;
  for (std::size_t w : spec.hidden_widths) {
    layers.push_back({w, nn::Activation::kReLU, 0.0});
  }
  layers.push_back({1, nn::Activation::kSigmoid, spec.dropout_rate});
  return nn::Network::Build(trace_width, layers, init_rng);
}

AlarmLoss ComputeAlarmLoss(const Matrix& score_real, const Matrix& labels,
                           const Matrix& score_generated, double lambda,
                           double regularizer_weight) {
  nn::Loss real = nn::BinaryCrossEntropy(score_real, labels);
  const Matrix ones(score_generated.rows(), score_generated.cols(), 1.0);
  nn::Loss generated = nn::BinaryCrossEntropy(score_generated, ones);

  AlarmLoss out;
  out.value = real.value + lambda * generated.value;
  out.grad_real = std::move(real.grad);
  out.grad_generated = std::move(generated.grad);
  for (double& g : out.grad_generated.data()) g *= lambda;

  if (regularizer_weight > 0.0 && !score_real.empty()) {
    const double n = static_cast<double>(score_real.size());
    double reg = 0.0;
    auto s = score_real.data();
    auto g = out.grad_real.data();
    for (std::size_t i = 0; i < s.size(); ++i) {
      reg += std::abs(1.0 - s[i]);
      g[i] += regularizer_weight * (s[i] < 1.0 ? -1.0 : 1.0) / n;
    }
    out.value += regularizer_weight * reg / n;
  }
  return out;
}

AlarmTrainReport TrainAlarm(const Target& target,
                            const AnomalyGenerator& generator,
                            nn::Network& alarm, const Matrix& normal_data,
                            const Matrix& known_anomalies,
                            const AlarmSpec& spec, std::uint64_t seed) {
  spec.Validate();
  if (normal_data.rows() == 0) throw InvalidArgument("TrainAlarm: no normal data");
  if (normal_data.cols() != target.net.input_dim()) {
    throw DimensionError("TrainAlarm normal data",
                         "width " + std::to_string(target.net.input_dim()),
                         std::to_string(normal_data.cols()));
  }
  if (known_anomalies.rows() > 0 &&
      known_anomalies.cols() != normal_data.cols()) {
    throw DimensionError("TrainAlarm anomalies",
                         "width " + std::to_string(normal_data.cols()),
                         std::to_string(known_anomalies.cols()));
  }
  if (alarm.input_dim() != target.net.trace_width()) {
    throw DimensionError("TrainAlarm alarm input",
                         std::to_string(target.net.trace_width()),
                         std::to_string(alarm.input_dim()));
  }

  AlarmTrainReport report;
  const bool have_anomalies = known_anomalies.rows() > 0;
  if (!have_anomalies && generator.kind == GeneratorKind::kNoise) {
    report.warnings.push_back(
        "training with zero known anomalies and a noise generator; only the "
        "counterexample term separates the classes");
  }

  const std::size_t anomalies_per_batch =
      have_anomalies
          ? std::max<std::size_t>(
                1, static_cast<std::size_t>(std::lround(
                       spec.anomaly_fraction *
                       static_cast<double>(spec.batch_size))))
          : 0;
  const std::size_t normals_per_batch = spec.batch_size - anomalies_per_batch;

  Rng rng(seed);
  Rng gen_rng(DeriveSeed(seed, "generator"));
  nn::AdamState adam = nn::MakeAdam(spec.learning_rate);
  nn::Tape tape;

  for (std::size_t epoch = 0; epoch < spec.epochs; ++epoch) {
    const std::vector<std::size_t> order = rng.Permutation(normal_data.rows());
    double total = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size();
         start += normals_per_batch) {
      const std::size_t end = std::min(order.size(), start + normals_per_batch);
      std::vector<std::size_t> idx(order.begin() + static_cast<long>(start),
                                   order.begin() + static_cast<long>(end));
      Matrix real = GatherRows(normal_data, idx);
      Matrix labels(real.rows(), 1, 0.0);
      if (have_anomalies) {
        // Keep the anomaly share constant on a short final chunk.
        const std::size_t k = std::max<std::size_t>(
            1, anomalies_per_batch * idx.size() / normals_per_batch);
        std::vector<std::size_t> pick(k);
        for (std::size_t& p : pick) p = rng.Index(known_anomalies.rows());
        real = VStack(real, GatherRows(known_anomalies, pick));
        labels = VStack(labels, Matrix(k, 1, 1.0));
      }
      const Matrix generated = generator.Generate(real, gen_rng);
      const std::size_t n_real = real.rows();

      const Matrix features = TraceFeatures(target, VStack(real, generated));
      nn::ForwardResult fwd =
          nn::Forward(alarm, features, nn::Mode::kTrain, &rng, &tape);

      Matrix score_real(n_real, 1);
      Matrix score_gen(generated.rows(), 1);
      for (std::size_t r = 0; r < n_real; ++r) score_real(r, 0) = fwd.output(r, 0);
      for (std::size_t r = 0; r < generated.rows(); ++r) {
        score_gen(r, 0) = fwd.output(n_real + r, 0);
      }
      const AlarmLoss loss = ComputeAlarmLoss(score_real, labels, score_gen,
                                              spec.lambda,
                                              spec.regularizer_weight);
      const Matrix grad = VStack(loss.grad_real, loss.grad_generated);
      const nn::Gradients grads = nn::Backprop(alarm, tape, grad);
      nn::AdamStep(adam, alarm, grads);
      total += loss.value;
      ++batches;
    }
    report.epoch_loss.push_back(total / static_cast<double>(batches));
  }
  return report;
}

AlarmTrainReport TrainAlarm(Detector& detector, const Matrix& normal_data,
                            const Matrix& known_anomalies,
                            const AlarmSpec& spec, std::uint64_t seed) {
  return TrainAlarm(detector.target, detector.generator, detector.alarm,
                    normal_data, known_anomalies, spec, seed);
}

std::vector<double> Detect(const Detector& detector, const Matrix& x) {
  if (detector.alarm.empty()) throw StateError("Detect: alarm not built");
  if (x.cols() != detector.target.net.input_dim()) {
    throw DimensionError("Detect",
                         "width " + std::to_string(detector.target.net.input_dim()),
                         std::to_string(x.cols()));
  }
  std::vector<double> scores;
  scores.reserve(x.rows());
  std::vector<std::size_t> idx;
  for (std::size_t start = 0; start < x.rows(); start += kScoreChunk) {
    const std::size_t end = std::min(x.rows(), start + kScoreChunk);
    idx.resize(end - start);
    for (std::size_t i = start; i < end; ++i) idx[i - start] = i;
    const Matrix out = nn::Predict(
        detector.alarm, TraceFeatures(detector.target, GatherRows(x, idx)));
    for (std::size_t r = 0; r < out.rows(); ++r) scores.push_back(out(r, 0));
  }
  return scores;
}

}  // namespace a3
