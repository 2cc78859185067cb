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

// The alarm network and the combined detector. The alarm never sees the
// input directly: it classifies the frozen target's hidden activations
// h_1 .. h_{L-1}, trained on real labelled samples plus generated
// counterexamples pinned to the anomalous label.

#ifndef A3_ALARM_H_
#define A3_ALARM_H_

#include <cstdint>
#include <string>
#include <vector>

#include "a3/anomaly.h"
#include "a3/matrix.h"
#include "a3/nn.h"
#include "a3/target.h"

namespace a3 {

struct AlarmSpec {
  std::vector<std::size_t> hidden_widths = {1000, 500, 200, 75};
  double lambda = 1.0;  // weight of the counterexample term
  double learning_rate = 1e-5;
  std::size_t epochs = 60;
  std::size_t batch_size = 256;
  // Share of each real minibatch filled with (oversampled) known anomalies.
  double anomaly_fraction = 0.1;
  // Weight of the shifted output regulariser lambda_reg * |1 - y|; 0 = off.
  double regularizer_weight = 0.0;
  double dropout_rate = 0.1;

  void Validate() const;
};

// Concatenated hidden activations of the target, one row per sample.
Matrix TraceFeatures(const Target& target, const Matrix& x);

// Untrained alarm: hidden ReLU stack + one sigmoid output.
nn::Network BuildAlarm(std::size_t trace_width, const AlarmSpec& spec,
                       Rng& init_rng);

struct AlarmLoss {
  double value = 0.0;
  Matrix grad_real;       // d value / d score_real
  Matrix grad_generated;  // d value / d score_generated
};

// BCE(labels, score_real) + lambda * BCE(1, score_generated)
//   [+ regularizer_weight * mean |1 - score_real|].
AlarmLoss ComputeAlarmLoss(const Matrix& score_real, const Matrix& labels,
                           const Matrix& score_generated, double lambda,
                           double regularizer_weight = 0.0);

struct Detector {
  Target target;
  nn::Network alarm;
  AnomalyGenerator generator;
};

struct AlarmTrainReport {
  std::vector<double> epoch_loss;
  std::vector<std::string> warnings;
};

// Updates only `alarm`. Each step takes a real minibatch (normals plus
// anomaly_fraction oversampled known anomalies when any exist) and the same
// number of generated samples derived from that minibatch.
AlarmTrainReport TrainAlarm(const Target& target,
                            const AnomalyGenerator& generator,
                            nn::Network& alarm, const Matrix& normal_data,
                            const Matrix& known_anomalies,
                            const AlarmSpec& spec, std::uint64_t seed);

AlarmTrainReport TrainAlarm(Detector& detector, const Matrix& normal_data,
                            const Matrix& known_anomalies,
                            const AlarmSpec& spec, std::uint64_t seed);

// Anomaly score in [0, 1] per row; higher means more anomalous. Read-only,
// safe to call concurrently.
std::vector<double> Detect(const Detector& detector, const Matrix& x);

}  // namespace a3

#endif  // A3_ALARM_H_
