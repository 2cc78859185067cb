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

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "a3/alarm.h"
#include "a3/error.h"
#include "a3/serialize.h"

namespace a3 {
namespace {

double Bce1(double p) { return -std::log(p); }

TEST(TraceFeatures, PresetWidths) {
  Rng rng(1);
  const Target kdd = BuildTarget(TargetPreset("nsl-kdd", 122), rng);
  EXPECT_EQ(TraceFeatures(kdd, Matrix(9, 122, 0.1)).cols(), 725u);
  EXPECT_EQ(TraceFeatures(kdd, Matrix(9, 122, 0.1)).rows(), 9u);
  const Target cc = BuildTarget(TargetPreset("creditcard", 30), rng);
  EXPECT_EQ(TraceFeatures(cc, Matrix(2, 30, 0.1)).cols(), 175u);
}

TEST(TraceFeatures, DimensionMismatchIsAnError) {
  Rng rng(1);
  const Target t = BuildTarget(TargetPreset("creditcard", 30), rng);
  EXPECT_THROW(TraceFeatures(t, Matrix(2, 29)), DimensionError);
}

TEST(AlarmLoss, PerfectPredictionsNearZero) {
  const double hi = 1 - nn::kProbabilityClamp;
  const AlarmLoss l = ComputeAlarmLoss(Matrix({{0.0}, {1.0}}),
                                       Matrix({{0.0}, {1.0}}),
                                       Matrix({{1.0}, {1.0}}), 1.0);
  EXPECT_GE(l.value, 0.0);
  EXPECT_LE(l.value, 2 * Bce1(hi) + 1e-15);
}

TEST(AlarmLoss, SymmetricHalves) {
  const AlarmLoss l =
      ComputeAlarmLoss(Matrix({{0.5}}), Matrix({{0.0}}), Matrix({{0.5}}), 1.0);
  EXPECT_NEAR(l.value, 2 * std::log(2.0), 1e-12);
}

TEST(AlarmLoss, ZeroLambdaIsPlainBce) {
  const Matrix real = {{0.2}, {0.7}, {0.9}};
  const Matrix labels = {{0}, {1}, {0}};
  const AlarmLoss l = ComputeAlarmLoss(real, labels, Matrix({{0.3}, {0.1}, {0.6}}), 0.0);
  EXPECT_NEAR(l.value, nn::BinaryCrossEntropy(real, labels).value, 1e-15);
  for (double g : l.grad_generated.data()) EXPECT_EQ(g, 0.0);
}

TEST(AlarmLoss, Additivity) {
  const Matrix real = {{0.2}, {0.7}, {0.9}, {0.4}};
  const Matrix labels = {{0}, {1}, {0}, {0}};
  const Matrix gen = {{0.3}, {0.1}, {0.6}, {0.95}};
  const double gen_bce = nn::BinaryCrossEntropy(gen, Matrix(4, 1, 1.0)).value;
  for (double lambda : {0.5, 1.0, 2.5}) {
    EXPECT_NEAR(ComputeAlarmLoss(real, labels, gen, lambda).value,
                ComputeAlarmLoss(real, labels, gen, 0.0).value + lambda * gen_bce,
                1e-12);
  }
}

TEST(AlarmLoss, GradientsMatchFiniteDifferences) {
  Matrix real = {{0.2}, {0.7}, {0.4}};
  const Matrix labels = {{0}, {1}, {0}};
  Matrix gen = {{0.3}, {0.8}, {0.5}};
  const double lambda = 1.3;
  const double reg = 0.4;
  const AlarmLoss l = ComputeAlarmLoss(real, labels, gen, lambda, reg);
  const double h = 1e-6;
  for (std::size_t i = 0; i < 3; ++i) {
    Matrix up = real;
    Matrix down = real;
    up(i, 0) += h;
    down(i, 0) -= h;
    const double num = (ComputeAlarmLoss(up, labels, gen, lambda, reg).value -
                        ComputeAlarmLoss(down, labels, gen, lambda, reg).value) /
                       (2 * h);
    EXPECT_NEAR(l.grad_real(i, 0), num, 1e-6);
    up = gen;
    down = gen;
    up(i, 0) += h;
    down(i, 0) -= h;
    const double num_gen =
        (ComputeAlarmLoss(real, labels, up, lambda, reg).value -
         ComputeAlarmLoss(real, labels, down, lambda, reg).value) /
        (2 * h);
    EXPECT_NEAR(l.grad_generated(i, 0), num_gen, 1e-6);
  }
}

TEST(AlarmSpec, NegativeLambdaIsInvalid) {
  AlarmSpec spec;
  spec.lambda = -1;
  EXPECT_THROW(spec.Validate(), InvalidArgument);
}

TEST(BuildAlarm, DefaultArchitecture) {
  Rng rng(1);
  const nn::Network alarm = BuildAlarm(725, AlarmSpec{}, rng);
  std::vector<std::size_t> widths;
  for (const auto& l : alarm.layers()) widths.push_back(l.out_dim());
  EXPECT_EQ(widths, (std::vector<std::size_t>{1000, 500, 200, 75, 1}));
  EXPECT_EQ(alarm.input_dim(), 725u);
  EXPECT_EQ(alarm.layers().back().activation, nn::Activation::kSigmoid);
}

// Normals fill the low half of each coordinate; anomalies the high half of
// the first two coordinates.
struct Toy {
  Matrix normal;
  Matrix anomalies;
  Matrix validation_normal;
  Matrix validation_anomalies;
  Target target;
};

Matrix ToySamples(std::size_t n, bool anomalous, Rng& rng) {
  Matrix x(n, 8);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < 8; ++c) {
      const bool shifted = anomalous && c < 2;
      x(r, c) = shifted ? rng.Uniform(0.6, 1.0) : rng.Uniform(0.0, 0.4);
    }
  }
  return x;
}

Toy MakeToy() {
  Rng rng(31);
  Toy t;
  t.normal = ToySamples(512, false, rng);
  t.anomalies = ToySamples(20, true, rng);
  t.validation_normal = ToySamples(100, false, rng);
  t.validation_anomalies = ToySamples(100, true, rng);
  Rng init(7);
  t.target = BuildTarget({TargetKind::kAutoencoder, {12, 4, 12}, 8, 0, 0.1}, init);
  TrainOptions o;
  o.epochs = 10;
  o.batch_size = 32;
  o.seed = 3;
  TrainTarget(t.target, t.normal, {}, o);
  return t;
}

AlarmSpec ToySpec() {
  AlarmSpec s;
  s.hidden_widths = {32, 16};
  s.epochs = 15;
  s.learning_rate = 1e-3;
  s.batch_size = 32;
  return s;
}

double Mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

TEST(TrainAlarm, TargetStaysFrozen) {
  Toy toy = MakeToy();
  Rng init(1);
  Detector d{toy.target, BuildAlarm(toy.target.net.trace_width(), ToySpec(), init), {}};
  const std::string before = SerializeNetwork(d.target.net);
  TrainAlarm(d, toy.normal, toy.anomalies, ToySpec(), 5);
  EXPECT_EQ(SerializeNetwork(d.target.net), before);
}

TEST(TrainAlarm, SeparatesKnownAnomalies) {
  Toy toy = MakeToy();
  Rng init(1);
  Detector d{toy.target, BuildAlarm(toy.target.net.trace_width(), ToySpec(), init), {}};
  TrainAlarm(d, toy.normal, toy.anomalies, ToySpec(), 5);
  EXPECT_LT(Mean(Detect(d, toy.validation_normal)),
            Mean(Detect(d, toy.validation_anomalies)));
}

TEST(TrainAlarm, DeterministicForSeed) {
  Toy toy = MakeToy();
  auto train = [&] {
    Rng init(1);
    Detector d{toy.target, BuildAlarm(toy.target.net.trace_width(), ToySpec(), init), {}};
    TrainAlarm(d, toy.normal, toy.anomalies, ToySpec(), 17);
    return d.alarm;
  };
  EXPECT_EQ(SerializeNetwork(train()), SerializeNetwork(train()));
}

TEST(TrainAlarm, NoAnomaliesWithNoiseWarns) {
  Toy toy = MakeToy();
  AlarmSpec spec = ToySpec();
  spec.epochs = 1;
  Rng init(1);
  Detector d{toy.target, BuildAlarm(toy.target.net.trace_width(), spec, init), {}};
  const AlarmTrainReport r = TrainAlarm(d, toy.normal, Matrix(0, 8), spec, 5);
  EXPECT_FALSE(r.warnings.empty());
  EXPECT_EQ(r.epoch_loss.size(), 1u);
}

TEST(TrainAlarm, RegularizerRaisesScores) {
  Toy toy = MakeToy();
  auto mean_score = [&](double reg) {
    AlarmSpec spec = ToySpec();
    spec.regularizer_weight = reg;
    Rng init(1);
    Detector d{toy.target, BuildAlarm(toy.target.net.trace_width(), spec, init), {}};
    TrainAlarm(d, toy.normal, toy.anomalies, spec, 5);
    return Mean(Detect(d, toy.validation_normal));
  };
  EXPECT_GT(mean_score(0.5), mean_score(0.0));
}

TEST(Detect, ScoresInUnitIntervalAndRepeatable) {
  Toy toy = MakeToy();
  Rng init(1);
  Detector d{toy.target, BuildAlarm(toy.target.net.trace_width(), ToySpec(), init), {}};
  Rng rng(4);
  Matrix x(50, 8);
  for (double& v : x.data()) v = rng.Normal(0, 10);
  const std::vector<double> s = Detect(d, x);
  for (double v : s) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  EXPECT_EQ(s, Detect(d, x));
  EXPECT_THROW(Detect(d, Matrix(1, 7)), DimensionError);
}

}  // namespace
}  // namespace a3
