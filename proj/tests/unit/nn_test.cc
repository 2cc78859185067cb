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
#include <random>

#include <gtest/gtest.h>

#include "a3/error.h"
#include "a3/nn.h"
#include "a3/serialize.h"
#include "a3/target.h"
#include "test_support.h"

namespace a3::nn {
namespace {

DenseLayer Identity(std::size_t n, Activation act) {
  DenseLayer l;
  l.weights = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) l.weights(i, i) = 1.0;
  l.bias.assign(n, 0.0);
  l.activation = act;
  return l;
}

TEST(Forward, LinearIdentity) {
  Network net({Identity(2, Activation::kLinear)});
  EXPECT_EQ(Predict(net, Matrix({{1, 2}})), Matrix({{1, 2}}));
}

TEST(Forward, ReluClampsNegatives) {
  Network net({Identity(2, Activation::kReLU)});
  EXPECT_EQ(Predict(net, Matrix({{-1, 2}})), Matrix({{0, 2}}));
}

TEST(Forward, MatchesNaiveOracle) {
  Rng rng(42);
  const LayerSpec specs[] = {{6, Activation::kReLU}, {3, Activation::kSigmoid}};
  const Network net = Network::Build(4, specs, rng);
  Matrix x(5, 4);
  for (double& v : x.data()) v = rng.Normal();
  const Matrix got = Predict(net, x);
  const Matrix want = testing::NaiveForward(net, x);
  ASSERT_EQ(got.rows(), want.rows());
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_NEAR(got.data()[i], want.data()[i], 1e-12);
  }
}

TEST(Forward, DimensionErrorNamesLayer) {
  Network net({Identity(3, Activation::kLinear), Identity(3, Activation::kLinear)});
  try {
    Predict(net, Matrix(1, 2));
    FAIL() << "expected DimensionError";
  } catch (const DimensionError& e) {
    EXPECT_NE(std::string(e.what()).find("layer 0"), std::string::npos)
        << e.what();
  }
}

TEST(Forward, TraceExcludesInputAndOutput) {
  Rng rng(1);
  const LayerSpec specs[] = {
      {5, Activation::kReLU}, {4, Activation::kReLU}, {2, Activation::kSigmoid}};
  const Network net = Network::Build(3, specs, rng);
  const ForwardResult r = Forward(net, Matrix(7, 3, 0.5), Mode::kInfer);
  ASSERT_EQ(r.trace.hidden.size(), 2u);
  EXPECT_EQ(r.trace.width(), 9u);
  EXPECT_EQ(net.trace_width(), 9u);
  EXPECT_EQ(r.trace.Concat().rows(), 7u);
  EXPECT_EQ(r.output.cols(), 2u);
}

TEST(Forward, InferModeIgnoresDropout) {
  Rng rng(3);
  const LayerSpec with[] = {{8, Activation::kReLU}, {2, Activation::kLinear, 0.1}};
  Network a = Network::Build(4, with, rng);
  Network b = a;
  b.layer(1).dropout_rate = 0.0;
  const Matrix x(6, 4, 0.3);
  EXPECT_EQ(Predict(a, x), Predict(b, x));
}

TEST(Forward, TrainModeDropoutNeedsRng) {
  Rng rng(3);
  const LayerSpec specs[] = {{2, Activation::kLinear, 0.1}};
  const Network net = Network::Build(2, specs, rng);
  EXPECT_THROW(Forward(net, Matrix(1, 2), Mode::kTrain), StateError);
}

TEST(Forward, DeterministicGivenSeed) {
  Rng init(9);
  const LayerSpec specs[] = {{16, Activation::kReLU}, {3, Activation::kSigmoid, 0.1}};
  const Network net = Network::Build(5, specs, init);
  const Matrix x(4, 5, 0.7);
  Rng r1(11);
  Rng r2(11);
  EXPECT_EQ(Forward(net, x, Mode::kTrain, &r1).output,
            Forward(net, x, Mode::kTrain, &r2).output);
}

TEST(Forward, ActivationRanges) {
  Rng rng(5);
  const LayerSpec specs[] = {{32, Activation::kReLU}, {16, Activation::kSigmoid}};
  const Network net = Network::Build(8, specs, rng);
  Matrix x(20, 8);
  for (double& v : x.data()) v = rng.Normal(0, 5);
  const ForwardResult r = Forward(net, x, Mode::kInfer);
  for (double v : r.trace.hidden[0].data()) EXPECT_GE(v, 0.0);
  for (double v : r.output.data()) {
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(Backprop, ScalarChainRule) {
  DenseLayer l;
  l.weights = Matrix({{2}});
  l.bias = {0};
  Network net({l});
  Tape tape;
  const ForwardResult r = Forward(net, Matrix({{1}}), Mode::kTrain, nullptr, &tape);
  // L = 1/2 (yhat - y)^2 with y = 0: dL/dyhat = yhat = 2, dL/dW = 2 * x = 2.
  const Gradients g = Backprop(net, tape, Matrix({{r.output(0, 0) - 0.0}}));
  EXPECT_DOUBLE_EQ(g.weights[0](0, 0), 2.0);
}

TEST(Backprop, ZeroUpstreamGivesZero) {
  Rng rng(8);
  const LayerSpec specs[] = {{5, Activation::kReLU}, {3, Activation::kSigmoid}};
  const Network net = Network::Build(4, specs, rng);
  Tape tape;
  Forward(net, Matrix(2, 4, 0.4), Mode::kTrain, nullptr, &tape);
  const Gradients g = Backprop(net, tape, Matrix(2, 3, 0.0));
  for (const Matrix& w : g.weights) {
    for (double v : w.data()) EXPECT_EQ(v, 0.0);
  }
  for (const auto& b : g.bias) {
    for (double v : b) EXPECT_EQ(v, 0.0);
  }
}

TEST(Backprop, EmptyTapeIsAnError) {
  Network net({Identity(2, Activation::kLinear)});
  Tape tape;
  EXPECT_THROW(Backprop(net, tape, Matrix(1, 2)), StateError);
}

TEST(Backprop, DoesNotMutateParameters) {
  Rng rng(4);
  const LayerSpec specs[] = {{3, Activation::kReLU}, {2, Activation::kLinear}};
  const Network net = Network::Build(3, specs, rng);
  const Network before = net;
  Tape tape;
  Forward(net, Matrix(2, 3, 1.0), Mode::kTrain, nullptr, &tape);
  Backprop(net, tape, Matrix(2, 2, 1.0));
  EXPECT_EQ(net, before);
}

TEST(Backprop, MatchesFiniteDifferences) {
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 25; ++trial) {
    const Network net = testing::RandomSmallNet(gen, 3, 8);
    const testing::GradCheckResult r =
        testing::GradientCheck(net, 1000 + static_cast<std::uint64_t>(trial));
    EXPECT_LT(r.max_relative_error, 1e-4) << "trial " << trial;
    EXPECT_GT(r.checked, 0u);
  }
}

TEST(Adam, FirstStepMovesByLearningRate) {
  AdamState state = MakeAdam(0.001);
  std::vector<double> w = {0.5};
  std::vector<double> g = {1.0};
  std::span<double> params[] = {w};
  std::span<const double> grads[] = {g};
  AdamStep(state, params, grads);
  EXPECT_NEAR(w[0] - 0.5, -0.001, 1e-6);
  EXPECT_EQ(state.step, 1u);
}

TEST(Adam, ZeroGradientLeavesParameters) {
  AdamState state = MakeAdam(0.01);
  std::vector<double> w = {0.5, -2.0};
  std::vector<double> g = {0.0, 0.0};
  std::span<double> params[] = {w};
  std::span<const double> grads[] = {g};
  AdamStep(state, params, grads);
  EXPECT_EQ(w[0], 0.5);
  EXPECT_EQ(w[1], -2.0);
}

TEST(Adam, DescendsQuadratic) {
  AdamState state = MakeAdam(0.001);
  std::vector<double> w = {1.0};
  std::span<double> params[] = {w};
  double prev = std::abs(w[0]);
  for (int step = 0; step < 100; ++step) {
    std::vector<double> g = {2 * w[0]};
    std::span<const double> grads[] = {g};
    AdamStep(state, params, grads);
    EXPECT_LT(std::abs(w[0]), prev) << "step " << step;
    prev = std::abs(w[0]);
  }
  EXPECT_EQ(state.step, 100u);
}

TEST(Adam, ShapeMismatchIsAnError) {
  AdamState state = MakeAdam(0.01);
  std::vector<double> w = {0.5, 1.0};
  std::vector<double> g = {1.0};
  std::span<double> params[] = {w};
  std::span<const double> grads[] = {g};
  EXPECT_THROW(AdamStep(state, params, grads), DimensionError);
}

TEST(Loss, MseExamples) {
  EXPECT_EQ(MeanSquaredError(Matrix({{1, 1}}), Matrix({{1, 1}})).value, 0.0);
  const Loss l = MeanSquaredError(Matrix({{0, 2}}), Matrix({{1, 0}}));
  EXPECT_DOUBLE_EQ(l.value, 2.5);
  EXPECT_DOUBLE_EQ(l.grad(0, 0), -1.0);  // 2 (0 - 1) / 2
  EXPECT_DOUBLE_EQ(l.grad(0, 1), 2.0);   // 2 (2 - 0) / 2
}

TEST(Loss, BceHalfIsLn2) {
  EXPECT_NEAR(BinaryCrossEntropy(Matrix({{0.5}}), Matrix({{1}})).value,
              std::log(2.0), 1e-12);
}

TEST(Loss, BceClampsExtremes) {
  const Loss l = BinaryCrossEntropy(Matrix({{0.0, 1.0}}), Matrix({{1, 0}}));
  EXPECT_TRUE(std::isfinite(l.value));
  EXPECT_NEAR(l.value, -std::log(kProbabilityClamp), 1e-6);
}

TEST(Loss, ShapeMismatchIsAnError) {
  EXPECT_THROW(MeanSquaredError(Matrix(1, 2), Matrix(2, 1)), DimensionError);
  EXPECT_THROW(BinaryCrossEntropy(Matrix(1, 2), Matrix(1, 3)), DimensionError);
}

TEST(Loss, SoftmaxCrossEntropyIsStable) {
  const int labels[] = {0, 1};
  const Loss l = SoftmaxCrossEntropy(Matrix({{1000, 0}, {0, 0}}), labels);
  EXPECT_NEAR(l.value, (0.0 + std::log(2.0)) / 2, 1e-12);
  EXPECT_NEAR(l.grad(1, 1), (0.5 - 1.0) / 2, 1e-12);
}

TEST(Serialize, RoundTripIsBitExact) {
  Rng rng(21);
  const LayerSpec specs[] = {{7, Activation::kReLU},
                             {3, Activation::kSigmoid, 0.1}};
  const Network net = Network::Build(5, specs, rng);
  const std::string bytes = SerializeNetwork(net);
  const Network back = DeserializeNetwork(bytes);
  EXPECT_EQ(back, net);
  EXPECT_EQ(SerializeNetwork(back), bytes);
}

TEST(Serialize, TruncationReportsOffset) {
  Rng rng(21);
  const LayerSpec specs[] = {{3, Activation::kReLU}};
  const std::string bytes = SerializeNetwork(Network::Build(2, specs, rng));
  try {
    DeserializeNetwork(bytes.substr(0, bytes.size() - 3));
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_GT(e.offset(), 0u);
    EXPECT_LE(e.offset(), bytes.size());
  }
}

TEST(TraceWidth, EveryPreset) {
  const std::pair<const char*, std::size_t> expected[] = {
      {"nsl-kdd", 725},      {"ids", 560},
      {"creditcard", 50 + 25 + 10 + 5 + 10 + 25 + 50}, {"mnist-dense-ae", 1600},
      {"mnist-dense-clf", 896}};
  for (const auto& [name, width] : expected) {
    Rng rng(1);
    const Target t = BuildTarget(TargetPreset(name, 30), rng);
    EXPECT_EQ(t.net.trace_width(), width) << name;
    EXPECT_EQ(TraceConcat(t.net, Matrix(2, 30, 0.5)).cols(), width) << name;
  }
}

}  // namespace
}  // namespace a3::nn
