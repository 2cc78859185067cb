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

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "a3/anomaly.h"
#include "a3/error.h"
#include "a3/nn.h"

namespace a3 {
namespace {

TEST(NoiseAnomaly, PreservesShape) {
  Rng rng(1);
  const Matrix x(7, 13, 0.2);
  const Matrix out = NoiseAnomaly(x, {}, rng);
  EXPECT_EQ(out.rows(), 7u);
  EXPECT_EQ(out.cols(), 13u);
}

TEST(NoiseAnomaly, SampleMomentsOverMillionDraws) {
  Rng rng(2024);
  const Matrix out = NoiseAnomaly(Matrix(1000, 1000), {}, rng);
  double sum = 0;
  for (double v : out.data()) sum += v;
  const double mean = sum / static_cast<double>(out.size());
  double ss = 0;
  for (double v : out.data()) ss += (v - mean) * (v - mean);
  const double variance = ss / static_cast<double>(out.size() - 1);
  EXPECT_NEAR(mean, 0.5, 0.01);
  EXPECT_NEAR(variance, 1.0, 0.02);
}

TEST(NoiseAnomaly, NotClippedAndIndependentOfValues) {
  Rng a(5);
  Rng b(5);
  const Matrix zeros(50, 20, 0.0);
  const Matrix ones(50, 20, 1.0);
  const Matrix out = NoiseAnomaly(zeros, {}, a);
  EXPECT_EQ(out, NoiseAnomaly(ones, {}, b));
  const auto [lo, hi] = std::minmax_element(out.data().begin(), out.data().end());
  EXPECT_LT(*lo, 0.0);
  EXPECT_GT(*hi, 1.0);
}

TEST(NoiseAnomaly, NonPositiveStddevIsAnError) {
  Rng rng(1);
  EXPECT_THROW(NoiseAnomaly(Matrix(1, 1), {0.5, 0.0}, rng), InvalidArgument);
}

TEST(KlDivergence, UnitGaussianIsZero) {
  EXPECT_EQ(KlDivergence(Matrix(3, 4, 0.0), Matrix(3, 4, 0.0)), 0.0);
}

TEST(KlDivergence, ShiftedMeanOneDim) {
  EXPECT_DOUBLE_EQ(KlDivergence(Matrix({{1.0}}), Matrix({{0.0}})), 0.5);
}

TEST(KlDivergence, MatchesClosedForm) {
  // 0.5 (mu^2 + sigma^2 - 1 - ln sigma^2), summed over dims.
  const double mu = 0.3;
  const double lv = -0.7;
  const double want = 0.5 * (mu * mu + std::exp(lv) - 1 - lv) * 2;
  EXPECT_NEAR(KlDivergence(Matrix({{mu, mu}}), Matrix({{lv, lv}})), want, 1e-15);
}

TEST(VaeSpec, MirrorsAroundLatent) {
  VaeSpec spec;
  EXPECT_EQ(spec.latent_dim(), 25u);
  EXPECT_NO_THROW(spec.Validate());
  spec.hidden_widths = {10, 4, 8};
  EXPECT_THROW(spec.Validate(), InvalidArgument);
}

VaeSpec SmallSpec() {
  VaeSpec spec;
  spec.hidden_widths = {16, 4, 16};
  spec.epochs = 40;
  spec.batch_size = 32;
  spec.learning_rate = 3e-3;
  return spec;
}

// Two prototype images with small noise.
Matrix TwoPrototypes(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Matrix x(n, 12);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < 12; ++c) {
      const bool on = (r % 2 == 0) ? c < 6 : c >= 6;
      x(r, c) = std::clamp((on ? 0.9 : 0.1) + rng.Normal(0, 0.05), 0.0, 1.0);
    }
  }
  return x;
}

TEST(TrainVae, EmptyDataIsAnError) {
  EXPECT_THROW(TrainVae(Matrix(0, 4), SmallSpec(), 1), InvalidArgument);
}

TEST(TrainVae, ReconstructionDecreases) {
  VaeHistory h;
  TrainVae(TwoPrototypes(256, 3), SmallSpec(), 7, &h);
  ASSERT_EQ(h.epoch_reconstruction.size(), 40u);
  EXPECT_LT(h.epoch_reconstruction.back(), h.epoch_reconstruction.front());
}

TEST(VaeAnomaly, UntrainedIsAnError) {
  Rng rng(1);
  const Vae vae = Vae::Build(12, SmallSpec(), rng);
  EXPECT_THROW(VaeAnomaly(vae, Matrix(2, 12), 5.0, rng), StateError);
}

TEST(VaeAnomaly, ZeroPerturbationIsMeanReconstruction) {
  const Matrix x = TwoPrototypes(64, 4);
  const Vae vae = TrainVae(x, SmallSpec(), 9);
  Rng rng(2);
  EXPECT_EQ(VaeAnomaly(vae, x, 0.0, rng), vae.Reconstruct(x));
}

TEST(VaeAnomaly, PerturbationLeavesTheManifold) {
  const Matrix x = TwoPrototypes(256, 5);
  const Vae vae = TrainVae(x, SmallSpec(), 11);
  Rng rng(3);
  const Matrix anomalies = VaeAnomaly(vae, x, 5.0, rng);
  EXPECT_EQ(anomalies.rows(), x.rows());
  EXPECT_EQ(anomalies.cols(), x.cols());
  const double perturbed = nn::MeanSquaredError(anomalies, x).value;
  const double mean = nn::MeanSquaredError(vae.Reconstruct(x), x).value;
  EXPECT_GT(perturbed, mean);
}

TEST(AnomalyGenerator, RepeatableGivenSeed) {
  AnomalyGenerator g;
  Rng a(8);
  Rng b(8);
  const Matrix x(4, 3, 0.5);
  EXPECT_EQ(g.Generate(x, a), g.Generate(x, b));
}

TEST(AnomalyGenerator, VaeKindWithoutVaeIsAnError) {
  AnomalyGenerator g;
  g.kind = GeneratorKind::kVae;
  Rng rng(1);
  EXPECT_THROW(g.Generate(Matrix(1, 2), rng), StateError);
}

TEST(GeneratorKind, NamesRoundTrip) {
  for (GeneratorKind k : {GeneratorKind::kNoise, GeneratorKind::kVae}) {
    EXPECT_EQ(ParseGeneratorKind(GeneratorKindName(k)), k);
  }
  EXPECT_THROW(ParseGeneratorKind("gan"), InvalidArgument);
}

}  // namespace
}  // namespace a3
