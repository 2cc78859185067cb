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

#include "a3/anomaly.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "a3/error.h"
#include "batching.h"

namespace a3 {
namespace {

constexpr double kLogVarLimit = 30.0;

}  // namespace

Matrix NoiseAnomaly(const Matrix& x, const NoiseGenSpec& spec, Rng& rng) {
  if (!(spec.stddev > 0.0)) {
    throw InvalidArgument("NoiseAnomaly: stddev must be positive");
  }
  Matrix out(x.rows(), x.cols());
  for (double& v : out.data()) v = rng.Normal(spec.mean, spec.stddev);
  return out;
}

std::size_t VaeSpec::latent_dim() const {
  return hidden_widths.empty() ? 0 : hidden_widths[hidden_widths.size() / 2];
}

void VaeSpec::Validate() const {
  const std::size_t n = hidden_widths.size();
  if (n == 0 || n % 2 == 0) {
    throw InvalidArgument("VaeSpec: hidden_widths needs an odd length");
  }
  for (std::size_t i = 0; i < n / 2; ++i) {
    if (hidden_widths[i] != hidden_widths[n - 1 - i]) {
      throw InvalidArgument("VaeSpec: encoder/decoder widths do not mirror");
    }
  }
  if (std::find(hidden_widths.begin(), hidden_widths.end(), 0u) !=
      hidden_widths.end()) {
    throw InvalidArgument("VaeSpec: zero width");
  }
  if (perturb_variance < 0.0) {
    throw InvalidArgument("VaeSpec: perturb_variance must be >= 0");
  }
  if (batch_size == 0) throw InvalidArgument("VaeSpec: batch_size 0");
}

Vae::Vae(nn::Network encoder, nn::Network decoder, bool trained)
    : encoder_(std::move(encoder)), decoder_(std::move(decoder)),
      trained_(trained) {
  if (encoder_.output_dim() != 2 * decoder_.input_dim()) {
    throw DimensionError("Vae", "encoder output = 2 x latent",
                         std::to_string(encoder_.output_dim()) + " vs latent " +
                             std::to_string(decoder_.input_dim()));
  }
  if (decoder_.output_dim() != encoder_.input_dim()) {
    throw DimensionError("Vae decoder output",
                         std::to_string(encoder_.input_dim()),
                         std::to_string(decoder_.output_dim()));
  }
}

Vae Vae::Build(std::size_t input_dim, const VaeSpec& spec, Rng& init_rng) {
  spec.Validate();
  const std::size_t mid = spec.hidden_widths.size() / 2;
  const std::size_t latent = spec.latent_dim();

  std::vector<nn::LayerSpec> enc;
  for (std::size_t i = 0; i < mid; ++i) {
    enc.push_back({spec.hidden_widths[i], nn::Activation::kReLU, 0.0});
  }
  enc.push_back({2 * latent, nn::Activation::kLinear, 0.0});

  std::vector<nn::LayerSpec> dec;
  for (std::size_t i = mid + 1; i < spec.hidden_widths.size(); ++i) {
    dec.push_back({spec.hidden_widths[i], nn::Activation::kReLU, 0.0});
  }
  dec.push_back({input_dim, nn::Activation::kSigmoid, 0.0});

  nn::Network encoder = nn::Network::Build(input_dim, enc, init_rng);
  nn::Network decoder = nn::Network::Build(latent, dec, init_rng);
  return Vae(std::move(encoder), std::move(decoder), false);
}

namespace {

LatentPosterior SplitPosterior(const Matrix& h, std::size_t latent) {
  LatentPosterior p{Matrix(h.rows(), latent), Matrix(h.rows(), latent)};
  for (std::size_t r = 0; r < h.rows(); ++r) {
    auto src = h.row(r);
    for (std::size_t c = 0; c < latent; ++c) {
      p.mean(r, c) = src[c];
      p.log_var(r, c) = std::clamp(src[latent + c], -kLogVarLimit, kLogVarLimit);
    }
  }
  return p;
}

}  // namespace

LatentPosterior Vae::Encode(const Matrix& x) const {
  return SplitPosterior(nn::Predict(encoder_, x), latent_dim());
}

Matrix Vae::Decode(const Matrix& z) const { return nn::Predict(decoder_, z); }

Matrix Vae::Reconstruct(const Matrix& x) const { return Decode(Encode(x).mean); }

double KlDivergence(const Matrix& mean, const Matrix& log_var) {
  if (mean.rows() != log_var.rows() || mean.cols() != log_var.cols()) {
    throw DimensionError("KlDivergence", mean.shape_string(),
                         log_var.shape_string());
  }
  if (mean.rows() == 0) return 0.0;
  double sum = 0.0;
  auto mu = mean.data();
  auto lv = log_var.data();
  for (std::size_t i = 0; i < mu.size(); ++i) {
    sum += 0.5 * (mu[i] * mu[i] + std::exp(lv[i]) - 1.0 - lv[i]);
  }
  return sum / static_cast<double>(mean.rows());
}

Vae TrainVae(const Matrix& normal_data, const VaeSpec& spec, std::uint64_t seed,
             VaeHistory* history) {
  spec.Validate();
  if (normal_data.rows() == 0) throw InvalidArgument("TrainVae: empty dataset");

  Rng init_rng(DeriveSeed(seed, "vae-init"));
  Rng rng(DeriveSeed(seed, "vae-train"));
  Vae vae = Vae::Build(normal_data.cols(), spec, init_rng);
  const std::size_t latent = vae.latent_dim();

  nn::AdamState enc_adam = nn::MakeAdam(spec.learning_rate);
  nn::AdamState dec_adam = nn::MakeAdam(spec.learning_rate);
  nn::Tape enc_tape;
  nn::Tape dec_tape;

  for (std::size_t epoch = 0; epoch < spec.epochs; ++epoch) {
    double total = 0.0;
    double total_rec = 0.0;
    std::size_t batches = 0;
    internal::ForEachMinibatch(
        normal_data.rows(), spec.batch_size, rng,
        [&](std::span<const std::size_t> idx) {
          const Matrix x = GatherRows(normal_data, idx);
          const double n = static_cast<double>(x.rows());
          nn::ForwardResult enc = nn::Forward(vae.encoder(), x, nn::Mode::kTrain,
                                              &rng, &enc_tape);
          const Matrix& h = enc.output;

          Matrix eps(x.rows(), latent);
          Matrix stddev(x.rows(), latent);
          Matrix z(x.rows(), latent);
          for (std::size_t r = 0; r < x.rows(); ++r) {
            for (std::size_t c = 0; c < latent; ++c) {
              const double lv =
                  std::clamp(h(r, latent + c), -kLogVarLimit, kLogVarLimit);
              eps(r, c) = rng.Normal();
              stddev(r, c) = std::exp(0.5 * lv);
              z(r, c) = h(r, c) + stddev(r, c) * eps(r, c);
            }
          }

          nn::ForwardResult dec = nn::Forward(vae.decoder(), z, nn::Mode::kTrain,
                                              &rng, &dec_tape);
          Matrix grad_rec(x.rows(), x.cols());
          double rec = 0.0;
          {
            auto p = dec.output.data();
            auto t = x.data();
            auto g = grad_rec.data();
            for (std::size_t i = 0; i < p.size(); ++i) {
              const double d = p[i] - t[i];
              rec += d * d;
              g[i] = 2.0 * d / n;
            }
            rec /= n;
          }

          double kl = 0.0;
          const nn::Gradients dec_grads =
              nn::Backprop(vae.decoder(), dec_tape, grad_rec);
          const Matrix& dz = dec_grads.input;
          Matrix grad_h(x.rows(), 2 * latent);
          for (std::size_t r = 0; r < x.rows(); ++r) {
            for (std::size_t c = 0; c < latent; ++c) {
              const double mu = h(r, c);
              const double raw_lv = h(r, latent + c);
              const double lv = std::clamp(raw_lv, -kLogVarLimit, kLogVarLimit);
              const double var = stddev(r, c) * stddev(r, c);
              kl += 0.5 * (mu * mu + var - 1.0 - lv);
              grad_h(r, c) = dz(r, c) + spec.kl_weight * mu / n;
              const bool clamped = raw_lv != lv;
              grad_h(r, latent + c) =
                  clamped ? 0.0
                          : dz(r, c) * eps(r, c) * 0.5 * stddev(r, c) +
                                spec.kl_weight * 0.5 * (var - 1.0) / n;
            }
          }
          kl /= n;

          const nn::Gradients enc_grads =
              nn::Backprop(vae.encoder(), enc_tape, grad_h);
          nn::AdamStep(dec_adam, vae.mutable_decoder(), dec_grads);
          nn::AdamStep(enc_adam, vae.mutable_encoder(), enc_grads);

          total += rec + spec.kl_weight * kl;
          total_rec += rec;
          ++batches;
        });
    if (history != nullptr) {
      history->epoch_loss.push_back(total / static_cast<double>(batches));
      history->epoch_reconstruction.push_back(total_rec /
                                              static_cast<double>(batches));
    }
  }
  vae.set_trained(true);
  return vae;
}

Matrix VaeAnomaly(const Vae& vae, const Matrix& x, double perturb_variance,
                  Rng& rng) {
  if (!vae.trained()) throw StateError("VaeAnomaly: VAE is not trained");
  if (perturb_variance < 0.0) {
    throw InvalidArgument("VaeAnomaly: perturb_variance must be >= 0");
  }
  Matrix z = vae.Encode(x).mean;
  if (perturb_variance > 0.0) {
    const double stddev = std::sqrt(perturb_variance);
    for (double& v : z.data()) v += rng.Normal(0.0, stddev);
  }
  return vae.Decode(z);
}

std::string GeneratorKindName(GeneratorKind kind) {
  return kind == GeneratorKind::kNoise ? "noise" : "vae";
}

GeneratorKind ParseGeneratorKind(const std::string& name) {
  if (name == "noise") return GeneratorKind::kNoise;
  if (name == "vae") return GeneratorKind::kVae;
  throw InvalidArgument("unknown anomaly generator \"" + name + "\"");
}

Matrix AnomalyGenerator::Generate(const Matrix& x, Rng& rng) const {
  if (kind == GeneratorKind::kNoise) return NoiseAnomaly(x, noise, rng);
  if (!vae.has_value()) throw StateError("AnomalyGenerator: VAE missing");
  return VaeAnomaly(*vae, x, perturb_variance, rng);
}

}  // namespace a3
