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

// Anomaly networks: generators of synthetic counterexamples x_bar used to
// train the alarm network. Either a plain Gaussian draw of the input's
// shape, or a VAE whose posterior means are pushed into improbable regions
// before decoding.

#ifndef A3_ANOMALY_H_
#define A3_ANOMALY_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "a3/matrix.h"
#include "a3/nn.h"
#include "a3/random.h"

namespace a3 {

struct NoiseGenSpec {
  double mean = 0.5;
  double stddev = 1.0;
};

// i.i.d. N(mean, stddev^2) entries with the shape of x; x's values are not
// read. Not clipped to the input range.
Matrix NoiseAnomaly(const Matrix& x, const NoiseGenSpec& spec, Rng& rng);

struct VaeSpec {
  // Encoder widths, latent width, decoder widths; must mirror around the
  // latent (middle) entry.
  std::vector<std::size_t> hidden_widths = {800, 400, 100, 25, 100, 400, 800};
  // Variance of the latent perturbation (std = sqrt(5) by default).
  double perturb_variance = 5.0;
  std::size_t epochs = 30;
  double learning_rate = 1e-3;
  std::size_t batch_size = 256;
  double kl_weight = 1.0;

  std::size_t latent_dim() const;
  void Validate() const;
};

struct LatentPosterior {
  Matrix mean;     // h_mu
  Matrix log_var;  // log h_sigma^2
};

class Vae {
 public:
  Vae() = default;
  Vae(nn::Network encoder, nn::Network decoder, bool trained);

  // Untrained VAE with Glorot-initialised weights.
  static Vae Build(std::size_t input_dim, const VaeSpec& spec, Rng& init_rng);

  bool trained() const { return trained_; }
  std::size_t input_dim() const { return encoder_.input_dim(); }
  std::size_t latent_dim() const { return decoder_.input_dim(); }

  LatentPosterior Encode(const Matrix& x) const;
  Matrix Decode(const Matrix& z) const;
  // decode(h_mu(x)).
  Matrix Reconstruct(const Matrix& x) const;

  const nn::Network& encoder() const { return encoder_; }
  const nn::Network& decoder() const { return decoder_; }
  nn::Network& mutable_encoder() { return encoder_; }
  nn::Network& mutable_decoder() { return decoder_; }
  void set_trained(bool trained) { trained_ = trained; }

 private:
  nn::Network encoder_;  // input -> ... -> [mean | log_var]
  nn::Network decoder_;  // latent -> ... -> sigmoid(input_dim)
  bool trained_ = false;
};

// Mean over rows of KL(N(mean, exp(log_var)) || N(0, I)).
double KlDivergence(const Matrix& mean, const Matrix& log_var);

struct VaeHistory {
  std::vector<double> epoch_loss;            // reconstruction + kl
  std::vector<double> epoch_reconstruction;  // summed squared error per row
};

// Reparameterised ELBO training on normal data only.
Vae TrainVae(const Matrix& normal_data, const VaeSpec& spec, std::uint64_t seed,
             VaeHistory* history = nullptr);

// decode(h_mu(x) + eps) with eps ~ N(0, perturb_variance) per latent
// coordinate; perturb_variance = 0 yields the mean reconstruction.
Matrix VaeAnomaly(const Vae& vae, const Matrix& x, double perturb_variance,
                  Rng& rng);

enum class GeneratorKind : std::uint8_t { kNoise = 0, kVae = 1 };

std::string GeneratorKindName(GeneratorKind kind);
GeneratorKind ParseGeneratorKind(const std::string& name);

// The anomaly network handle held by a detector.
struct AnomalyGenerator {
  GeneratorKind kind = GeneratorKind::kNoise;
  NoiseGenSpec noise;
  std::optional<Vae> vae;
  double perturb_variance = 5.0;

  Matrix Generate(const Matrix& x, Rng& rng) const;
};

}  // namespace a3

#endif  // A3_ANOMALY_H_
