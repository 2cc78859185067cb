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

#ifndef A3_RANDOM_H_
#define A3_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace a3 {

// Mixes a master seed with a tag into an independent child seed.
// Stable across runs and platforms (FNV-1a + splitmix64).
std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view tag);
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t index);

// Seeded random stream. Every stochastic step in the library draws from an
// explicit Rng so that (inputs, seed) fully determine the outputs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double Normal(double mean = 0.0, double stddev = 1.0) {
    return std::normal_distribution<double>(mean, stddev)(engine_);
  }
  double Uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  // Uniform integer in [0, n).
  std::size_t Index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }
  bool Bernoulli(double p) {
    return std::bernoulli_distribution(p)(engine_);
  }

  std::vector<std::size_t> Permutation(std::size_t n);
  // k distinct indices from [0, n), k <= n, in draw order.
  std::vector<std::size_t> SampleWithoutReplacement(std::size_t n,
                                                    std::size_t k);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace a3

#endif  // A3_RANDOM_H_
