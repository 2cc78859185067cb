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

// Datasets, IDX ingestion, stratified splits and the experiment scenarios
// (normal classes, known anomaly classes, evaluated anomaly classes).

#ifndef A3_DATA_H_
#define A3_DATA_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "a3/anomaly.h"
#include "a3/matrix.h"

namespace a3::data {

// Features in [0, 1] plus class labels; y[i] indexes class_names.
struct Dataset {
  Matrix x;
  std::vector<int> y;
  std::vector<std::string> class_names;

  std::size_t size() const { return y.size(); }
  // -1 when the class is unknown.
  int ClassId(const std::string& name) const;
  std::vector<std::size_t> RowsOfClasses(
      std::span<const std::string> names) const;
  Dataset Subset(std::span<const std::size_t> rows) const;
};

// Row-wise union; class ids are re-mapped by name.
Dataset Merge(const Dataset& a, const Dataset& b);

// ---------------------------------------------------------------------------
// IDX (MNIST / EMNIST distribution format)

enum class IdxLabels {
  kDigits,         // 0..9 -> "0".."9"
  kEmnistLetters,  // 1..26 -> "A".."Z" (case merged)
  kEmnistByClass,  // 0..9 digits, 10..35 "A".."Z", 36..61 "a".."z"
};

struct IdxOptions {
  IdxLabels labels = IdxLabels::kDigits;
  // EMNIST stores images transposed relative to MNIST.
  bool transpose = false;
};

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

// Pixels scaled by 1/255, one flattened image per row.
Matrix ReadIdxImages(const std::filesystem::path& path, bool transpose = false);
std::vector<std::uint8_t> ReadIdxLabels(const std::filesystem::path& path);
Dataset LoadIdx(const std::filesystem::path& images,
                const std::filesystem::path& labels,
                const IdxOptions& options = {});

// Writers, used to build fixtures and to export scenario data.
void WriteIdxImages(const std::filesystem::path& path,
                    std::span<const std::uint8_t> pixels, std::uint32_t count,
                    std::uint32_t rows, std::uint32_t cols);
void WriteIdxLabels(const std::filesystem::path& path,
                    std::span<const std::uint8_t> labels);

// ---------------------------------------------------------------------------
// Splits

struct SplitRatios {
  double train = 0.80;
  double validation = 0.05;
  double test = 0.15;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
};

// Seeded, class-stratified, disjoint and exhaustive. Bucket sizes are
// round(n * ratio) for validation and test, the rest is training. Falls
// back to an unstratified split (with a warning) when some class has fewer
// rows than there are non-empty buckets.
SplitIndices StratifiedSplit(std::span<const int> labels,
                             const SplitRatios& ratios, std::uint64_t seed,
                             std::vector<std::string>* warnings = nullptr);

// ---------------------------------------------------------------------------
// Experiment scenarios

enum class DatasetKind { kMnist, kEmnistMnist, kNslKdd, kCreditCard };

std::string DatasetKindName(DatasetKind kind);

struct ExperimentScenario {
  std::string id;
  DatasetKind dataset = DatasetKind::kMnist;
  std::vector<std::string> normal_classes;
  std::vector<std::string> train_anomaly_classes;
  std::vector<std::string> test_anomaly_classes;
  GeneratorKind generator = GeneratorKind::kNoise;
  std::string target_preset;
  std::size_t anomaly_budget = 100;
  std::uint64_t seed = 0;

  // train_anomaly_classes must be a subset of test_anomaly_classes and
  // disjoint from the normal classes.
  void Validate() const;
};

std::vector<ExperimentScenario> BuiltinScenarios();
ExperimentScenario FindScenario(const std::string& id);

struct ScenarioData {
  Matrix train_normal;
  std::vector<int> train_normal_labels;  // index into normal_classes
  Matrix train_anomalies;
  std::vector<std::size_t> anomaly_rows;  // rows of the training partition
  Matrix validation_x;
  std::vector<int> validation_y;  // 1 = anomalous
  Matrix test_x;
  std::vector<int> test_y;
  std::vector<std::string> warnings;
};

struct ScenarioOptions {
  std::size_t anomaly_budget = 100;
  std::size_t max_train_normals = 0;  // 0 keeps every normal row
  std::uint64_t seed = 0;
};

// Training normals, a random draw of `anomaly_budget` known anomalies from
// the training partition, and binary-labelled validation/test sets made of
// normal and test-anomaly rows.
ScenarioData BuildScenario(const Dataset& train, const Dataset& validation,
                           const Dataset& test,
                           const ExperimentScenario& scenario,
                           const ScenarioOptions& options);

}  // namespace a3::data

#endif  // A3_DATA_H_
