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

// Configuration-driven experiment orchestration: target -> anomaly
// generator -> alarm -> baselines -> metrics, for every
// (scenario, budget, seed) job of a run.

#ifndef A3_RUNNER_H_
#define A3_RUNNER_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "a3/alarm.h"
#include "a3/anomaly.h"
#include "a3/data.h"
#include "a3/report.h"

namespace a3 {

// Environment variable naming the default data root.
inline constexpr const char* kDataRootEnv = "A3_DATA_ROOT";

// Per-dataset locations. Empty entries resolve under the data root:
//   mnist/        train-images-idx3-ubyte, ... (MNIST distribution names)
//   emnist/       emnist-letters-{train,test}-{images-idx3,labels-idx1}-ubyte
//   nsl-kdd/      KDDTrain+.txt, KDDTest+.txt
//   creditcard/   creditcard.csv
struct DataPaths {
  std::filesystem::path root;
  std::filesystem::path mnist;
  std::filesystem::path emnist;
  std::filesystem::path nsl_kdd;
  std::filesystem::path creditcard;
  std::filesystem::path schema_dir;

  std::filesystem::path Resolve(data::DatasetKind kind) const;
};

struct RunConfig {
  std::vector<std::string> scenarios;
  // Empty = each scenario's own budget.
  std::vector<std::size_t> budgets;
  std::vector<std::uint64_t> seeds = {1};
  std::optional<GeneratorKind> generator;
  std::optional<std::string> target_preset;

  DataPaths data;
  // Training-normal cap per dataset name; 0 = no cap.
  std::map<std::string, std::size_t> max_train_normals = {
      {"mnist", 10000}, {"emnist-mnist", 10000}, {"nsl-kdd", 20000},
      {"creditcard", 0}};
  bool full_data = false;

  std::size_t target_epochs = 30;
  double target_learning_rate = 1e-3;
  std::size_t target_batch_size = 256;
  AlarmSpec alarm;
  VaeSpec vae;
  NoiseGenSpec noise;
  std::size_t iforest_trees = 100;
  std::size_t iforest_subsample = 256;

  std::filesystem::path output_dir = "a3-run";
  bool write_bundles = true;

  // Throws InvalidArgument for unknown scenarios/presets or empty seeds.
  void Validate() const;
  std::size_t TrainNormalCap(data::DatasetKind kind) const;

  static RunConfig FromJson(const nlohmann::json& j);
  static RunConfig Load(const std::filesystem::path& path);
  nlohmann::json ToJson() const;
  // Digest of every setting that influences results. Paths, seeds and
  // output options are excluded so per-seed runs can be aggregated.
  std::string Fingerprint() const;
};

struct RunResult {
  std::vector<eval::MetricsReport> reports;
  std::vector<eval::AggregateReport> aggregates;
  std::vector<std::string> failures;  // per-scenario diagnostics
  std::size_t frozen_target_checks = 0;
  std::size_t frozen_target_violations = 0;
  bool ok() const { return failures.empty() && frozen_target_violations == 0; }
};

// Writes per-job report.json / roc.tsv / detector.a3db under
// <output>/<scenario>/budget-<b>/seed-<s>/, aggregate.json per
// (scenario, budget), summary.tsv and timings.json at the top level.
// Completed jobs are kept when others fail.
RunResult Run(const RunConfig& config, std::ostream* log = nullptr);

struct ScoreResult {
  std::vector<double> scores;
  std::vector<std::string> warnings;
};

// Replays the bundle's preprocessing on an IDX image file or a CSV file and
// returns one score per row.
ScoreResult Score(const std::filesystem::path& bundle_path,
                  const std::filesystem::path& input_path);
void WriteScores(const std::filesystem::path& path,
                 const std::vector<double>& scores);

// Aggregates report.json files (or directories searched recursively).
std::vector<eval::AggregateReport> AggregateFiles(
    const std::vector<std::filesystem::path>& inputs);

}  // namespace a3

#endif  // A3_RUNNER_H_
