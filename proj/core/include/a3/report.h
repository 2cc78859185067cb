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

// Per-run and aggregated metric reports. JSON objects are written with
// sorted keys so identical runs produce identical bytes.

#ifndef A3_REPORT_H_
#define A3_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "a3/metrics.h"

namespace a3::eval {

struct MethodMetrics {
  double auc = 0;
  double ap = 0;
  bool operator==(const MethodMetrics&) const = default;
};

// Method keys used by the runner.
inline constexpr const char* kMethodA3 = "a3";
inline constexpr const char* kMethodAutoencoder = "ae_reconstruction";
inline constexpr const char* kMethodIsolationForest = "isolation_forest";

struct MetricsReport {
  std::string scenario;
  std::uint64_t seed = 0;
  std::string generator;
  std::size_t anomaly_budget = 0;
  std::string config_fingerprint;
  std::string target_fingerprint;
  std::size_t train_normals = 0;
  std::size_t train_anomalies = 0;
  std::size_t test_rows = 0;
  std::size_t test_anomalous = 0;
  std::map<std::string, MethodMetrics> methods;
  // A3 on the validation split; reported only, never used for selection.
  std::map<std::string, MethodMetrics> validation;
  std::vector<RocPoint> roc;  // A3 scores on the test set
  std::vector<std::string> warnings;

  nlohmann::json ToJson() const;
  static MetricsReport FromJson(const nlohmann::json& j);
  bool operator==(const MetricsReport&) const = default;
};

struct MethodAggregate {
  Aggregate auc;
  Aggregate ap;
};

struct AggregateReport {
  std::string scenario;
  std::string generator;
  std::size_t anomaly_budget = 0;
  std::string config_fingerprint;
  std::vector<std::uint64_t> seeds;
  std::map<std::string, MethodAggregate> methods;

  nlohmann::json ToJson() const;
};

// All reports must share scenario, budget, generator and config
// fingerprint; a mismatch raises InvalidArgument.
AggregateReport AggregateReports(std::span<const MetricsReport> reports);

// Pretty-printed JSON with a trailing newline.
std::string DumpJson(const nlohmann::json& j);
void WriteJson(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json ReadJson(const std::filesystem::path& path);

// "fpr<TAB>tpr" per line with a header row.
void WriteRocTsv(const std::filesystem::path& path,
                 std::span<const RocPoint> points);

}  // namespace a3::eval

#endif  // A3_REPORT_H_
