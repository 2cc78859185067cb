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
#include <set>

#include "a3/data.h"
#include "a3/error.h"
#include "a3/random.h"

namespace a3::data {
namespace {

std::vector<std::string> Range(char first, char last) {
  std::vector<std::string> out;
  for (char c = first; c <= last; ++c) out.emplace_back(1, c);
  return out;
}

std::vector<std::string> Concat(std::vector<std::string> a,
                                const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

ExperimentScenario Make(std::string id, DatasetKind dataset,
                        std::vector<std::string> normal,
                        std::vector<std::string> train_anomalies,
                        std::vector<std::string> test_anomalies,
                        std::string preset) {
  ExperimentScenario s;
  s.id = std::move(id);
  s.dataset = dataset;
  s.normal_classes = std::move(normal);
  s.train_anomaly_classes = std::move(train_anomalies);
  s.test_anomaly_classes = std::move(test_anomalies);
  s.target_preset = std::move(preset);
  return s;
}

void RequireClasses(const Dataset& ds, const std::vector<std::string>& names,
                    const std::string& scenario, const std::string& split) {
  for (const std::string& n : names) {
    if (ds.ClassId(n) < 0) {
      throw InvalidArgument("scenario " + scenario + ": class '" + n +
                            "' is missing from the " + split + " data");
    }
  }
}

void BinaryLabelled(const Dataset& ds, const ExperimentScenario& s,
                    Matrix& x, std::vector<int>& y) {
  std::vector<bool> normal(ds.class_names.size(), false);
  std::vector<bool> anomalous(ds.class_names.size(), false);
  for (const std::string& n : s.normal_classes) {
    const int id = ds.ClassId(n);
    if (id >= 0) normal[static_cast<std::size_t>(id)] = true;
  }
  for (const std::string& n : s.test_anomaly_classes) {
    const int id = ds.ClassId(n);
    if (id >= 0) anomalous[static_cast<std::size_t>(id)] = true;
  }
  std::vector<std::size_t> rows;
  y.clear();
  for (std::size_t i = 0; i < ds.y.size(); ++i) {
    const auto c = static_cast<std::size_t>(ds.y[i]);
    if (normal[c] || anomalous[c]) {
      rows.push_back(i);
      y.push_back(anomalous[c] ? 1 : 0);
    }
  }
  x = GatherRows(ds.x, rows);
}

}  // namespace

std::string DatasetKindName(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kMnist:
      return "mnist";
    case DatasetKind::kEmnistMnist:
      return "emnist-mnist";
    case DatasetKind::kNslKdd:
      return "nsl-kdd";
    case DatasetKind::kCreditCard:
      return "creditcard";
  }
  return "unknown";
}

void ExperimentScenario::Validate() const {
  if (id.empty()) throw InvalidArgument("scenario id is empty");
  if (normal_classes.empty()) {
    throw InvalidArgument("scenario " + id + ": no normal classes");
  }
  const std::set<std::string> normal(normal_classes.begin(),
                                     normal_classes.end());
  const std::set<std::string> test(test_anomaly_classes.begin(),
                                   test_anomaly_classes.end());
  for (const std::string& c : train_anomaly_classes) {
    if (!test.contains(c)) {
      throw InvalidArgument("scenario " + id + ": train anomaly class '" + c +
                            "' is not among the test anomaly classes");
    }
  }
  for (const std::string& c : test_anomaly_classes) {
    if (normal.contains(c)) {
      throw InvalidArgument("scenario " + id + ": class '" + c +
                            "' is both normal and anomalous");
    }
  }
}

std::vector<ExperimentScenario> BuiltinScenarios() {
  const auto kMnist = DatasetKind::kMnist;
  const auto kKdd = DatasetKind::kNslKdd;
  const auto kEmnist = DatasetKind::kEmnistMnist;
  const std::vector<std::string> all_attacks = {"DoS", "Probe", "R2L", "U2R"};
  const std::vector<std::string> a_e = Range('A', 'E');
  const std::vector<std::string> v_z = Range('V', 'Z');

  std::vector<ExperimentScenario> out = {
      Make("1a", kMnist, Range('0', '5'), {"6", "7"}, {"6", "7"},
           "mnist-dense-ae"),
      Make("1b", kMnist, Range('4', '9'), {"0", "1"}, {"0", "1"},
           "mnist-dense-ae"),
      Make("1c", kKdd, {"normal"}, {"DoS", "Probe"}, {"DoS", "Probe"},
           "nsl-kdd"),
      Make("1d", kKdd, {"normal"}, {"R2L", "U2R"}, {"R2L", "U2R"}, "nsl-kdd"),
      Make("1g", DatasetKind::kCreditCard, {"normal"}, {"fraud"}, {"fraud"},
           "creditcard"),
      Make("2a", kMnist, Range('0', '5'), {"6", "7"}, Range('6', '9'),
           "mnist-dense-ae"),
      Make("2b", kMnist, Range('4', '9'), {"0", "1"}, Range('0', '3'),
           "mnist-dense-ae"),
      Make("2c", kKdd, {"normal"}, {"DoS", "Probe"}, all_attacks, "nsl-kdd"),
      Make("2d", kKdd, {"normal"}, {"R2L", "U2R"}, all_attacks, "nsl-kdd"),
      Make("3a", kEmnist, Range('0', '9'), a_e, a_e, "mnist-dense-clf"),
      Make("3b", kEmnist, Range('0', '9'), a_e, Concat(a_e, v_z),
           "mnist-dense-clf"),
      Make("3c", kEmnist, Range('0', '9'), v_z, v_z, "mnist-dense-clf"),
      Make("3d", kEmnist, Range('0', '9'), v_z, Concat(a_e, v_z),
           "mnist-dense-clf"),
  };
  const std::pair<const char*, const char*> vae_rows[] = {
      {"4a", "1a"}, {"4b", "2a"}, {"4c", "1b"}, {"4d", "2b"}};
  for (const auto& [id, base] : vae_rows) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const ExperimentScenario& s) { return s.id == base; });
    ExperimentScenario s = *it;
    s.id = id;
    s.generator = GeneratorKind::kVae;
    s.anomaly_budget = 0;
    out.push_back(std::move(s));
  }
  return out;
}

ExperimentScenario FindScenario(const std::string& id) {
  for (ExperimentScenario& s : BuiltinScenarios()) {
    if (s.id == id) return s;
  }
  throw InvalidArgument("unknown scenario '" + id + "'");
}

ScenarioData BuildScenario(const Dataset& train, const Dataset& validation,
                           const Dataset& test,
                           const ExperimentScenario& scenario,
                           const ScenarioOptions& options) {
  scenario.Validate();
  RequireClasses(train, scenario.normal_classes, scenario.id, "training");
  RequireClasses(train, scenario.train_anomaly_classes, scenario.id,
                 "training");
  RequireClasses(test, scenario.normal_classes, scenario.id, "test");
  RequireClasses(test, scenario.test_anomaly_classes, scenario.id, "test");

  ScenarioData out;
  std::vector<std::size_t> normal_rows =
      train.RowsOfClasses(scenario.normal_classes);
  if (options.max_train_normals > 0 &&
      normal_rows.size() > options.max_train_normals) {
    Rng rng(DeriveSeed(options.seed, "normals"));
    const std::vector<std::size_t> pick = rng.SampleWithoutReplacement(
        normal_rows.size(), options.max_train_normals);
    std::vector<std::size_t> kept;
    kept.reserve(pick.size());
    for (std::size_t p : pick) kept.push_back(normal_rows[p]);
    std::sort(kept.begin(), kept.end());
    normal_rows = std::move(kept);
  }
  out.train_normal = GatherRows(train.x, normal_rows);
  for (std::size_t r : normal_rows) {
    const std::string& name =
        train.class_names[static_cast<std::size_t>(train.y[r])];
    const auto it = std::find(scenario.normal_classes.begin(),
                              scenario.normal_classes.end(), name);
    out.train_normal_labels.push_back(
        static_cast<int>(it - scenario.normal_classes.begin()));
  }

  const std::vector<std::size_t> pool =
      train.RowsOfClasses(scenario.train_anomaly_classes);
  std::size_t budget = options.anomaly_budget;
  if (budget > pool.size()) {
    out.warnings.push_back("scenario " + scenario.id + ": anomaly budget " +
                           std::to_string(budget) + " exceeds the " +
                           std::to_string(pool.size()) +
                           " available training anomalies; using all");
    budget = pool.size();
  }
  // Draw-order prefix property: a smaller budget under the same seed picks a
  // subset of a larger one.
  Rng rng(DeriveSeed(options.seed, "anomalies"));
  for (std::size_t p : rng.SampleWithoutReplacement(pool.size(), budget)) {
    out.anomaly_rows.push_back(pool[p]);
  }
  out.train_anomalies = GatherRows(train.x, out.anomaly_rows);

  BinaryLabelled(validation, scenario, out.validation_x, out.validation_y);
  BinaryLabelled(test, scenario, out.test_x, out.test_y);
  return out;
}

}  // namespace a3::data
