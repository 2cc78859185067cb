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

#include "a3/report.h"

#include <cstdio>
#include <fstream>

#include "a3/error.h"
#include "a3/serialize.h"

namespace a3::eval {
namespace {

nlohmann::json AggregateJson(const Aggregate& a) {
  return {{"mean", a.mean}, {"std", a.std}, {"n", a.n},
          {"cell", FormatTableCell(a)}};
}

}  // namespace

nlohmann::json MetricsReport::ToJson() const {
  nlohmann::json j;
  j["scenario"] = scenario;
  j["seed"] = seed;
  j["generator"] = generator;
  j["anomaly_budget"] = anomaly_budget;
  j["config_fingerprint"] = config_fingerprint;
  j["target_fingerprint"] = target_fingerprint;
  j["train_normals"] = train_normals;
  j["train_anomalies"] = train_anomalies;
  j["test_rows"] = test_rows;
  j["test_anomalous"] = test_anomalous;
  j["methods"] = nlohmann::json::object();
  for (const auto& [name, m] : methods) {
    j["methods"][name] = {{"auc", m.auc}, {"ap", m.ap}};
  }
  j["validation"] = nlohmann::json::object();
  for (const auto& [name, m] : validation) {
    j["validation"][name] = {{"auc", m.auc}, {"ap", m.ap}};
  }
  j["roc"] = nlohmann::json::array();
  for (const RocPoint& p : roc) j["roc"].push_back({p.fpr, p.tpr});
  j["warnings"] = warnings;
  return j;
}

MetricsReport MetricsReport::FromJson(const nlohmann::json& j) {
  MetricsReport r;
  j.at("scenario").get_to(r.scenario);
  j.at("seed").get_to(r.seed);
  j.at("generator").get_to(r.generator);
  j.at("anomaly_budget").get_to(r.anomaly_budget);
  j.at("config_fingerprint").get_to(r.config_fingerprint);
  j.at("target_fingerprint").get_to(r.target_fingerprint);
  j.at("train_normals").get_to(r.train_normals);
  j.at("train_anomalies").get_to(r.train_anomalies);
  j.at("test_rows").get_to(r.test_rows);
  j.at("test_anomalous").get_to(r.test_anomalous);
  for (const auto& [name, m] : j.at("methods").items()) {
    r.methods[name] = {m.at("auc").get<double>(), m.at("ap").get<double>()};
  }
  const nlohmann::json validation =
      j.value("validation", nlohmann::json::object());
  for (const auto& [name, m] : validation.items()) {
    r.validation[name] = {m.at("auc").get<double>(), m.at("ap").get<double>()};
  }
  for (const auto& p : j.at("roc")) {
    r.roc.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  }
  j.at("warnings").get_to(r.warnings);
  return r;
}

nlohmann::json AggregateReport::ToJson() const {
  nlohmann::json j;
  j["scenario"] = scenario;
  j["generator"] = generator;
  j["anomaly_budget"] = anomaly_budget;
  j["config_fingerprint"] = config_fingerprint;
  j["seeds"] = seeds;
  j["methods"] = nlohmann::json::object();
  for (const auto& [name, m] : methods) {
    j["methods"][name] = {{"auc", AggregateJson(m.auc)},
                          {"ap", AggregateJson(m.ap)}};
  }
  return j;
}

AggregateReport AggregateReports(std::span<const MetricsReport> reports) {
  if (reports.empty()) throw InvalidArgument("no reports to aggregate");
  const MetricsReport& first = reports.front();
  AggregateReport out;
  out.scenario = first.scenario;
  out.generator = first.generator;
  out.anomaly_budget = first.anomaly_budget;
  out.config_fingerprint = first.config_fingerprint;
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>>
      values;
  for (const MetricsReport& r : reports) {
    if (r.config_fingerprint != first.config_fingerprint) {
      throw InvalidArgument("config fingerprint mismatch: " +
                            r.config_fingerprint + " vs " +
                            first.config_fingerprint);
    }
    if (r.scenario != first.scenario || r.generator != first.generator ||
        r.anomaly_budget != first.anomaly_budget) {
      throw InvalidArgument("cannot aggregate reports of different runs (" +
                            r.scenario + " vs " + first.scenario + ")");
    }
    out.seeds.push_back(r.seed);
    for (const auto& [name, m] : r.methods) {
      values[name].first.push_back(m.auc);
      values[name].second.push_back(m.ap);
    }
  }
  for (const auto& [name, v] : values) {
    if (v.first.size() != reports.size()) {
      throw InvalidArgument("method '" + name + "' missing from some reports");
    }
    out.methods[name] = {Summarize(v.first), Summarize(v.second)};
  }
  return out;
}

std::string DumpJson(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void WriteJson(const std::filesystem::path& path, const nlohmann::json& j) {
  WriteFileBytes(path, DumpJson(j));
}

nlohmann::json ReadJson(const std::filesystem::path& path) {
  const std::string bytes = ReadFileBytes(path);
  try {
    return nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string(), 0, e.what());
  }
}

void WriteRocTsv(const std::filesystem::path& path,
                 std::span<const RocPoint> points) {
  std::string out = "fpr\ttpr\n";
  char buf[64];
  for (const RocPoint& p : points) {
    std::snprintf(buf, sizeof buf, "%.17g\t%.17g\n", p.fpr, p.tpr);
    out += buf;
  }
  WriteFileBytes(path, out);
}

}  // namespace a3::eval
