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

#include <cstdlib>
#include <fstream>
#include <set>

#include "a3/error.h"
#include "a3/runner.h"
#include "a3/serialize.h"
#include "a3/target.h"

#ifndef A3_DEFAULT_SCHEMA_DIR
#define A3_DEFAULT_SCHEMA_DIR "data/schemas"
#endif

namespace a3 {
namespace {

using nlohmann::json;

void RejectUnknownKeys(const json& j, const std::set<std::string>& allowed,
                       const std::string& where) {
  if (!j.is_object()) throw InvalidArgument(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) {
      throw InvalidArgument("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
void Read(const json& j, const char* key, T& out) {
  if (j.contains(key)) j.at(key).get_to(out);
}

json AlarmJson(const AlarmSpec& a) {
  return {{"hidden_widths", a.hidden_widths},
          {"lambda", a.lambda},
          {"learning_rate", a.learning_rate},
          {"epochs", a.epochs},
          {"batch_size", a.batch_size},
          {"anomaly_fraction", a.anomaly_fraction},
          {"regularizer_weight", a.regularizer_weight},
          {"dropout_rate", a.dropout_rate}};
}

json VaeJson(const VaeSpec& v) {
  return {{"hidden_widths", v.hidden_widths},
          {"perturb_variance", v.perturb_variance},
          {"epochs", v.epochs},
          {"learning_rate", v.learning_rate},
          {"batch_size", v.batch_size},
          {"kl_weight", v.kl_weight}};
}

std::filesystem::path DatasetDir(data::DatasetKind kind) {
  switch (kind) {
    case data::DatasetKind::kMnist:
      return "mnist";
    case data::DatasetKind::kEmnistMnist:
      return "emnist";
    case data::DatasetKind::kNslKdd:
      return "nsl-kdd";
    case data::DatasetKind::kCreditCard:
      return "creditcard";
  }
  return {};
}

}  // namespace

std::filesystem::path DataPaths::Resolve(data::DatasetKind kind) const {
  const std::filesystem::path* explicit_path = nullptr;
  switch (kind) {
    case data::DatasetKind::kMnist:
      explicit_path = &mnist;
      break;
    case data::DatasetKind::kEmnistMnist:
      explicit_path = &emnist;
      break;
    case data::DatasetKind::kNslKdd:
      explicit_path = &nsl_kdd;
      break;
    case data::DatasetKind::kCreditCard:
      explicit_path = &creditcard;
      break;
  }
  if (!explicit_path->empty()) return *explicit_path;
  std::filesystem::path base = root;
  if (base.empty()) {
    if (const char* env = std::getenv(kDataRootEnv); env != nullptr) base = env;
  }
  if (base.empty()) {
    throw InvalidArgument("no location for " + data::DatasetKindName(kind) +
                          " data: set data.root, --data-root or " +
                          kDataRootEnv);
  }
  return base / DatasetDir(kind);
}

void RunConfig::Validate() const {
  if (scenarios.empty()) throw InvalidArgument("config lists no scenarios");
  if (seeds.empty()) throw InvalidArgument("config lists no seeds");
  for (const std::string& id : scenarios) {
    const data::ExperimentScenario s = data::FindScenario(id);
    TargetPreset(target_preset.value_or(s.target_preset), 1);
  }
  if (target_epochs == 0 || target_batch_size == 0) {
    throw InvalidArgument("target epochs and batch size must be positive");
  }
  if (!(target_learning_rate > 0)) {
    throw InvalidArgument("target learning rate must be positive");
  }
  alarm.Validate();
  vae.Validate();
  if (!(noise.stddev > 0)) throw InvalidArgument("noise stddev must be > 0");
  if (iforest_trees == 0 || iforest_subsample == 0) {
    throw InvalidArgument("isolation forest sizes must be positive");
  }
}

std::size_t RunConfig::TrainNormalCap(data::DatasetKind kind) const {
  if (full_data) return 0;
  auto it = max_train_normals.find(data::DatasetKindName(kind));
  return it == max_train_normals.end() ? 0 : it->second;
}

RunConfig RunConfig::FromJson(const json& j) {
  RejectUnknownKeys(j,
                    {"scenarios", "budgets", "seeds", "generator",
                     "target_preset", "data", "max_train_normals", "full_data",
                     "target", "alarm", "vae", "noise", "iforest",
                     "output_dir", "write_bundles"},
                    "config");
  RunConfig c;
  Read(j, "scenarios", c.scenarios);
  Read(j, "budgets", c.budgets);
  Read(j, "seeds", c.seeds);
  if (j.contains("generator") && !j.at("generator").is_null()) {
    c.generator = ParseGeneratorKind(j.at("generator").get<std::string>());
  }
  if (j.contains("target_preset") && !j.at("target_preset").is_null()) {
    c.target_preset = j.at("target_preset").get<std::string>();
  }
  if (j.contains("data")) {
    const json& d = j.at("data");
    RejectUnknownKeys(d, {"root", "mnist", "emnist", "nsl_kdd", "creditcard",
                          "schema_dir"},
                      "data");
    auto path = [&](const char* key, std::filesystem::path& out) {
      if (d.contains(key)) out = d.at(key).get<std::string>();
    };
    path("root", c.data.root);
    path("mnist", c.data.mnist);
    path("emnist", c.data.emnist);
    path("nsl_kdd", c.data.nsl_kdd);
    path("creditcard", c.data.creditcard);
    path("schema_dir", c.data.schema_dir);
  }
  if (j.contains("max_train_normals")) {
    for (const auto& [name, cap] : j.at("max_train_normals").items()) {
      c.max_train_normals[name] = cap.get<std::size_t>();
    }
  }
  Read(j, "full_data", c.full_data);
  if (j.contains("target")) {
    const json& t = j.at("target");
    RejectUnknownKeys(t, {"epochs", "learning_rate", "batch_size"}, "target");
    Read(t, "epochs", c.target_epochs);
    Read(t, "learning_rate", c.target_learning_rate);
    Read(t, "batch_size", c.target_batch_size);
  }
  if (j.contains("alarm")) {
    const json& a = j.at("alarm");
    RejectUnknownKeys(a, {"hidden_widths", "lambda", "learning_rate", "epochs",
                          "batch_size", "anomaly_fraction",
                          "regularizer_weight", "dropout_rate"},
                      "alarm");
    Read(a, "hidden_widths", c.alarm.hidden_widths);
    Read(a, "lambda", c.alarm.lambda);
    Read(a, "learning_rate", c.alarm.learning_rate);
    Read(a, "epochs", c.alarm.epochs);
    Read(a, "batch_size", c.alarm.batch_size);
    Read(a, "anomaly_fraction", c.alarm.anomaly_fraction);
    Read(a, "regularizer_weight", c.alarm.regularizer_weight);
    Read(a, "dropout_rate", c.alarm.dropout_rate);
  }
  if (j.contains("vae")) {
    const json& v = j.at("vae");
    RejectUnknownKeys(v, {"hidden_widths", "perturb_variance", "epochs",
                          "learning_rate", "batch_size", "kl_weight"},
                      "vae");
    Read(v, "hidden_widths", c.vae.hidden_widths);
    Read(v, "perturb_variance", c.vae.perturb_variance);
    Read(v, "epochs", c.vae.epochs);
    Read(v, "learning_rate", c.vae.learning_rate);
    Read(v, "batch_size", c.vae.batch_size);
    Read(v, "kl_weight", c.vae.kl_weight);
  }
  if (j.contains("noise")) {
    const json& n = j.at("noise");
    RejectUnknownKeys(n, {"mean", "stddev"}, "noise");
    Read(n, "mean", c.noise.mean);
    Read(n, "stddev", c.noise.stddev);
  }
  if (j.contains("iforest")) {
    const json& f = j.at("iforest");
    RejectUnknownKeys(f, {"trees", "subsample"}, "iforest");
    Read(f, "trees", c.iforest_trees);
    Read(f, "subsample", c.iforest_subsample);
  }
  if (j.contains("output_dir")) {
    c.output_dir = j.at("output_dir").get<std::string>();
  }
  Read(j, "write_bundles", c.write_bundles);
  return c;
}

RunConfig RunConfig::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(path.string(), 0, e.what());
  }
  RunConfig c = FromJson(j);
  // Relative data paths are taken relative to the config file.
  const std::filesystem::path base = path.parent_path();
  for (std::filesystem::path* p :
       {&c.data.root, &c.data.mnist, &c.data.emnist, &c.data.nsl_kdd,
        &c.data.creditcard, &c.data.schema_dir}) {
    if (!p->empty() && p->is_relative()) *p = base / *p;
  }
  return c;
}

json RunConfig::ToJson() const {
  json j;
  j["scenarios"] = scenarios;
  j["budgets"] = budgets;
  j["seeds"] = seeds;
  j["generator"] = generator ? json(GeneratorKindName(*generator)) : json();
  j["target_preset"] = target_preset ? json(*target_preset) : json();
  j["data"] = {{"root", data.root.string()},
               {"mnist", data.mnist.string()},
               {"emnist", data.emnist.string()},
               {"nsl_kdd", data.nsl_kdd.string()},
               {"creditcard", data.creditcard.string()},
               {"schema_dir", data.schema_dir.string()}};
  j["max_train_normals"] = max_train_normals;
  j["full_data"] = full_data;
  j["target"] = {{"epochs", target_epochs},
                 {"learning_rate", target_learning_rate},
                 {"batch_size", target_batch_size}};
  j["alarm"] = AlarmJson(alarm);
  j["vae"] = VaeJson(vae);
  j["noise"] = {{"mean", noise.mean}, {"stddev", noise.stddev}};
  j["iforest"] = {{"trees", iforest_trees}, {"subsample", iforest_subsample}};
  j["output_dir"] = output_dir.string();
  j["write_bundles"] = write_bundles;
  return j;
}

std::string RunConfig::Fingerprint() const {
  json j = ToJson();
  for (const char* key : {"seeds", "data", "output_dir", "write_bundles",
                          "full_data", "max_train_normals"}) {
    j.erase(key);
  }
  std::map<std::string, std::size_t> caps;
  for (const auto& [name, cap] : max_train_normals) {
    caps[name] = full_data ? 0 : cap;
  }
  j["effective_train_normal_caps"] = caps;
  return a3::Fingerprint(j.dump());
}

}  // namespace a3
