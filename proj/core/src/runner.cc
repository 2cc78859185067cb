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

#include "a3/runner.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <set>
#include <tuple>

#include "a3/baselines.h"
#include "a3/bundle.h"
#include "a3/error.h"
#include "a3/metrics.h"
#include "a3/random.h"
#include "a3/serialize.h"
#include "a3/tabular.h"
#include "a3/target.h"

#ifndef A3_DEFAULT_SCHEMA_DIR
#define A3_DEFAULT_SCHEMA_DIR "data/schemas"
#endif

namespace a3 {
namespace {

namespace fs = std::filesystem;
using data::Dataset;
using data::DatasetKind;

class Stopwatch {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

void Log(std::ostream* log, const std::string& message) {
  if (log != nullptr) *log << message << std::endl;
}

std::string DataDigest(const Matrix& m) {
  const std::string_view bytes(reinterpret_cast<const char*>(m.data().data()),
                               m.size() * sizeof(double));
  return Fingerprint(bytes) + ":" + m.shape_string();
}

fs::path RequireFile(const fs::path& path) {
  if (!fs::is_regular_file(path)) {
    throw IoError("missing dataset file " + path.string());
  }
  return path;
}

fs::path SchemaDir(const DataPaths& paths) {
  return paths.schema_dir.empty() ? fs::path(A3_DEFAULT_SCHEMA_DIR)
                                  : paths.schema_dir;
}

// Everything read from disk for one dataset, before any seeded split.
struct RawSource {
  bool tabular = false;
  bool has_test = false;
  Dataset train;  // image data
  Dataset test;
  data::CsvSchema schema;  // tabular data
  data::RawTable train_table;
  data::RawTable test_table;
  std::vector<std::string> class_order;
  std::vector<std::string> warnings;
};

Dataset LoadMnistPart(const fs::path& dir, const char* prefix) {
  const std::string p = prefix;
  return data::LoadIdx(RequireFile(dir / (p + "-images-idx3-ubyte")),
                       RequireFile(dir / (p + "-labels-idx1-ubyte")));
}

Dataset LoadLetters(const fs::path& dir, const char* part,
                    const std::vector<std::string>& keep) {
  const std::string p = std::string("emnist-letters-") + part;
  Dataset all = data::LoadIdx(
      RequireFile(dir / (p + "-images-idx3-ubyte")),
      RequireFile(dir / (p + "-labels-idx1-ubyte")),
      {data::IdxLabels::kEmnistLetters, /*transpose=*/true});
  return all.Subset(all.RowsOfClasses(keep));
}

RawSource LoadTabular(const fs::path& schema_path, const fs::path& train,
                      const fs::path* test,
                      std::vector<std::string> class_order) {
  RawSource src;
  src.tabular = true;
  src.schema = data::CsvSchema::Load(RequireFile(schema_path));
  src.train_table = data::LoadCsv(RequireFile(train), src.schema);
  if (src.train_table.dropped_rows > 0) {
    src.warnings.push_back(std::to_string(src.train_table.dropped_rows) +
                           " unparseable rows dropped from " + train.string());
  }
  if (test != nullptr) {
    src.has_test = true;
    src.test_table = data::LoadCsv(RequireFile(*test), src.schema);
    if (src.test_table.dropped_rows > 0) {
      src.warnings.push_back(std::to_string(src.test_table.dropped_rows) +
                             " unparseable rows dropped from " +
                             test->string());
    }
  }
  src.class_order = std::move(class_order);
  return src;
}

RawSource LoadSource(DatasetKind kind, const RunConfig& config) {
  switch (kind) {
    case DatasetKind::kMnist: {
      const fs::path dir = config.data.Resolve(kind);
      RawSource src;
      src.train = LoadMnistPart(dir, "train");
      src.test = LoadMnistPart(dir, "t10k");
      src.has_test = true;
      return src;
    }
    case DatasetKind::kEmnistMnist: {
      const fs::path mnist = config.data.Resolve(DatasetKind::kMnist);
      const fs::path emnist = config.data.Resolve(kind);
      std::set<std::string> letters;
      for (const auto& s : data::BuiltinScenarios()) {
        if (s.dataset != kind) continue;
        letters.insert(s.test_anomaly_classes.begin(),
                       s.test_anomaly_classes.end());
      }
      const std::vector<std::string> keep(letters.begin(), letters.end());
      RawSource src;
      src.train = data::Merge(LoadMnistPart(mnist, "train"),
                              LoadLetters(emnist, "train", keep));
      src.test = data::Merge(LoadMnistPart(mnist, "t10k"),
                             LoadLetters(emnist, "test", keep));
      src.has_test = true;
      return src;
    }
    case DatasetKind::kNslKdd: {
      const fs::path dir = config.data.Resolve(kind);
      const fs::path test = dir / "KDDTest+.txt";
      return LoadTabular(SchemaDir(config.data) / "nsl-kdd.json",
                         dir / "KDDTrain+.txt", &test,
                         {"normal", "DoS", "Probe", "R2L", "U2R"});
    }
    case DatasetKind::kCreditCard: {
      const fs::path dir = config.data.Resolve(kind);
      return LoadTabular(SchemaDir(config.data) / "creditcard.json",
                         dir / "creditcard.csv", nullptr, {"normal", "fraud"});
    }
  }
  throw InvalidArgument("unknown dataset kind");
}

struct Splits {
  Dataset train;
  Dataset validation;
  Dataset test;
  Preprocessing preprocessing;
  std::vector<std::string> warnings;
};

// 80/5/15 split; when a separate test set exists, the training file is
// split 80:5 and the provided test set is used as is.
data::SplitRatios RatiosFor(const RawSource& src) {
  if (src.has_test) return {0.80 / 0.85, 0.05 / 0.85, 0.0};
  return {};
}

Splits MakeSplits(const RawSource& src, std::uint64_t seed) {
  Splits out;
  const std::uint64_t split_seed = DeriveSeed(seed, "split");
  if (!src.tabular) {
    const data::SplitIndices idx = data::StratifiedSplit(
        src.train.y, RatiosFor(src), split_seed, &out.warnings);
    out.train = src.train.Subset(idx.train);
    out.validation = src.train.Subset(idx.validation);
    out.test = src.has_test ? src.test : src.train.Subset(idx.test);
    out.preprocessing.kind = Preprocessing::Kind::kImage;
    out.preprocessing.input_dim = src.train.x.cols();
    return out;
  }

  std::vector<std::string> names = src.class_order;
  std::vector<int> labels;
  labels.reserve(src.train_table.labels.size());
  for (const std::string& l : src.train_table.labels) {
    auto it = std::find(names.begin(), names.end(), l);
    if (it == names.end()) {
      names.push_back(l);
      it = names.end() - 1;
    }
    labels.push_back(static_cast<int>(it - names.begin()));
  }
  const data::SplitIndices idx =
      data::StratifiedSplit(labels, RatiosFor(src), split_seed, &out.warnings);
  const data::RawTable train = data::SubsetRows(src.train_table, idx.train);
  const data::TabularTransform transform = data::TabularTransform::Fit(train);
  std::size_t unknown = 0;
  out.train = data::ToDataset(train, transform, src.class_order);
  out.validation = data::ToDataset(
      data::SubsetRows(src.train_table, idx.validation), transform,
      src.class_order, &unknown);
  std::size_t unknown_test = 0;
  out.test = src.has_test
                 ? data::ToDataset(src.test_table, transform, src.class_order,
                                   &unknown_test)
                 : data::ToDataset(data::SubsetRows(src.train_table, idx.test),
                                   transform, src.class_order, &unknown_test);
  if (unknown + unknown_test > 0) {
    out.warnings.push_back(std::to_string(unknown + unknown_test) +
                           " categorical values unseen in training were "
                           "encoded as all-zero groups");
  }
  out.preprocessing.kind = Preprocessing::Kind::kTabular;
  out.preprocessing.input_dim = transform.output_dim();
  out.preprocessing.schema = src.schema;
  out.preprocessing.transform = transform;
  return out;
}

struct TrainedDetector {
  Detector detector;
  std::vector<std::string> warnings;
};

// Caches shared across the jobs of one seed.
struct SeedState {
  std::uint64_t seed = 0;
  std::map<DatasetKind, Splits> splits;
  std::map<std::string, Target> targets;
  std::map<std::string, Vae> vaes;
  std::map<std::string, TrainedDetector> detectors;
};

struct Job {
  data::ExperimentScenario scenario;
  std::size_t budget = 0;
  std::uint64_t seed = 0;
  std::string preset;
};

std::string JobLabel(const Job& job) {
  return job.scenario.id + " budget " + std::to_string(job.budget) + " seed " +
         std::to_string(job.seed);
}

fs::path JobDir(const RunConfig& config, const Job& job) {
  return config.output_dir / job.scenario.id /
         ("budget-" + std::to_string(job.budget)) /
         ("seed-" + std::to_string(job.seed));
}

eval::MethodMetrics Evaluate(const std::vector<double>& scores,
                             const std::vector<int>& labels) {
  return {eval::RocAuc(scores, labels), eval::AveragePrecision(scores, labels)};
}

bool HasBothClasses(const std::vector<int>& labels) {
  const auto positives = std::count(labels.begin(), labels.end(), 1);
  return positives > 0 && positives < static_cast<long>(labels.size());
}

class Runner {
 public:
  Runner(const RunConfig& config, std::ostream* log)
      : config_(config), log_(log), fingerprint_(config.Fingerprint()) {}

  RunResult Execute();

 private:
  const Splits& SplitsFor(DatasetKind kind, SeedState& state);
  eval::MetricsReport RunJob(const Job& job, SeedState& state);
  void Time(const std::string& key, double seconds) { timings_[key] += seconds; }

  const RunConfig& config_;
  std::ostream* log_;
  std::string fingerprint_;
  std::map<DatasetKind, RawSource> sources_;
  std::map<DatasetKind, std::string> source_errors_;
  std::map<std::string, double> timings_;
  RunResult result_;
};

const Splits& Runner::SplitsFor(DatasetKind kind, SeedState& state) {
  if (auto it = state.splits.find(kind); it != state.splits.end()) {
    return it->second;
  }
  if (auto err = source_errors_.find(kind); err != source_errors_.end()) {
    throw IoError(err->second);
  }
  if (!sources_.contains(kind)) {
    Stopwatch watch;
    Log(log_, "loading " + data::DatasetKindName(kind));
    try {
      sources_.emplace(kind, LoadSource(kind, config_));
    } catch (const std::exception& e) {
      source_errors_[kind] = e.what();
      throw;
    }
    Time("load_data", watch.Seconds());
  }
  return state.splits.emplace(kind, MakeSplits(sources_.at(kind), state.seed))
      .first->second;
}

eval::MetricsReport Runner::RunJob(const Job& job, SeedState& state) {
  const data::ExperimentScenario& scenario = job.scenario;
  const Splits& splits = SplitsFor(scenario.dataset, state);

  data::ScenarioOptions options;
  options.anomaly_budget = job.budget;
  options.max_train_normals = config_.TrainNormalCap(scenario.dataset);
  options.seed = DeriveSeed(job.seed, "scenario");
  const data::ScenarioData sd = data::BuildScenario(
      splits.train, splits.validation, splits.test, scenario, options);

  eval::MetricsReport report;
  report.scenario = scenario.id;
  report.seed = job.seed;
  report.generator = GeneratorKindName(scenario.generator);
  report.anomaly_budget = job.budget;
  report.config_fingerprint = fingerprint_;
  report.train_normals = sd.train_normal.rows();
  report.train_anomalies = sd.train_anomalies.rows();
  report.test_rows = sd.test_y.size();
  report.test_anomalous = static_cast<std::size_t>(
      std::count(sd.test_y.begin(), sd.test_y.end(), 1));
  report.warnings = splits.warnings;
  report.warnings.insert(report.warnings.end(), sd.warnings.begin(),
                         sd.warnings.end());
  if (auto it = sources_.find(scenario.dataset); it != sources_.end()) {
    report.warnings.insert(report.warnings.begin(), it->second.warnings.begin(),
                           it->second.warnings.end());
  }

  // Target network, shared by every job that trains on the same normals.
  const std::string target_key = job.preset + "|" + DataDigest(sd.train_normal);
  if (!state.targets.contains(target_key)) {
    Stopwatch watch;
    TargetSpec spec = TargetPreset(job.preset, sd.train_normal.cols());
    if (spec.kind == TargetKind::kClassifier) {
      spec.n_classes = scenario.normal_classes.size();
    }
    Rng init(DeriveSeed(job.seed, "target-init"));
    Target target = BuildTarget(spec, init);
    TrainOptions options;
    options.epochs = config_.target_epochs;
    options.learning_rate = config_.target_learning_rate;
    options.batch_size = config_.target_batch_size;
    options.seed = DeriveSeed(job.seed, "target");
    TrainTarget(target, sd.train_normal, sd.train_normal_labels, options);
    state.targets.emplace(target_key, std::move(target));
    Time("train_target", watch.Seconds());
    Log(log_, "  target " + job.preset + " trained in " +
                  std::to_string(watch.Seconds()) + " s");
  }
  const Target& target = state.targets.at(target_key);
  report.target_fingerprint = Fingerprint(SerializeNetwork(target.net));

  const std::string detector_key = target_key + "|" +
                                   GeneratorKindName(scenario.generator) + "|" +
                                   DataDigest(sd.train_anomalies);
  if (!state.detectors.contains(detector_key)) {
    AnomalyGenerator generator;
    generator.kind = scenario.generator;
    generator.noise = config_.noise;
    generator.perturb_variance = config_.vae.perturb_variance;
    if (scenario.generator == GeneratorKind::kVae) {
      if (!state.vaes.contains(target_key)) {
        Stopwatch watch;
        state.vaes.emplace(target_key,
                           TrainVae(sd.train_normal, config_.vae,
                                    DeriveSeed(job.seed, "vae")));
        Time("train_vae", watch.Seconds());
      }
      generator.vae = state.vaes.at(target_key);
    }
    Stopwatch watch;
    Rng init(DeriveSeed(job.seed, "alarm-init"));
    TrainedDetector trained{
        Detector{target, BuildAlarm(target.net.trace_width(), config_.alarm,
                                    init),
                 std::move(generator)},
        {}};
    const std::string before = SerializeNetwork(trained.detector.target.net);
    AlarmTrainReport alarm_report =
        TrainAlarm(trained.detector, sd.train_normal, sd.train_anomalies,
                   config_.alarm, DeriveSeed(job.seed, "alarm"));
    ++result_.frozen_target_checks;
    if (SerializeNetwork(trained.detector.target.net) != before) {
      ++result_.frozen_target_violations;
      throw StateError("target parameters changed during alarm training");
    }
    trained.warnings = std::move(alarm_report.warnings);
    state.detectors.emplace(detector_key, std::move(trained));
    Time("train_alarm", watch.Seconds());
    Log(log_, "  alarm trained in " + std::to_string(watch.Seconds()) + " s");
  }
  const TrainedDetector& trained = state.detectors.at(detector_key);
  report.warnings.insert(report.warnings.end(), trained.warnings.begin(),
                         trained.warnings.end());

  Stopwatch eval_watch;
  const std::vector<double> scores = Detect(trained.detector, sd.test_x);
  report.methods[eval::kMethodA3] = Evaluate(scores, sd.test_y);
  report.roc = eval::RocCurve(scores, sd.test_y);
  std::vector<double> validation_scores;
  if (HasBothClasses(sd.validation_y)) {
    validation_scores = Detect(trained.detector, sd.validation_x);
    report.validation[eval::kMethodA3] =
        Evaluate(validation_scores, sd.validation_y);
  }
  if (target.kind == TargetKind::kAutoencoder) {
    report.methods[eval::kMethodAutoencoder] = Evaluate(
        baselines::AeReconstructionScore(target, sd.test_x), sd.test_y);
  }
  baselines::IsolationForestOptions forest_options;
  forest_options.n_trees = config_.iforest_trees;
  forest_options.subsample = config_.iforest_subsample;
  forest_options.seed = DeriveSeed(job.seed, "iforest");
  const baselines::IsolationForest forest = baselines::IsolationForest::Fit(
      VStack(sd.train_normal, sd.train_anomalies), forest_options);
  report.methods[eval::kMethodIsolationForest] =
      Evaluate(forest.Score(sd.test_x), sd.test_y);
  Time("evaluate", eval_watch.Seconds());

  const fs::path dir = JobDir(config_, job);
  eval::WriteJson(dir / "report.json", report.ToJson());
  eval::WriteRocTsv(dir / "roc.tsv", report.roc);
  if (!validation_scores.empty()) {
    eval::WriteRocTsv(dir / "roc_validation.tsv",
                      eval::RocCurve(validation_scores, sd.validation_y));
  }
  if (config_.write_bundles) {
    DetectorBundle bundle{trained.detector, splits.preprocessing, {}};
    bundle.metadata = {{"scenario", scenario.id},
                       {"seed", job.seed},
                       {"anomaly_budget", job.budget},
                       {"config_fingerprint", fingerprint_},
                       {"target_fingerprint", report.target_fingerprint}};
    SaveBundle(bundle, dir / "detector.a3db");
  }
  return report;
}

RunResult Runner::Execute() {
  Stopwatch total;
  std::vector<Job> jobs;
  for (std::uint64_t seed : config_.seeds) {
    for (const std::string& id : config_.scenarios) {
      data::ExperimentScenario scenario = data::FindScenario(id);
      if (config_.generator) scenario.generator = *config_.generator;
      std::vector<std::size_t> budgets = config_.budgets;
      if (budgets.empty()) budgets.push_back(scenario.anomaly_budget);
      for (std::size_t budget : budgets) {
        jobs.push_back({scenario, budget, seed,
                        config_.target_preset.value_or(scenario.target_preset)});
      }
    }
  }

  SeedState state;
  bool first = true;
  std::map<std::string, double> job_seconds;
  for (const Job& job : jobs) {
    if (first || state.seed != job.seed) {
      state = SeedState{};
      state.seed = job.seed;
      first = false;
    }
    Log(log_, "job " + JobLabel(job));
    Stopwatch watch;
    try {
      result_.reports.push_back(RunJob(job, state));
      const auto& m = result_.reports.back().methods.at(eval::kMethodA3);
      char buf[96];
      std::snprintf(buf, sizeof buf, "  auc %.4f ap %.4f", m.auc, m.ap);
      Log(log_, buf);
    } catch (const std::exception& e) {
      result_.failures.push_back(JobLabel(job) + ": " + e.what());
      Log(log_, "  failed: " + std::string(e.what()));
    }
    job_seconds[JobLabel(job)] = watch.Seconds();
  }

  // One aggregate per (scenario, budget, generator).
  std::map<std::tuple<std::string, std::size_t, std::string>,
           std::vector<eval::MetricsReport>>
      groups;
  for (const eval::MetricsReport& r : result_.reports) {
    groups[{r.scenario, r.anomaly_budget, r.generator}].push_back(r);
  }
  std::string summary = "scenario\tbudget\tgenerator\tmethod\tseeds\tauc\tap\n";
  for (const auto& [key, reports] : groups) {
    eval::AggregateReport agg = eval::AggregateReports(reports);
    eval::WriteJson(config_.output_dir / agg.scenario /
                        ("budget-" + std::to_string(agg.anomaly_budget)) /
                        "aggregate.json",
                    agg.ToJson());
    for (const auto& [method, m] : agg.methods) {
      summary += agg.scenario + "\t" + std::to_string(agg.anomaly_budget) +
                 "\t" + agg.generator + "\t" + method + "\t" +
                 std::to_string(agg.seeds.size()) + "\t" +
                 eval::FormatTableCell(m.auc) + "\t" +
                 eval::FormatTableCell(m.ap) + "\n";
    }
    result_.aggregates.push_back(std::move(agg));
  }
  WriteFileBytes(config_.output_dir / "summary.tsv", summary);

  nlohmann::json timing = {{"phases", timings_},
                           {"jobs", job_seconds},
                           {"total", total.Seconds()}};
  eval::WriteJson(config_.output_dir / "timings.json", timing);
  if (!result_.failures.empty()) {
    std::string text;
    for (const std::string& f : result_.failures) text += f + "\n";
    WriteFileBytes(config_.output_dir / "failures.txt", text);
  }
  return std::move(result_);
}

}  // namespace

RunResult Run(const RunConfig& config, std::ostream* log) {
  config.Validate();
  Runner runner(config, log);
  return runner.Execute();
}

ScoreResult Score(const fs::path& bundle_path, const fs::path& input_path) {
  const DetectorBundle bundle = LoadBundle(bundle_path);
  ScoreResult result;
  if (!fs::exists(input_path)) throw IoError("missing input " + input_path.string());
  if (fs::file_size(input_path) == 0) return result;

  Matrix x;
  const Preprocessing& pre = bundle.preprocessing;
  if (pre.kind == Preprocessing::Kind::kImage) {
    x = data::ReadIdxImages(input_path, pre.transpose);
    if (x.rows() > 0 && x.cols() != pre.input_dim) {
      throw DimensionError("score input", std::to_string(pre.input_dim) +
                                              " pixels per image",
                           std::to_string(x.cols()));
    }
  } else {
    const data::RawTable table =
        data::LoadCsvForScoring(input_path, *pre.schema);
    if (table.dropped_rows > 0) {
      result.warnings.push_back(std::to_string(table.dropped_rows) +
                                " unparseable rows were skipped");
    }
    std::size_t unknown = 0;
    x = pre.transform->Apply(table, &unknown);
    if (unknown > 0) {
      result.warnings.push_back(
          std::to_string(unknown) +
          " categorical values unseen in training were encoded as all-zero "
          "groups");
    }
  }
  if (x.rows() == 0) return result;
  result.scores = Detect(bundle.detector, x);
  return result;
}

void WriteScores(const fs::path& path, const std::vector<double>& scores) {
  std::string out;
  char buf[40];
  for (double s : scores) {
    std::snprintf(buf, sizeof buf, "%.17g\n", s);
    out += buf;
  }
  WriteFileBytes(path, out);
}

std::vector<eval::AggregateReport> AggregateFiles(
    const std::vector<fs::path>& inputs) {
  std::vector<fs::path> files;
  for (const fs::path& input : inputs) {
    if (fs::is_directory(input)) {
      for (const auto& entry : fs::recursive_directory_iterator(input)) {
        if (entry.is_regular_file() && entry.path().filename() == "report.json") {
          files.push_back(entry.path());
        }
      }
    } else {
      files.push_back(input);
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InvalidArgument("no report.json files found");
  std::map<std::tuple<std::string, std::size_t, std::string>,
           std::vector<eval::MetricsReport>>
      groups;
  for (const fs::path& f : files) {
    eval::MetricsReport r;
    try {
      r = eval::MetricsReport::FromJson(eval::ReadJson(f));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(f.string(), 0, e.what());
    }
    groups[{r.scenario, r.anomaly_budget, r.generator}].push_back(std::move(r));
  }
  std::vector<eval::AggregateReport> out;
  for (auto& [key, reports] : groups) {
    std::sort(reports.begin(), reports.end(),
              [](const auto& a, const auto& b) { return a.seed < b.seed; });
    out.push_back(eval::AggregateReports(reports));
  }
  return out;
}

}  // namespace a3
