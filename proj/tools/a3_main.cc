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

// Command-line front end: run experiments, score new data with a saved
// detector, aggregate per-seed reports.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "a3/error.h"
#include "a3/report.h"
#include "a3/runner.h"

namespace {

int RunCommand(const std::string& config_path, const std::string& output,
               const std::vector<std::uint64_t>& seeds, bool full_data,
               const std::string& data_root, bool quiet) {
  a3::RunConfig config = a3::RunConfig::Load(config_path);
  if (!output.empty()) config.output_dir = output;
  if (!seeds.empty()) config.seeds = seeds;
  if (full_data) config.full_data = true;
  if (!data_root.empty()) config.data.root = data_root;

  const a3::RunResult result = a3::Run(config, quiet ? nullptr : &std::cerr);
  for (const auto& agg : result.aggregates) {
    for (const auto& [method, m] : agg.methods) {
      std::printf("%-4s budget %-4zu %-18s AUC %s  AP %s  (%zu seeds)\n",
                  agg.scenario.c_str(), agg.anomaly_budget, method.c_str(),
                  a3::eval::FormatTableCell(m.auc).c_str(),
                  a3::eval::FormatTableCell(m.ap).c_str(), agg.seeds.size());
    }
  }
  for (const std::string& f : result.failures) {
    std::cerr << "error: " << f << "\n";
  }
  if (result.frozen_target_violations > 0) {
    std::cerr << "error: target parameters changed during alarm training\n";
  }
  return result.ok() ? 0 : 1;
}

int ScoreCommand(const std::string& bundle, const std::string& input,
                 const std::string& output) {
  const a3::ScoreResult result = a3::Score(bundle, input);
  for (const std::string& w : result.warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  if (output.empty()) {
    for (double s : result.scores) std::printf("%.17g\n", s);
  } else {
    a3::WriteScores(output, result.scores);
  }
  return 0;
}

int AggregateCommand(const std::vector<std::string>& inputs,
                     const std::string& output) {
  std::vector<std::filesystem::path> paths(inputs.begin(), inputs.end());
  nlohmann::json out = nlohmann::json::array();
  for (const auto& agg : a3::AggregateFiles(paths)) out.push_back(agg.ToJson());
  if (output.empty()) {
    std::cout << a3::eval::DumpJson(out);
  } else {
    a3::eval::WriteJson(output, out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"A3 anomaly detection: target, anomaly and alarm networks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output;
  std::vector<std::uint64_t> seeds;
  bool full_data = false;
  std::string data_root;
  bool quiet = false;
  CLI::App* run = app.add_subcommand("run", "Run the experiments of a config");
  run->add_option("-c,--config", config_path, "Run configuration (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("-o,--output", output, "Output directory");
  run->add_option("-s,--seed", seeds, "Seed override (repeatable)");
  run->add_flag("--full-data", full_data, "Disable training-row caps");
  run->add_option("--data-root", data_root,
                  std::string("Dataset root (default: $") + a3::kDataRootEnv +
                      ")");
  run->add_flag("-q,--quiet", quiet, "No progress output");

  std::string bundle;
  std::string input;
  std::string scores_out;
  CLI::App* score =
      app.add_subcommand("score", "Score IDX or CSV input with a detector");
  score->add_option("-b,--bundle", bundle, "Detector bundle (.a3db)")
      ->required()
      ->check(CLI::ExistingFile);
  score->add_option("-i,--input", input, "IDX image file or CSV file")
      ->required();
  score->add_option("-o,--output", scores_out, "Score file (default: stdout)");

  std::vector<std::string> reports;
  std::string aggregate_out;
  CLI::App* aggregate = app.add_subcommand(
      "aggregate", "Combine report.json files into mean/std summaries");
  aggregate->add_option("inputs", reports, "Report files or run directories")
      ->required();
  aggregate->add_option("-o,--output", aggregate_out,
                        "Output JSON (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      return RunCommand(config_path, output, seeds, full_data, data_root, quiet);
    }
    if (*score) return ScoreCommand(bundle, input, scores_out);
    if (*aggregate) return AggregateCommand(reports, aggregate_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
