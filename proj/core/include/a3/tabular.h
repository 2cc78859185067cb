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

// Schema-driven CSV ingestion for tabular data sets: numeric columns are
// min-max scaled with training statistics, categorical columns one-hot
// encoded.

#ifndef A3_TABULAR_H_
#define A3_TABULAR_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "a3/data.h"
#include "a3/matrix.h"

namespace a3::data {

enum class ColumnKind { kNumeric, kCategorical, kLabel, kIgnore };

struct ColumnSchema {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;
};

struct CsvSchema {
  std::vector<ColumnSchema> columns;
  bool has_header = false;
  char delimiter = ',';
  // Raw label value -> class name. Labels absent from the map keep their
  // raw value.
  std::map<std::string, std::string> label_groups;

  static CsvSchema FromJson(const nlohmann::json& j);
  static CsvSchema Load(const std::filesystem::path& path);
  nlohmann::json ToJson() const;

  std::size_t FeatureColumnCount() const;  // numeric + categorical
  std::string MapLabel(const std::string& raw) const;
};

// Splits one CSV record; double quotes group fields and "" escapes a quote.
std::vector<std::string> SplitCsvLine(const std::string& line, char delimiter);

// Parsed rows before scaling, features in schema order.
struct RawTable {
  std::vector<std::string> numeric_names;
  std::vector<std::string> categorical_names;
  Matrix numeric;                                  // n x numeric columns
  std::vector<std::vector<std::string>> categorical;  // n x categorical
  std::vector<std::string> labels;                 // mapped; empty if none
  std::size_t dropped_rows = 0;
  std::size_t size() const { return numeric.rows(); }
};

// Rows with the wrong field count or an unparseable numeric value are
// dropped and counted.
RawTable LoadCsv(const std::filesystem::path& path, const CsvSchema& schema);

// Scoring input: columns are matched by header name when the first line names
// every feature column, otherwise by position with either the full schema
// width or the feature-only width.
RawTable LoadCsvForScoring(const std::filesystem::path& path,
                           const CsvSchema& schema);

// Preprocessing fitted on training rows only.
class TabularTransform {
 public:
  static TabularTransform Fit(const RawTable& train);

  // Numeric features first (clipped to [0, 1]), then one one-hot group per
  // categorical column. Unknown levels encode as all zeros and are counted
  // in *unknown_levels.
  Matrix Apply(const RawTable& table,
               std::size_t* unknown_levels = nullptr) const;

  std::size_t output_dim() const;
  const std::vector<double>& min() const { return min_; }
  const std::vector<double>& max() const { return max_; }
  const std::vector<std::vector<std::string>>& levels() const {
    return levels_;
  }

  nlohmann::json ToJson() const;
  static TabularTransform FromJson(const nlohmann::json& j);

 private:
  std::vector<std::string> numeric_names_;
  std::vector<std::string> categorical_names_;
  std::vector<double> min_;
  std::vector<double> max_;
  std::vector<std::vector<std::string>> levels_;
};

// Transformed features plus labels indexed by class_order; labels missing
// from class_order are appended in sorted order.
Dataset ToDataset(const RawTable& table, const TabularTransform& transform,
                  std::vector<std::string> class_order = {},
                  std::size_t* unknown_levels = nullptr);

RawTable SubsetRows(const RawTable& table, std::span<const std::size_t> rows);

}  // namespace a3::data

#endif  // A3_TABULAR_H_
