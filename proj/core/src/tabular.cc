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

#include "a3/tabular.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include "a3/error.h"

namespace a3::data {
namespace {

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

bool ParseDouble(const std::string& s, double& out) {
  const std::string t = Trim(s);
  if (t.empty()) return false;
  const char* first = t.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), out);
  return ec == std::errc() && ptr == t.data() + t.size() && std::isfinite(out);
}

ColumnKind ParseKind(const std::string& s) {
  if (s == "numeric") return ColumnKind::kNumeric;
  if (s == "categorical") return ColumnKind::kCategorical;
  if (s == "label") return ColumnKind::kLabel;
  if (s == "ignore") return ColumnKind::kIgnore;
  throw InvalidArgument("unknown column kind '" + s + "'");
}

std::string KindName(ColumnKind k) {
  switch (k) {
    case ColumnKind::kNumeric:
      return "numeric";
    case ColumnKind::kCategorical:
      return "categorical";
    case ColumnKind::kLabel:
      return "label";
    case ColumnKind::kIgnore:
      return "ignore";
  }
  return "ignore";
}

std::vector<std::string> ReadLines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

// source[i] = field index feeding schema column i, or -1 when absent.
RawTable ParseRows(const std::vector<std::string>& lines, std::size_t first,
                   const CsvSchema& schema, const std::vector<int>& source,
                   std::size_t expected_fields) {
  RawTable table;
  bool has_label = false;
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    const ColumnSchema& col = schema.columns[c];
    if (col.kind == ColumnKind::kNumeric) table.numeric_names.push_back(col.name);
    if (col.kind == ColumnKind::kCategorical) {
      table.categorical_names.push_back(col.name);
    }
    if (col.kind == ColumnKind::kLabel && source[c] >= 0) has_label = true;
  }
  std::vector<double> numeric;
  std::size_t rows = 0;
  for (std::size_t i = first; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    const std::vector<std::string> fields =
        SplitCsvLine(lines[i], schema.delimiter);
    if (fields.size() != expected_fields) {
      ++table.dropped_rows;
      continue;
    }
    std::vector<double> num;
    std::vector<std::string> cat;
    std::string label;
    bool ok = true;
    for (std::size_t c = 0; c < schema.columns.size() && ok; ++c) {
      if (source[c] < 0) continue;
      const std::string& field = fields[static_cast<std::size_t>(source[c])];
      switch (schema.columns[c].kind) {
        case ColumnKind::kNumeric: {
          double v = 0;
          ok = ParseDouble(field, v);
          num.push_back(v);
          break;
        }
        case ColumnKind::kCategorical:
          cat.push_back(Trim(field));
          break;
        case ColumnKind::kLabel:
          label = schema.MapLabel(Trim(field));
          break;
        case ColumnKind::kIgnore:
          break;
      }
    }
    if (!ok) {
      ++table.dropped_rows;
      continue;
    }
    numeric.insert(numeric.end(), num.begin(), num.end());
    table.categorical.push_back(std::move(cat));
    if (has_label) table.labels.push_back(std::move(label));
    ++rows;
  }
  table.numeric = Matrix(rows, table.numeric_names.size(), std::move(numeric));
  return table;
}

}  // namespace

CsvSchema CsvSchema::FromJson(const nlohmann::json& j) {
  CsvSchema s;
  for (const auto& c : j.at("columns")) {
    s.columns.push_back({c.at("name").get<std::string>(),
                         ParseKind(c.value("kind", std::string("numeric")))});
  }
  s.has_header = j.value("has_header", false);
  const std::string delim = j.value("delimiter", std::string(","));
  if (delim.size() != 1) throw InvalidArgument("delimiter must be one char");
  s.delimiter = delim[0];
  if (j.contains("label_groups")) {
    for (const auto& [group, raws] : j.at("label_groups").items()) {
      for (const auto& raw : raws) {
        s.label_groups[raw.get<std::string>()] = group;
      }
    }
  }
  std::size_t labels = 0;
  for (const ColumnSchema& c : s.columns) {
    if (c.kind == ColumnKind::kLabel) ++labels;
  }
  if (labels > 1) throw InvalidArgument("schema declares several label columns");
  return s;
}

CsvSchema CsvSchema::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open schema " + path.string());
  try {
    return FromJson(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string(), 0, e.what());
  }
}

nlohmann::json CsvSchema::ToJson() const {
  nlohmann::json j;
  j["columns"] = nlohmann::json::array();
  for (const ColumnSchema& c : columns) {
    j["columns"].push_back({{"name", c.name}, {"kind", KindName(c.kind)}});
  }
  j["has_header"] = has_header;
  j["delimiter"] = std::string(1, delimiter);
  std::map<std::string, std::vector<std::string>> groups;
  for (const auto& [raw, group] : label_groups) groups[group].push_back(raw);
  j["label_groups"] = groups;
  return j;
}

std::size_t CsvSchema::FeatureColumnCount() const {
  return static_cast<std::size_t>(
      std::count_if(columns.begin(), columns.end(), [](const ColumnSchema& c) {
        return c.kind == ColumnKind::kNumeric ||
               c.kind == ColumnKind::kCategorical;
      }));
}

std::string CsvSchema::MapLabel(const std::string& raw) const {
  auto it = label_groups.find(raw);
  return it == label_groups.end() ? raw : it->second;
}

std::vector<std::string> SplitCsvLine(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delimiter) {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

RawTable LoadCsv(const std::filesystem::path& path, const CsvSchema& schema) {
  const std::vector<std::string> lines = ReadLines(path);
  std::vector<int> source(schema.columns.size());
  for (std::size_t c = 0; c < source.size(); ++c) source[c] = static_cast<int>(c);
  return ParseRows(lines, schema.has_header ? 1 : 0, schema, source,
                   schema.columns.size());
}

RawTable LoadCsvForScoring(const std::filesystem::path& path,
                           const CsvSchema& schema) {
  const std::vector<std::string> lines = ReadLines(path);
  std::size_t first = 0;
  while (first < lines.size() && Trim(lines[first]).empty()) ++first;
  std::vector<int> source(schema.columns.size(), -1);
  if (first == lines.size()) {
    return ParseRows(lines, first, schema, source, 0);
  }
  const std::vector<std::string> head =
      SplitCsvLine(lines[first], schema.delimiter);

  std::map<std::string, int> by_name;
  for (std::size_t i = 0; i < head.size(); ++i) {
    by_name[Trim(head[i])] = static_cast<int>(i);
  }
  std::vector<std::string> missing;
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    auto it = by_name.find(schema.columns[c].name);
    if (it != by_name.end()) {
      source[c] = it->second;
    } else if (schema.columns[c].kind == ColumnKind::kNumeric ||
               schema.columns[c].kind == ColumnKind::kCategorical) {
      missing.push_back(schema.columns[c].name);
    }
  }
  if (missing.empty()) {
    return ParseRows(lines, first + 1, schema, source, head.size());
  }

  const std::size_t offset = schema.has_header ? first + 1 : first;
  if (head.size() == schema.columns.size()) {
    for (std::size_t c = 0; c < source.size(); ++c) {
      source[c] = static_cast<int>(c);
    }
    return ParseRows(lines, offset, schema, source, head.size());
  }
  if (head.size() == schema.FeatureColumnCount()) {
    int next = 0;
    for (std::size_t c = 0; c < source.size(); ++c) {
      const ColumnKind k = schema.columns[c].kind;
      source[c] = (k == ColumnKind::kNumeric || k == ColumnKind::kCategorical)
                      ? next++
                      : -1;
    }
    return ParseRows(lines, offset, schema, source, head.size());
  }
  std::string names;
  for (std::size_t i = 0; i < missing.size() && i < 10; ++i) {
    names += (i ? ", " : "") + missing[i];
  }
  if (missing.size() > 10) names += ", ...";
  throw FormatError(path.string(), 0,
                    "cannot match " + std::to_string(head.size()) +
                        " columns to the schema (" +
                        std::to_string(schema.columns.size()) + " columns, " +
                        std::to_string(schema.FeatureColumnCount()) +
                        " features); unmatched feature columns: " + names);
}

TabularTransform TabularTransform::Fit(const RawTable& train) {
  if (train.size() == 0) {
    throw InvalidArgument("TabularTransform::Fit: no training rows");
  }
  TabularTransform t;
  t.numeric_names_ = train.numeric_names;
  t.categorical_names_ = train.categorical_names;
  const std::size_t d = train.numeric.cols();
  t.min_.assign(d, 0.0);
  t.max_.assign(d, 0.0);
  for (std::size_t c = 0; c < d; ++c) {
    double lo = train.numeric(0, c);
    double hi = lo;
    for (std::size_t r = 1; r < train.size(); ++r) {
      lo = std::min(lo, train.numeric(r, c));
      hi = std::max(hi, train.numeric(r, c));
    }
    t.min_[c] = lo;
    t.max_[c] = hi;
  }
  t.levels_.resize(train.categorical_names.size());
  for (std::size_t c = 0; c < t.levels_.size(); ++c) {
    std::set<std::string> seen;
    for (const auto& row : train.categorical) seen.insert(row[c]);
    t.levels_[c].assign(seen.begin(), seen.end());
  }
  return t;
}

std::size_t TabularTransform::output_dim() const {
  std::size_t d = min_.size();
  for (const auto& l : levels_) d += l.size();
  return d;
}

Matrix TabularTransform::Apply(const RawTable& table,
                               std::size_t* unknown_levels) const {
  if (table.numeric.cols() != min_.size() ||
      table.categorical_names.size() != levels_.size()) {
    throw DimensionError("TabularTransform::Apply",
                         std::to_string(min_.size()) + " numeric + " +
                             std::to_string(levels_.size()) + " categorical",
                         std::to_string(table.numeric.cols()) + " numeric + " +
                             std::to_string(table.categorical_names.size()) +
                             " categorical");
  }
  Matrix out(table.size(), output_dim());
  std::size_t unknown = 0;
  for (std::size_t r = 0; r < table.size(); ++r) {
    auto row = out.row(r);
    for (std::size_t c = 0; c < min_.size(); ++c) {
      const double span = max_[c] - min_[c];
      row[c] = span > 0 ? std::clamp((table.numeric(r, c) - min_[c]) / span,
                                     0.0, 1.0)
                        : 0.0;
    }
    std::size_t offset = min_.size();
    for (std::size_t c = 0; c < levels_.size(); ++c) {
      const auto& lv = levels_[c];
      auto it = std::lower_bound(lv.begin(), lv.end(), table.categorical[r][c]);
      if (it != lv.end() && *it == table.categorical[r][c]) {
        row[offset + static_cast<std::size_t>(it - lv.begin())] = 1.0;
      } else {
        ++unknown;
      }
      offset += lv.size();
    }
  }
  if (unknown_levels != nullptr) *unknown_levels = unknown;
  return out;
}

nlohmann::json TabularTransform::ToJson() const {
  return {{"numeric_names", numeric_names_},
          {"categorical_names", categorical_names_},
          {"min", min_},
          {"max", max_},
          {"levels", levels_}};
}

TabularTransform TabularTransform::FromJson(const nlohmann::json& j) {
  TabularTransform t;
  j.at("numeric_names").get_to(t.numeric_names_);
  j.at("categorical_names").get_to(t.categorical_names_);
  j.at("min").get_to(t.min_);
  j.at("max").get_to(t.max_);
  j.at("levels").get_to(t.levels_);
  if (t.min_.size() != t.max_.size() ||
      t.min_.size() != t.numeric_names_.size() ||
      t.levels_.size() != t.categorical_names_.size()) {
    throw InvalidArgument("inconsistent tabular transform metadata");
  }
  return t;
}

Dataset ToDataset(const RawTable& table, const TabularTransform& transform,
                  std::vector<std::string> class_order,
                  std::size_t* unknown_levels) {
  Dataset ds;
  ds.x = transform.Apply(table, unknown_levels);
  ds.class_names = std::move(class_order);
  std::set<std::string> extra;
  for (const std::string& l : table.labels) {
    if (std::find(ds.class_names.begin(), ds.class_names.end(), l) ==
        ds.class_names.end()) {
      extra.insert(l);
    }
  }
  ds.class_names.insert(ds.class_names.end(), extra.begin(), extra.end());
  ds.y.reserve(table.size());
  for (const std::string& l : table.labels) ds.y.push_back(ds.ClassId(l));
  if (table.labels.empty()) ds.y.assign(table.size(), -1);
  return ds;
}

RawTable SubsetRows(const RawTable& table, std::span<const std::size_t> rows) {
  RawTable out;
  out.numeric_names = table.numeric_names;
  out.categorical_names = table.categorical_names;
  out.numeric = GatherRows(table.numeric, rows);
  out.categorical.reserve(rows.size());
  for (std::size_t r : rows) out.categorical.push_back(table.categorical.at(r));
  if (!table.labels.empty()) {
    out.labels.reserve(rows.size());
    for (std::size_t r : rows) out.labels.push_back(table.labels.at(r));
  }
  return out;
}

}  // namespace a3::data
