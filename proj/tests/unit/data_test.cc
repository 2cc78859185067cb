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
#include <cstdlib>
#include <set>

#include <gtest/gtest.h>

#include "a3/data.h"
#include "a3/error.h"
#include "a3/serialize.h"
#include "test_support.h"

namespace a3::data {
namespace {

using testing::TempDir;

TEST(Idx, RoundTripAndScaling) {
  TempDir dir("idx");
  const std::vector<std::uint8_t> pixels = {0, 255, 51, 102, 1, 2, 3, 4};
  WriteIdxImages(dir.path() / "img", pixels, 2, 2, 2);
  WriteIdxLabels(dir.path() / "lab", std::vector<std::uint8_t>{3, 7});
  const Dataset ds = LoadIdx(dir.path() / "img", dir.path() / "lab");
  ASSERT_EQ(ds.x.rows(), 2u);
  ASSERT_EQ(ds.x.cols(), 4u);
  EXPECT_EQ(ds.x(0, 1), 1.0);
  EXPECT_EQ(ds.x(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(ds.x(0, 2), 0.2);
  EXPECT_EQ(ds.class_names[static_cast<std::size_t>(ds.y[1])], "7");
}

TEST(Idx, Transpose) {
  TempDir dir("idx");
  const std::vector<std::uint8_t> pixels = {1, 2, 3, 4};
  WriteIdxImages(dir.path() / "img", pixels, 1, 2, 2);
  const Matrix m = ReadIdxImages(dir.path() / "img", true);
  EXPECT_DOUBLE_EQ(m(0, 1) * 255, 3.0);
  EXPECT_DOUBLE_EQ(m(0, 2) * 255, 2.0);
}

TEST(Idx, BadMagicReportsOffset) {
  TempDir dir("idx");
  WriteIdxLabels(dir.path() / "lab", std::vector<std::uint8_t>{1});
  try {
    ReadIdxImages(dir.path() / "lab");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.offset(), 0u);
  }
}

TEST(Idx, TruncatedFileReportsOffset) {
  TempDir dir("idx");
  const std::vector<std::uint8_t> pixels(2 * 4 * 4, 9);
  WriteIdxImages(dir.path() / "img", pixels, 2, 4, 4);
  std::string bytes = ReadFileBytes(dir.path() / "img");
  bytes.resize(bytes.size() - 5);
  WriteFileBytes(dir.path() / "img", bytes);
  try {
    ReadIdxImages(dir.path() / "img");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.offset(), bytes.size());
  }
}

TEST(Idx, TruncatedHeader) {
  TempDir dir("idx");
  WriteFileBytes(dir.path() / "img", std::string("\0\0\x08\x03\0\0", 6));
  EXPECT_THROW(ReadIdxImages(dir.path() / "img"), FormatError);
}

TEST(Idx, LabelCountMustMatch) {
  TempDir dir("idx");
  WriteIdxImages(dir.path() / "img", std::vector<std::uint8_t>(8, 0), 2, 2, 2);
  WriteIdxLabels(dir.path() / "lab", std::vector<std::uint8_t>{1, 2, 3});
  EXPECT_THROW(LoadIdx(dir.path() / "img", dir.path() / "lab"), FormatError);
}

TEST(Idx, EmnistLetterNames) {
  TempDir dir("idx");
  WriteIdxImages(dir.path() / "img", std::vector<std::uint8_t>(3, 0), 3, 1, 1);
  WriteIdxLabels(dir.path() / "lab", std::vector<std::uint8_t>{1, 5, 26});
  const Dataset ds = LoadIdx(dir.path() / "img", dir.path() / "lab",
                             {IdxLabels::kEmnistLetters, false});
  EXPECT_EQ(ds.class_names[static_cast<std::size_t>(ds.y[0])], "A");
  EXPECT_EQ(ds.class_names[static_cast<std::size_t>(ds.y[1])], "E");
  EXPECT_EQ(ds.class_names[static_cast<std::size_t>(ds.y[2])], "Z");
}

TEST(Idx, MnistTrainingFileShape) {
  const char* root = std::getenv("A3_DATA_ROOT");
  const std::filesystem::path dir =
      std::filesystem::path(root ? root : "") / "mnist";
  if (root == nullptr ||
      !std::filesystem::exists(dir / "train-images-idx3-ubyte")) {
    GTEST_SKIP() << "MNIST not available under A3_DATA_ROOT";
  }
  const Dataset train = LoadIdx(dir / "train-images-idx3-ubyte",
                                dir / "train-labels-idx1-ubyte");
  const Dataset test = LoadIdx(dir / "t10k-images-idx3-ubyte",
                               dir / "t10k-labels-idx1-ubyte");
  EXPECT_EQ(train.x.rows(), 60000u);
  EXPECT_EQ(train.x.cols(), 784u);
  EXPECT_EQ(train.x.rows() + test.x.rows(), 70000u);
  const auto [lo, hi] =
      std::minmax_element(train.x.data().begin(), train.x.data().end());
  EXPECT_EQ(*lo, 0.0);
  EXPECT_EQ(*hi, 1.0);
}

std::vector<int> Labels(std::size_t n, int classes) {
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<int>(i % classes);
  return y;
}

TEST(Split, Sizes) {
  const SplitIndices s = StratifiedSplit(Labels(1000, 4), {}, 1);
  EXPECT_EQ(s.train.size(), 800u);
  EXPECT_EQ(s.validation.size(), 50u);
  EXPECT_EQ(s.test.size(), 150u);
}

TEST(Split, DisjointAndExhaustive) {
  const SplitIndices s = StratifiedSplit(Labels(997, 7), {}, 3);
  std::set<std::size_t> all;
  for (const auto* part : {&s.train, &s.validation, &s.test}) {
    for (std::size_t i : *part) EXPECT_TRUE(all.insert(i).second) << i;
  }
  EXPECT_EQ(all.size(), 997u);
  EXPECT_EQ(*all.rbegin(), 996u);
}

TEST(Split, Stratified) {
  const std::vector<int> y = Labels(1000, 2);
  const SplitIndices s = StratifiedSplit(y, {}, 5);
  std::size_t ones = 0;
  for (std::size_t i : s.test) ones += y[i];
  EXPECT_EQ(ones, 75u);
}

TEST(Split, SameSeedSameSplit) {
  const std::vector<int> y = Labels(500, 3);
  const SplitIndices a = StratifiedSplit(y, {}, 11);
  const SplitIndices b = StratifiedSplit(y, {}, 11);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.validation, b.validation);
  EXPECT_EQ(a.test, b.test);
  const SplitIndices c = StratifiedSplit(y, {}, 12);
  EXPECT_NE(a.test, c.test);
}

TEST(Split, RatiosMustSumToOne) {
  EXPECT_THROW(StratifiedSplit(Labels(10, 2), {0.5, 0.2, 0.2}, 1),
               InvalidArgument);
}

TEST(Split, TinyClassFallsBackWithWarning) {
  std::vector<int> y = Labels(100, 2);
  y.push_back(2);  // a class with a single row
  std::vector<std::string> warnings;
  const SplitIndices s = StratifiedSplit(y, {}, 1, &warnings);
  EXPECT_EQ(warnings.size(), 1u);
  EXPECT_EQ(s.train.size() + s.validation.size() + s.test.size(), 101u);
}

TEST(Scenario, Table1Rows) {
  const ExperimentScenario a = FindScenario("1a");
  EXPECT_EQ(a.normal_classes,
            (std::vector<std::string>{"0", "1", "2", "3", "4", "5"}));
  EXPECT_EQ(a.train_anomaly_classes, (std::vector<std::string>{"6", "7"}));
  EXPECT_EQ(a.test_anomaly_classes, (std::vector<std::string>{"6", "7"}));

  const ExperimentScenario b = FindScenario("2b");
  EXPECT_EQ(b.normal_classes,
            (std::vector<std::string>{"4", "5", "6", "7", "8", "9"}));
  EXPECT_EQ(b.train_anomaly_classes, (std::vector<std::string>{"0", "1"}));
  EXPECT_EQ(b.test_anomaly_classes,
            (std::vector<std::string>{"0", "1", "2", "3"}));

  const ExperimentScenario c = FindScenario("3a");
  EXPECT_EQ(c.dataset, DatasetKind::kEmnistMnist);
  EXPECT_EQ(c.normal_classes.size(), 10u);
  EXPECT_EQ(c.train_anomaly_classes,
            (std::vector<std::string>{"A", "B", "C", "D", "E"}));

  const ExperimentScenario v = FindScenario("4a");
  EXPECT_EQ(v.generator, GeneratorKind::kVae);
  EXPECT_EQ(v.anomaly_budget, 0u);
  EXPECT_EQ(v.normal_classes, a.normal_classes);
}

TEST(Scenario, EveryBuiltinIsValid) {
  for (const ExperimentScenario& s : BuiltinScenarios()) {
    EXPECT_NO_THROW(s.Validate()) << s.id;
  }
  EXPECT_THROW(FindScenario("9z"), InvalidArgument);
}

TEST(Scenario, TrainAnomaliesMustBeTestAnomalies) {
  ExperimentScenario s = FindScenario("1a");
  s.test_anomaly_classes = {"6"};
  EXPECT_THROW(s.Validate(), InvalidArgument);
}

Dataset Digits(std::size_t per_class, double offset) {
  Dataset ds;
  for (char c = '0'; c <= '9'; ++c) ds.class_names.emplace_back(1, c);
  ds.x = Matrix(per_class * 10, 2);
  for (std::size_t i = 0; i < per_class * 10; ++i) {
    ds.y.push_back(static_cast<int>(i % 10));
    ds.x(i, 0) = static_cast<double>(i);
    ds.x(i, 1) = offset;
  }
  return ds;
}

TEST(BuildScenario, PartitionsAndLabels) {
  const Dataset train = Digits(50, 0);
  const Dataset test = Digits(10, 1);
  ScenarioOptions o;
  o.anomaly_budget = 25;
  o.seed = 4;
  const ScenarioData d = BuildScenario(train, test, test, FindScenario("2a"), o);
  EXPECT_EQ(d.train_normal.rows(), 300u);
  EXPECT_EQ(d.train_anomalies.rows(), 25u);
  // Anomaly draws come from training rows of classes 6 and 7, distinct.
  std::set<std::size_t> rows(d.anomaly_rows.begin(), d.anomaly_rows.end());
  EXPECT_EQ(rows.size(), 25u);
  for (std::size_t r : d.anomaly_rows) {
    EXPECT_TRUE(train.y[r] == 6 || train.y[r] == 7);
  }
  // Test = normals 0..5 (label 0) + anomalies 6..9 (label 1).
  EXPECT_EQ(d.test_y.size(), 100u);
  EXPECT_EQ(std::count(d.test_y.begin(), d.test_y.end(), 1), 40);
  for (std::size_t i = 0; i < d.test_y.size(); ++i) {
    const int digit = static_cast<int>(d.test_x(i, 0)) % 10;
    EXPECT_EQ(d.test_y[i], digit >= 6 ? 1 : 0);
  }
}

TEST(BuildScenario, DrawIsReproducibleAndNested) {
  const Dataset train = Digits(50, 0);
  ScenarioOptions o;
  o.seed = 8;
  o.anomaly_budget = 100;
  const ScenarioData big = BuildScenario(train, train, train, FindScenario("1a"), o);
  const ScenarioData again = BuildScenario(train, train, train, FindScenario("1a"), o);
  EXPECT_EQ(big.anomaly_rows, again.anomaly_rows);
  o.anomaly_budget = 5;
  const ScenarioData small = BuildScenario(train, train, train, FindScenario("1a"), o);
  EXPECT_TRUE(std::equal(small.anomaly_rows.begin(), small.anomaly_rows.end(),
                         big.anomaly_rows.begin()));
}

TEST(BuildScenario, BudgetAboveSupplyWarns) {
  const Dataset train = Digits(5, 0);
  ScenarioOptions o;
  o.anomaly_budget = 100;
  const ScenarioData d = BuildScenario(train, train, train, FindScenario("1a"), o);
  EXPECT_EQ(d.train_anomalies.rows(), 10u);
  EXPECT_EQ(d.warnings.size(), 1u);
}

TEST(BuildScenario, NormalCapSubsamples) {
  const Dataset train = Digits(50, 0);
  ScenarioOptions o;
  o.max_train_normals = 120;
  const ScenarioData d = BuildScenario(train, train, train, FindScenario("1a"), o);
  EXPECT_EQ(d.train_normal.rows(), 120u);
  EXPECT_EQ(d.train_normal_labels.size(), 120u);
  for (int l : d.train_normal_labels) EXPECT_LT(l, 6);
}

TEST(BuildScenario, MissingClassIsAnError) {
  Dataset train = Digits(5, 0);
  train.class_names.resize(6);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < train.y.size(); ++i) {
    if (train.y[i] < 6) keep.push_back(i);
  }
  train = train.Subset(keep);
  EXPECT_THROW(BuildScenario(train, train, train, FindScenario("1a"), {}),
               InvalidArgument);
}

TEST(Dataset, MergeRemapsByName) {
  Dataset a;
  a.class_names = {"0", "1"};
  a.x = Matrix(2, 1, 0.0);
  a.y = {0, 1};
  Dataset b;
  b.class_names = {"N/A", "A", "1"};
  b.x = Matrix(2, 1, 1.0);
  b.y = {1, 2};
  const Dataset m = Merge(a, b);
  EXPECT_EQ(m.class_names, (std::vector<std::string>{"0", "1", "N/A", "A"}));
  EXPECT_EQ(m.y, (std::vector<int>{0, 1, 3, 1}));
}

}  // namespace
}  // namespace a3::data
