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
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "a3/error.h"
#include "a3/metrics.h"
#include "a3/report.h"
#include "a3/serialize.h"
#include "test_support.h"

namespace a3::eval {
namespace {

struct Instance {
  std::vector<double> scores;
  std::vector<int> labels;
};

// Random instance with both classes; coarse rounding creates ties.
Instance RandomInstance(std::mt19937_64& gen) {
  std::uniform_int_distribution<std::size_t> size(2, 200);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> grid(0, 1);
  std::normal_distribution<double> normal(0, 1);
  Instance in;
  const std::size_t n = size(gen);
  const bool coarse = grid(gen) == 1;
  for (std::size_t i = 0; i < n; ++i) {
    const int y = i == 0 ? 0 : (i == 1 ? 1 : coin(gen));
    double s = normal(gen) + 0.7 * y;
    if (coarse) s = std::round(s * 2) / 2;
    in.scores.push_back(s);
    in.labels.push_back(y);
  }
  return in;
}

TEST(RocAuc, Examples) {
  EXPECT_EQ(RocAuc(std::vector<double>{0.1, 0.9}, std::vector<int>{0, 1}), 1.0);
  EXPECT_DOUBLE_EQ(RocAuc(std::vector<double>{0.2, 0.4, 0.6, 0.8},
                          std::vector<int>{0, 1, 0, 1}),
                   0.75);
  EXPECT_EQ(RocAuc(std::vector<double>(6, 0.3), std::vector<int>{0, 1, 0, 1, 1, 0}),
            0.5);
}

TEST(RocAuc, SingleClassIsAnError) {
  EXPECT_THROW(RocAuc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}),
               InvalidArgument);
  EXPECT_THROW(AveragePrecision(std::vector<double>{0.1}, std::vector<int>{0}),
               InvalidArgument);
  EXPECT_THROW(RocCurve(std::vector<double>{0.1}, std::vector<int>{0}),
               InvalidArgument);
}

TEST(AveragePrecision, Examples) {
  EXPECT_EQ(AveragePrecision(std::vector<double>{0.9, 0.8, 0.2, 0.1},
                             std::vector<int>{1, 1, 0, 0}),
            1.0);
  EXPECT_NEAR(AveragePrecision(std::vector<double>{0.9, 0.8, 0.7},
                               std::vector<int>{1, 0, 1}),
              0.5 + 0.5 * 2.0 / 3.0, 1e-15);
}

TEST(Metrics, MatchBruteForceOracles) {
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance in = RandomInstance(gen);
    EXPECT_NEAR(RocAuc(in.scores, in.labels),
                testing::PairCountingAuc(in.scores, in.labels), 1e-9);
    EXPECT_NEAR(AveragePrecision(in.scores, in.labels),
                testing::ThresholdSweepAp(in.scores, in.labels), 1e-9);
  }
}

TEST(RocCurve, EndpointsAndMonotone) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 30; ++trial) {
    const Instance in = RandomInstance(gen);
    const std::vector<RocPoint> pts = RocCurve(in.scores, in.labels);
    EXPECT_EQ(pts.front(), (RocPoint{0, 0}));
    EXPECT_EQ(pts.back(), (RocPoint{1, 1}));
    for (std::size_t i = 1; i < pts.size(); ++i) {
      EXPECT_GE(pts[i].fpr, pts[i - 1].fpr);
      EXPECT_GE(pts[i].tpr, pts[i - 1].tpr);
    }
    EXPECT_NEAR(TrapezoidArea(pts), RocAuc(in.scores, in.labels), 1e-12);
  }
}

TEST(RocCurve, PerfectSeparationPassesThroughCorner) {
  const std::vector<RocPoint> pts = RocCurve(std::vector<double>{0.1, 0.2, 0.8, 0.9},
                                             std::vector<int>{0, 0, 1, 1});
  EXPECT_NE(std::find(pts.begin(), pts.end(), RocPoint{0, 1}), pts.end());
}

TEST(RocAuc, ReversedScoresReflect) {
  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 30; ++trial) {
    Instance in = RandomInstance(gen);
    const double auc = RocAuc(in.scores, in.labels);
    for (double& s : in.scores) s = -s;
    EXPECT_NEAR(RocAuc(in.scores, in.labels), 1 - auc, 1e-12);
  }
}

TEST(RocAuc, LabelComplement) {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 30; ++trial) {
    Instance in = RandomInstance(gen);
    std::vector<int> flipped;
    for (int y : in.labels) flipped.push_back(1 - y);
    EXPECT_NEAR(RocAuc(in.scores, in.labels) + RocAuc(in.scores, flipped), 1.0,
                1e-12);
  }
}

TEST(RocAuc, InvariantUnderMonotoneTransform) {
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 30; ++trial) {
    Instance in = RandomInstance(gen);
    const double auc = RocAuc(in.scores, in.labels);
    for (double& s : in.scores) s = std::exp(3 * s) + 7;
    EXPECT_NEAR(RocAuc(in.scores, in.labels), auc, 1e-12);
  }
}

TEST(Aggregate, MeanAndSampleStd) {
  const Aggregate a = Summarize(std::vector<double>{0.9, 1.0});
  EXPECT_DOUBLE_EQ(a.mean, 0.95);
  EXPECT_NEAR(a.std, std::sqrt(0.005), 1e-15);
  EXPECT_EQ(Summarize(std::vector<double>{0.7, 0.7, 0.7}).std, 0.0);
  EXPECT_EQ(Summarize(std::vector<double>{0.7}).std, 0.0);
  EXPECT_THROW(Summarize(std::vector<double>{}), InvalidArgument);
}

TEST(Aggregate, TableCellFormat) {
  EXPECT_EQ(FormatTableCell(0.984, 0.004), ".98±.00");
  EXPECT_EQ(FormatTableCell(0.88, 0.03), ".88±.03");
  EXPECT_EQ(FormatTableCell(0.999, 0.001), "1.0±.00");
}

MetricsReport SampleReport(std::uint64_t seed, double auc) {
  MetricsReport r;
  r.scenario = "1a";
  r.seed = seed;
  r.generator = "noise";
  r.anomaly_budget = 100;
  r.config_fingerprint = "abc";
  r.methods[kMethodA3] = {auc, auc - 0.01};
  r.methods[kMethodIsolationForest] = {0.6, 0.3};
  r.validation[kMethodA3] = {0.97, 0.95};
  r.roc = {{0, 0}, {0.25, 0.5}, {1, 1}};
  r.warnings = {"w"};
  return r;
}

TEST(Report, JsonRoundTripAndStableBytes) {
  const MetricsReport r = SampleReport(3, 0.91);
  const MetricsReport back = MetricsReport::FromJson(r.ToJson());
  EXPECT_EQ(back, r);
  EXPECT_EQ(DumpJson(back.ToJson()), DumpJson(r.ToJson()));
}

TEST(Report, AggregatesSeeds) {
  const std::vector<MetricsReport> rs = {SampleReport(1, 0.9), SampleReport(2, 1.0)};
  const AggregateReport agg = AggregateReports(rs);
  EXPECT_EQ(agg.seeds, (std::vector<std::uint64_t>{1, 2}));
  EXPECT_DOUBLE_EQ(agg.methods.at(kMethodA3).auc.mean, 0.95);
}

TEST(Report, FingerprintMismatchIsRejected) {
  std::vector<MetricsReport> rs = {SampleReport(1, 0.9), SampleReport(2, 1.0)};
  rs[1].config_fingerprint = "def";
  EXPECT_THROW(AggregateReports(rs), InvalidArgument);
}

TEST(Report, RocTsv) {
  testing::TempDir dir("roc");
  const std::vector<RocPoint> pts = {{0, 0}, {0.5, 1}, {1, 1}};
  WriteRocTsv(dir.path() / "roc.tsv", pts);
  EXPECT_EQ(ReadFileBytes(dir.path() / "roc.tsv"), "fpr\ttpr\n0\t0\n0.5\t1\n1\t1\n");
}

}  // namespace
}  // namespace a3::eval
