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

// Threshold-free detection metrics and multi-seed aggregation.

#ifndef A3_METRICS_H_
#define A3_METRICS_H_

#include <span>
#include <string>
#include <vector>

namespace a3::eval {

// Labels are 0 (normal) or 1 (anomalous); both classes must be present.
// Higher scores mean "more anomalous".

// Rank statistic; tied pairs earn half credit.
double RocAuc(std::span<const double> scores, std::span<const int> labels);

// Sum over distinct descending thresholds of (R_k - R_{k-1}) * P_k.
double AveragePrecision(std::span<const double> scores,
                        std::span<const int> labels);

struct RocPoint {
  double fpr = 0;
  double tpr = 0;
  bool operator==(const RocPoint&) const = default;
};

// (0,0), one point per distinct threshold, ending at (1,1).
std::vector<RocPoint> RocCurve(std::span<const double> scores,
                               std::span<const int> labels);

double TrapezoidArea(std::span<const RocPoint> points);

struct Aggregate {
  double mean = 0;
  double std = 0;  // sample standard deviation; 0 for a single value
  std::size_t n = 0;
};

Aggregate Summarize(std::span<const double> values);

// Two decimals without the leading zero: ".98±.00", "1.0±.00".
std::string FormatTableCell(double mean, double std);
std::string FormatTableCell(const Aggregate& a);

}  // namespace a3::eval

#endif  // A3_METRICS_H_
