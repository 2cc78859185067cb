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

#include "a3/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "a3/error.h"

namespace a3::eval {
namespace {

struct Counts {
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

Counts Validate(std::span<const double> scores, std::span<const int> labels,
                const char* where) {
  if (scores.size() != labels.size()) {
    throw DimensionError(where, std::to_string(scores.size()) + " labels",
                         std::to_string(labels.size()));
  }
  Counts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1) {
      ++c.positives;
    } else if (labels[i] == 0) {
      ++c.negatives;
    } else {
      throw InvalidArgument(std::string(where) + ": labels must be 0 or 1");
    }
    if (!std::isfinite(scores[i])) {
      throw InvalidArgument(std::string(where) + ": non-finite score");
    }
  }
  if (c.positives == 0 || c.negatives == 0) {
    throw InvalidArgument(std::string(where) +
                          ": both classes must be present");
  }
  return c;
}

std::vector<std::size_t> DescendingOrder(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  return order;
}

// Cumulative (fp, tp) after each distinct-threshold group, descending.
template <typename Fn>
void SweepThresholds(std::span<const double> scores,
                     std::span<const int> labels, Fn&& fn) {
  const std::vector<std::size_t> order = DescendingOrder(scores);
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (labels[order[i]] == 1) {
      ++tp;
    } else {
      ++fp;
    }
    if (i + 1 == order.size() || scores[order[i + 1]] != scores[order[i]]) {
      fn(fp, tp);
    }
  }
}

}  // namespace

double RocAuc(std::span<const double> scores, std::span<const int> labels) {
  const Counts c = Validate(scores, labels, "RocAuc");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });
  // Mid-ranks of tied groups give each tied positive/negative pair 1/2.
  double positive_rank_sum = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) positive_rank_sum += mid_rank;
    }
    i = j;
  }
  const double p = static_cast<double>(c.positives);
  const double n = static_cast<double>(c.negatives);
  return (positive_rank_sum - p * (p + 1) / 2) / (p * n);
}

double AveragePrecision(std::span<const double> scores,
                        std::span<const int> labels) {
  const Counts c = Validate(scores, labels, "AveragePrecision");
  const double p = static_cast<double>(c.positives);
  double ap = 0;
  double prev_recall = 0;
  SweepThresholds(scores, labels, [&](std::size_t fp, std::size_t tp) {
    const double recall = static_cast<double>(tp) / p;
    const double precision =
        static_cast<double>(tp) / static_cast<double>(tp + fp);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
  });
  return ap;
}

std::vector<RocPoint> RocCurve(std::span<const double> scores,
                               std::span<const int> labels) {
  const Counts c = Validate(scores, labels, "RocCurve");
  std::vector<RocPoint> points = {{0.0, 0.0}};
  SweepThresholds(scores, labels, [&](std::size_t fp, std::size_t tp) {
    points.push_back({static_cast<double>(fp) / static_cast<double>(c.negatives),
                      static_cast<double>(tp) / static_cast<double>(c.positives)});
  });
  return points;
}

double TrapezoidArea(std::span<const RocPoint> points) {
  double area = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    area += (points[i].fpr - points[i - 1].fpr) *
            (points[i].tpr + points[i - 1].tpr) / 2;
  }
  return area;
}

Aggregate Summarize(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("Summarize: no values");
  Aggregate a;
  a.n = values.size();
  a.mean = std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(a.n);
  // One refinement pass removes the rounding left by the plain sum.
  double residual = 0;
  for (double v : values) residual += v - a.mean;
  a.mean += residual / static_cast<double>(a.n);
  if (a.n > 1) {
    double ss = 0;
    for (double v : values) ss += (v - a.mean) * (v - a.mean);
    a.std = std::sqrt(ss / static_cast<double>(a.n - 1));
  }
  return a;
}

namespace {

std::string TwoDecimals(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  if (s == "1.00") return "1.0";
  if (s.starts_with("0.")) return s.substr(1);
  if (s.starts_with("-0.")) return "-" + s.substr(2);
  return s;
}

}  // namespace

std::string FormatTableCell(double mean, double std) {
  return TwoDecimals(mean) + "±" + TwoDecimals(std);
}

std::string FormatTableCell(const Aggregate& a) {
  return FormatTableCell(a.mean, a.std);
}

}  // namespace a3::eval
