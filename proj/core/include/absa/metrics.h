// Copyright 2026 The absa-promptkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ABSA_METRICS_H_
#define ABSA_METRICS_H_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "absa/parsing.h"
#include "absa/types.h"

namespace absa {

struct MicroCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  MicroCounts& operator+=(const MicroCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend MicroCounts operator+(MicroCounts a, const MicroCounts& b) {
    return a += b;
  }
  bool operator==(const MicroCounts&) const = default;

  // Each is 0 when its denominator is 0.
  double Precision() const;
  double Recall() const;
  double F1() const;
};

struct MicroScore {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  MicroCounts counts;
};

MicroCounts CountItems(const std::set<TaskItem>& gold,
                       const std::set<TaskItem>& pred);

// Pools counts over examples matched by id. Throws ValidationError when the
// two sides do not cover the same ids or an id repeats.
MicroScore MicroF1(std::span<const TaskPrediction> gold,
                   std::span<const TaskPrediction> pred);

// Throws ValidationError on length mismatch or empty input.
double Accuracy(std::span<const Polarity> gold, std::span<const Polarity> pred);
// By example id; an example is correct when the item sets are equal.
double Accuracy(std::span<const TaskPrediction> gold,
                std::span<const TaskPrediction> pred);

// Quantile of Student's t distribution.
double StudentTQuantile(double probability, double degrees_of_freedom);

struct MetricReport {
  Task task = Task::kTasd;
  std::vector<double> per_seed;
  double mean = 0;
  double ci95_halfwidth = 0;
  // Set when only one score was given; the half-width is then 0.
  bool single_seed = false;
  // Set when per_seed.size() differs from the expected seed count.
  bool seed_count_mismatch = false;
};

// Mean and t(0.975, n-1) * s / sqrt(n) over per-seed scores.
MetricReport AggregateSeeds(Task task, std::span<const double> scores,
                            std::size_t n_expected = 5);

// "84.0±3.9": percent, one decimal.
std::string FormatCell(const MetricReport& report);

struct ReportRow {
  std::string setting;
  std::map<Task, MetricReport> cells;
};

// Rows are settings, columns are tasks; missing cells are "-".
void WriteReportTsv(std::ostream& out, std::span<const ReportRow> rows);
nlohmann::json ReportToJson(std::span<const ReportRow> rows);

}  // namespace absa

#endif  // ABSA_METRICS_H_
