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

#include "absa/metrics.h"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include <boost/math/distributions/students_t.hpp>

#include "absa/errors.h"

namespace absa {
namespace {

double Ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::unordered_map<std::string, const TaskPrediction*> IndexById(
    std::span<const TaskPrediction> preds, const char* side) {
  std::unordered_map<std::string, const TaskPrediction*> index;
  index.reserve(preds.size());
  for (const TaskPrediction& p : preds) {
    if (!index.emplace(p.example_id, &p).second) {
      throw ValidationError(std::string("duplicate example id '") +
                            p.example_id + "' in " + side);
    }
  }
  return index;
}

// Pairs gold and predicted examples by id.
template <typename Fn>
void ForEachAligned(std::span<const TaskPrediction> gold,
                    std::span<const TaskPrediction> pred, Fn&& fn) {
  if (gold.size() != pred.size()) {
    throw ValidationError("gold has " + std::to_string(gold.size()) +
                          " examples but predictions have " +
                          std::to_string(pred.size()));
  }
  const auto pred_index = IndexById(pred, "predictions");
  IndexById(gold, "gold");
  for (const TaskPrediction& g : gold) {
    auto it = pred_index.find(g.example_id);
    if (it == pred_index.end()) {
      throw ValidationError("no prediction for example id '" + g.example_id +
                            "'");
    }
    fn(g, *it->second);
  }
}

}  // namespace

double MicroCounts::Precision() const { return Ratio(tp, tp + fp); }
double MicroCounts::Recall() const { return Ratio(tp, tp + fn); }

double MicroCounts::F1() const {
  const double p = Precision();
  const double r = Recall();
  return p + r > 0 ? 2 * p * r / (p + r) : 0.0;
}

MicroCounts CountItems(const std::set<TaskItem>& gold,
                       const std::set<TaskItem>& pred) {
  MicroCounts c;
  for (const TaskItem& item : pred) {
    if (gold.count(item)) {
      ++c.tp;
    } else {
      ++c.fp;
    }
  }
  c.fn = gold.size() - c.tp;
  return c;
}

MicroScore MicroF1(std::span<const TaskPrediction> gold,
                   std::span<const TaskPrediction> pred) {
  MicroCounts total;
  ForEachAligned(gold, pred, [&](const TaskPrediction& g,
                                 const TaskPrediction& p) {
    total += CountItems(g.items, p.items);
  });
  return {total.Precision(), total.Recall(), total.F1(), total};
}

double Accuracy(std::span<const Polarity> gold,
                std::span<const Polarity> pred) {
  if (gold.size() != pred.size()) {
    throw ValidationError("accuracy needs equal lengths (gold " +
                          std::to_string(gold.size()) + ", predictions " +
                          std::to_string(pred.size()) + ")");
  }
  if (gold.empty()) throw ValidationError("accuracy over no examples");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] == pred[i]) ++correct;
  }
  return Ratio(correct, gold.size());
}

double Accuracy(std::span<const TaskPrediction> gold,
                std::span<const TaskPrediction> pred) {
  if (gold.empty()) throw ValidationError("accuracy over no examples");
  std::size_t correct = 0;
  ForEachAligned(gold, pred, [&](const TaskPrediction& g,
                                 const TaskPrediction& p) {
    if (g.items == p.items) ++correct;
  });
  return Ratio(correct, gold.size());
}

double StudentTQuantile(double probability, double degrees_of_freedom) {
  boost::math::students_t dist(degrees_of_freedom);
  return boost::math::quantile(dist, probability);
}

MetricReport AggregateSeeds(Task task, std::span<const double> scores,
                            std::size_t n_expected) {
  if (scores.empty()) throw ValidationError("no seed scores to aggregate");
  MetricReport r;
  r.task = task;
  r.per_seed.assign(scores.begin(), scores.end());
  const auto n = static_cast<double>(scores.size());
  r.mean = std::accumulate(scores.begin(), scores.end(), 0.0) / n;
  r.seed_count_mismatch = scores.size() != n_expected;
  if (scores.size() == 1) {
    r.single_seed = true;
    return r;
  }
  double ss = 0;
  for (double s : scores) ss += (s - r.mean) * (s - r.mean);
  const double sd = std::sqrt(ss / (n - 1));
  r.ci95_halfwidth = StudentTQuantile(0.975, n - 1) * sd / std::sqrt(n);
  return r;
}

std::string FormatCell(const MetricReport& report) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f±%.1f", 100.0 * report.mean,
                100.0 * report.ci95_halfwidth);
  return buf;
}

namespace {

std::vector<Task> Columns(std::span<const ReportRow> rows) {
  std::set<Task> tasks;
  for (const ReportRow& row : rows) {
    for (const auto& [task, _] : row.cells) tasks.insert(task);
  }
  return {tasks.begin(), tasks.end()};
}

}  // namespace

void WriteReportTsv(std::ostream& out, std::span<const ReportRow> rows) {
  const std::vector<Task> columns = Columns(rows);
  out << "setting";
  for (Task t : columns) {
    std::string name(TaskName(t));
    for (char& c : name) c = static_cast<char>(std::toupper(c));
    out << '\t' << name;
  }
  out << '\n';
  for (const ReportRow& row : rows) {
    out << row.setting;
    for (Task t : columns) {
      auto it = row.cells.find(t);
      out << '\t' << (it == row.cells.end() ? "-" : FormatCell(it->second));
    }
    out << '\n';
  }
}

nlohmann::json ReportToJson(std::span<const ReportRow> rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const ReportRow& row : rows) {
    nlohmann::json cells = nlohmann::json::object();
    for (const auto& [task, r] : row.cells) {
      cells[std::string(TaskName(task))] = {
          {"per_seed", r.per_seed},
          {"mean", r.mean},
          {"ci95_halfwidth", r.ci95_halfwidth},
          {"cell", FormatCell(r)},
          {"single_seed", r.single_seed},
          {"seed_count_mismatch", r.seed_count_mismatch},
      };
    }
    out.push_back({{"setting", row.setting}, {"cells", std::move(cells)}});
  }
  return out;
}

}  // namespace absa
