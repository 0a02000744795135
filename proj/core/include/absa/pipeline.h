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

#ifndef ABSA_PIPELINE_H_
#define ABSA_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "absa/backend.h"
#include "absa/config.h"
#include "absa/corpus.h"
#include "absa/metrics.h"
#include "absa/parsing.h"
#include "absa/prompting.h"
#include "absa/types.h"

// End-to-end experiment protocol: ingest, split, render, predict, parse,
// project, score and report. The command line tool is a thin shell over it.
namespace absa {

// "gold", "corrupt:<rate>" or "http:<url>".
struct BackendSpec {
  enum class Kind { kGold, kCorrupt, kHttp };

  Kind kind = Kind::kGold;
  double rate = 0;
  std::string url;

  static BackendSpec Parse(std::string_view spec);
  std::string Describe() const;
};

// Tuple tasks share one generated output per sentence.
enum class TaskFamily { kTuple, kApd, kSc };

TaskFamily FamilyOf(Task task);
std::string_view FamilyName(TaskFamily family);  // "tuple", "apd", "sc"

using Corpus =
    std::variant<std::vector<AbsaSentence>, std::vector<PolarityDocument>>;

// .xml is ABSA XML, .tsv is polarity TSV, .jsonl holds either record kind.
// ABSA categories are checked against `allowed`, or accepted as observed
// when `allowed` is nullopt.
Corpus LoadCorpus(const std::filesystem::path& path,
                  const std::optional<CategorySet>& allowed);

// Configured categories, else those observed in `train`, else in `test`.
CategorySet ResolveCategories(
    const ToolkitConfig& config,
    const std::optional<std::filesystem::path>& train,
    const std::optional<std::filesystem::path>& test);

std::size_t CorpusSize(const Corpus& corpus);
Corpus SplitCorpus(const Corpus& corpus, const SplitSpec& spec);
void WriteCorpusJsonl(std::ostream& out, const Corpus& corpus);

struct CorpusStats {
  std::size_t records = 0;
  std::size_t triplets = 0;
  std::map<Polarity, std::size_t> polarities;  // labels or triplet polarities
};
CorpusStats ComputeStats(const Corpus& corpus);
nlohmann::json StatsToJson(const CorpusStats& stats);

// Rendered inputs, backend requests and gold projections for one task family
// under one regime.
class EvalSet {
 public:
  EvalSet(TaskFamily family, const Corpus& corpus, Regime regime,
          const ToolkitConfig& config, const CategorySet& allowed,
          std::size_t max_new_units = 512);

  TaskFamily family() const { return family_; }
  Regime regime() const { return regime_; }
  const GoldStore& store() const { return store_; }
  const std::vector<PromptRendering>& renderings() const { return renderings_; }
  const std::vector<BackendRequest>& requests() const { return requests_; }
  // Gold projection for a task of this family.
  std::vector<TaskPrediction> Gold(Task task) const;

 private:
  TaskFamily family_;
  Regime regime_;
  GoldStore store_;
  std::vector<PromptRendering> renderings_;
  std::vector<BackendRequest> requests_;
  std::vector<AbsaSentence> sentences_;
  std::vector<ClassificationExample> examples_;
};

// Renders a corpus for one family without building requests (training files).
std::vector<PromptRendering> RenderCorpus(TaskFamily family,
                                          const Corpus& corpus, Regime regime,
                                          const ToolkitConfig& config,
                                          const CategorySet& allowed);

// Raw backend answer for one example.
struct RawPrediction {
  std::string example_id;
  std::string output;
  std::string chosen;
  std::map<std::string, double> scores;
};
void to_json(nlohmann::json& j, const RawPrediction& p);
void from_json(const nlohmann::json& j, RawPrediction& p);

struct HttpSettings {
  int timeout_ms = 30000;
  int max_retries = 2;
};

std::unique_ptr<Backend> MakeBackend(const BackendSpec& spec,
                                     const GoldStore& store, std::uint64_t seed,
                                     const HttpSettings& http = {});

std::vector<RawPrediction> Predict(const EvalSet& eval, const Backend& backend,
                                   std::size_t max_in_flight = 8);

struct TaskScore {
  Task task = Task::kTasd;
  // Micro F1 for tuple tasks, accuracy for APD and SC.
  double score = 0;
  std::optional<MicroScore> micro;
  std::size_t examples = 0;
  std::size_t dropped = 0;
  std::vector<TaskPrediction> predictions;
};
nlohmann::json ScoreToJson(const TaskScore& score);

// Parses every raw prediction, projects it onto `task` and scores it against
// the gold projection. Throws ValidationError when ids do not line up.
TaskScore ScoreTask(const EvalSet& eval, Task task,
                    std::span<const RawPrediction> raw);

struct ExperimentConfig {
  ToolkitConfig toolkit;
  std::optional<std::filesystem::path> absa_train;
  std::optional<std::filesystem::path> absa_test;
  std::optional<std::filesystem::path> polarity_train;
  std::optional<std::filesystem::path> polarity_test;
  std::vector<Task> tasks;
  Regime regime = Regime::kTraditional;
  SplitSpec split = SplitSpec::Full();
  std::optional<double> val_frac;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  BackendSpec backend;
  std::filesystem::path out_dir = "out";
  // Report row label; derived from regime and split when empty.
  std::string setting;
  std::size_t max_in_flight = 8;
  std::size_t max_new_units = 512;
  HttpSettings http;
};

// Reads the [experiment] section; relative paths resolve against base_dir.
ExperimentConfig ExperimentFromConfig(const ToolkitConfig& config,
                                      const std::filesystem::path& base_dir);

// Throws ValidationError for missing inputs or task/regime mismatches.
void ValidateExperiment(const ExperimentConfig& experiment);

std::vector<std::uint64_t> ParseSeedList(std::string_view list);
std::string SettingLabel(const ExperimentConfig& experiment);

// Runs the whole protocol into experiment.out_dir and returns the report
// rows. Progress lines go to `log` when given.
std::vector<ReportRow> RunAll(const ExperimentConfig& experiment,
                              std::ostream* log = nullptr);

// Aggregates per-seed scores of finished runs, one row per run directory.
std::vector<ReportRow> ReportFromRuns(
    std::span<const std::filesystem::path> run_dirs);

std::string Sha256Hex(std::string_view bytes);
std::string Sha256File(const std::filesystem::path& path);

}  // namespace absa

#endif  // ABSA_PIPELINE_H_
