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

// absa-promptkit: command line front end for the experiment protocol.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "absa/config.h"
#include "absa/corpus.h"
#include "absa/errors.h"
#include "absa/pipeline.h"
#include "absa/serialization.h"
#include "absa/text.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string config;
  std::string input;
  std::string train;
  std::string out;
  std::string tasks;
  std::string regime;
  std::size_t few_shot = 0;
  bool zero_shot = false;
  std::string seeds;
  std::string backend;
  std::string predictions;
  std::vector<std::string> runs;
  std::optional<double> val_frac;
  std::string raw;
  std::vector<std::string> annotated;
  std::string setting;
  std::size_t max_in_flight = 0;
  std::string absa_train, absa_test, polarity_train, polarity_test;
};

std::optional<fs::path> ConfigPath(const Options& o) {
  if (!o.config.empty()) return fs::path(o.config);
  if (const char* env = std::getenv("ABSA_PROMPTKIT_CONFIG"); env && *env) {
    return fs::path(env);
  }
  return std::nullopt;
}

absa::ToolkitConfig LoadConfig(const Options& o) {
  const auto path = ConfigPath(o);
  if (!path) return {};
  if (!fs::exists(*path)) {
    throw absa::ValidationError("config file " + path->string() +
                                " does not exist");
  }
  return absa::LoadToolkitConfig(*path);
}

std::vector<absa::Task> ParseTasks(const std::string& list) {
  std::string s = list;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::vector<absa::Task> tasks;
  for (std::string_view t : absa::text::SplitWords(s)) {
    tasks.push_back(absa::ParseTask(t));
  }
  return tasks;
}

absa::Task SingleTask(const Options& o) {
  if (o.tasks.empty()) throw absa::ValidationError("--task is required");
  const auto tasks = ParseTasks(o.tasks);
  if (tasks.size() != 1) {
    throw absa::ValidationError("this command takes a single --task");
  }
  return tasks.front();
}

absa::Regime RegimeOr(const Options& o, absa::Regime fallback) {
  return o.regime.empty() ? fallback : absa::ParseRegime(o.regime);
}

absa::SplitSpec SplitOf(const Options& o) {
  if (o.zero_shot && o.few_shot > 0) {
    throw absa::ValidationError("--few-shot and --zero-shot are exclusive");
  }
  if (o.zero_shot) return absa::SplitSpec::ZeroShot();
  if (o.few_shot > 0) return absa::SplitSpec::FewShot(o.few_shot);
  return absa::SplitSpec::Full();
}

fs::path RequireInput(const std::string& path, const std::string& flag) {
  if (path.empty()) throw absa::ValidationError(flag + " is required");
  if (!fs::exists(path)) {
    throw absa::ValidationError(flag + " " + path + " does not exist");
  }
  return path;
}

// Writes to --out when given, else to stdout.
template <typename F>
void Emit(const std::string& out, F&& write) {
  if (out.empty()) {
    write(std::cout);
    return;
  }
  const fs::path p(out);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw absa::Error("cannot write " + out);
  write(f);
}

absa::CategorySet CategoriesFor(const absa::ToolkitConfig& config,
                                const Options& o, const fs::path& input) {
  std::optional<fs::path> train;
  if (!o.train.empty()) train = RequireInput(o.train, "--train");
  return absa::ResolveCategories(config, train, input);
}

absa::EvalSet MakeEvalSet(const Options& o, const absa::ToolkitConfig& config,
                          absa::Task task) {
  const fs::path input = RequireInput(o.input, "--input");
  const absa::TaskFamily family = absa::FamilyOf(task);
  const absa::CategorySet allowed = family == absa::TaskFamily::kSc
                                        ? absa::CategorySet()
                                        : CategoriesFor(config, o, input);
  return absa::EvalSet(family, absa::LoadCorpus(input, allowed),
                       RegimeOr(o, absa::Regime::kTraditional), config,
                       allowed);
}

int CmdIngest(const Options& o) {
  const auto config = LoadConfig(o);
  const fs::path input = RequireInput(o.input, "--input");
  std::optional<absa::CategorySet> allowed;
  if (config.allowed_categories) allowed = config.allowed_categories;
  const absa::Corpus corpus = absa::LoadCorpus(input, allowed);
  Emit(o.out, [&](std::ostream& os) { absa::WriteCorpusJsonl(os, corpus); });
  std::cerr << absa::StatsToJson(absa::ComputeStats(corpus)).dump() << "\n";
  return 0;
}

int CmdSplit(const Options& o) {
  const auto config = LoadConfig(o);
  const fs::path input = RequireInput(o.input, "--input");
  absa::Corpus split =
      absa::SplitCorpus(absa::LoadCorpus(input, config.allowed_categories),
                        SplitOf(o));
  if (o.val_frac) {
    if (o.out.empty()) {
      throw absa::ValidationError("--val-frac needs --out for the split file");
    }
    absa::Corpus validation;
    std::visit(
        [&](auto& v) {
          auto held = absa::HoldOutTail(std::move(v), *o.val_frac);
          v = std::move(held.train);
          validation = std::move(held.validation);
        },
        split);
    fs::path val_path(o.out);
    val_path.replace_extension(".validation.jsonl");
    Emit(val_path.string(),
         [&](std::ostream& os) { absa::WriteCorpusJsonl(os, validation); });
  }
  Emit(o.out, [&](std::ostream& os) { absa::WriteCorpusJsonl(os, split); });
  std::cerr << "split: " << absa::CorpusSize(split) << " records ("
            << SplitOf(o).Describe() << ")\n";
  return 0;
}

int CmdRender(const Options& o) {
  const auto config = LoadConfig(o);
  const absa::EvalSet eval = MakeEvalSet(o, config, SingleTask(o));
  Emit(o.out, [&](std::ostream& os) { absa::WriteJsonl(os, eval.renderings()); });
  return 0;
}

int CmdPredict(const Options& o) {
  const auto config = LoadConfig(o);
  const absa::Task task = SingleTask(o);
  const absa::EvalSet eval = MakeEvalSet(o, config, task);
  const absa::BackendSpec spec =
      absa::BackendSpec::Parse(o.backend.empty() ? "gold" : o.backend);
  const auto seeds = o.seeds.empty() ? std::vector<std::uint64_t>{1}
                                     : absa::ParseSeedList(o.seeds);
  if (o.out.empty()) throw absa::ValidationError("--out <dir> is required");
  const std::string fam(absa::FamilyName(eval.family()));
  for (std::uint64_t seed : seeds) {
    const auto backend = absa::MakeBackend(spec, eval.store(), seed);
    const auto raw =
        absa::Predict(eval, *backend, o.max_in_flight ? o.max_in_flight : 8);
    const fs::path path =
        fs::path(o.out) / ("seed-" + std::to_string(seed)) /
        ("predictions." + fam + ".jsonl");
    Emit(path.string(), [&](std::ostream& os) { absa::WriteJsonl(os, raw); });
    std::cerr << "wrote " << raw.size() << " predictions to " << path.string()
              << "\n";
  }
  return 0;
}

int CmdScore(const Options& o) {
  const auto config = LoadConfig(o);
  const auto tasks = ParseTasks(o.tasks);
  if (tasks.empty()) throw absa::ValidationError("--task is required");
  const absa::EvalSet eval = MakeEvalSet(o, config, tasks.front());
  const auto raw = absa::ReadJsonlAs<absa::RawPrediction>(
      RequireInput(o.predictions, "--predictions"));
  json scores = json::object();
  for (absa::Task task : tasks) {
    const absa::TaskScore score = absa::ScoreTask(eval, task, raw);
    scores[std::string(absa::TaskName(task))] = absa::ScoreToJson(score);
  }
  Emit(o.out, [&](std::ostream& os) { os << scores.dump(2) << "\n"; });
  return 0;
}

int CmdReport(const Options& o) {
  if (o.runs.empty()) throw absa::ValidationError("--runs <dir>... is required");
  std::vector<fs::path> dirs;
  for (const std::string& r : o.runs) dirs.push_back(RequireInput(r, "--runs"));
  const auto rows = absa::ReportFromRuns(dirs);
  absa::WriteReportTsv(std::cout, rows);
  if (!o.out.empty()) {
    Emit((fs::path(o.out) / "report.tsv").string(),
         [&](std::ostream& os) { absa::WriteReportTsv(os, rows); });
    Emit((fs::path(o.out) / "report.json").string(), [&](std::ostream& os) {
      os << absa::ReportToJson(rows).dump(2) << "\n";
    });
  }
  return 0;
}

int CmdRunAll(const Options& o) {
  const auto config_path = ConfigPath(o);
  const absa::ToolkitConfig config = LoadConfig(o);
  const fs::path base =
      config_path ? config_path->parent_path() : fs::current_path();
  absa::ExperimentConfig e = absa::ExperimentFromConfig(config, base);
  if (!o.tasks.empty()) e.tasks = ParseTasks(o.tasks);
  if (!o.regime.empty()) e.regime = absa::ParseRegime(o.regime);
  if (o.zero_shot || o.few_shot > 0) e.split = SplitOf(o);
  if (o.val_frac) e.val_frac = o.val_frac;
  if (!o.seeds.empty()) e.seeds = absa::ParseSeedList(o.seeds);
  if (!o.backend.empty()) e.backend = absa::BackendSpec::Parse(o.backend);
  if (!o.out.empty()) e.out_dir = o.out;
  if (!o.setting.empty()) e.setting = o.setting;
  if (o.max_in_flight > 0) e.max_in_flight = o.max_in_flight;
  if (!o.absa_train.empty()) e.absa_train = fs::path(o.absa_train);
  if (!o.absa_test.empty()) e.absa_test = fs::path(o.absa_test);
  if (!o.polarity_train.empty()) e.polarity_train = fs::path(o.polarity_train);
  if (!o.polarity_test.empty()) e.polarity_test = fs::path(o.polarity_test);
  const auto rows = absa::RunAll(e, &std::cerr);
  absa::WriteReportTsv(std::cout, rows);
  return 0;
}

int CmdDedup(const Options& o) {
  const fs::path raw_path = RequireInput(o.raw, "--raw");
  std::vector<std::string> annotated;
  for (const std::string& a : o.annotated) {
    const fs::path path = RequireInput(a, "--annotated");
    const std::string ext = absa::text::ToLower(path.extension().string());
    if (ext == ".txt") {
      std::ifstream in(path);
      for (std::string line; std::getline(in, line);) annotated.push_back(line);
      continue;
    }
    std::visit(
        [&](const auto& records) {
          for (const auto& r : records) annotated.push_back(r.text);
        },
        absa::LoadCorpus(path, std::nullopt));
  }
  const absa::DedupFilter filter(annotated);
  std::ifstream raw(raw_path, std::ios::binary);
  absa::DedupStats stats;
  Emit(o.out, [&](std::ostream& os) {
    stats = absa::DedupStream(raw, os, filter);
  });
  std::cerr << "read " << stats.read << ", kept " << stats.kept << ", removed "
            << stats.removed << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prompt construction, output parsing and evaluation for ABSA "
               "and sentiment classification"};
  app.require_subcommand(1);
  Options o;

  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", o.config,
                    "INI config (falls back to $ABSA_PROMPTKIT_CONFIG)");
  };
  auto add_task = [&](CLI::App* cmd) {
    cmd->add_option("--task", o.tasks, "acd|ate|acte|tasd|apd|sc");
    cmd->add_option("--regime", o.regime, "traditional|sentinel|mask|mlm");
    cmd->add_option("--train", o.train,
                    "training corpus used to derive the category set");
  };
  auto add_split = [&](CLI::App* cmd) {
    cmd->add_option("--few-shot", o.few_shot, "first N training records")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--zero-shot", o.zero_shot, "no training records");
    cmd->add_option("--val-frac", o.val_frac,
                    "hold out this tail fraction as validation data")
        ->check(CLI::Range(0.0, 0.999999));
  };

  auto* ingest = app.add_subcommand("ingest", "validate a corpus, emit JSONL");
  add_config(ingest);
  ingest->add_option("--input", o.input, "ABSA XML, polarity TSV or JSONL");
  ingest->add_option("--out", o.out, "output JSONL (default stdout)");

  auto* split = app.add_subcommand("split", "write a full/few-shot/zero-shot split");
  add_config(split);
  add_split(split);
  split->add_option("--input", o.input, "training corpus");
  split->add_option("--out", o.out, "output JSONL (default stdout)");

  auto* render = app.add_subcommand("render", "render prompts and targets");
  add_config(render);
  add_task(render);
  render->add_option("--input", o.input, "corpus to render");
  render->add_option("--out", o.out, "output JSONL (default stdout)");

  auto* predict = app.add_subcommand("predict", "query a backend");
  add_config(predict);
  add_task(predict);
  predict->add_option("--input", o.input, "test corpus");
  predict->add_option("--backend", o.backend, "gold|corrupt:<d>|http:<url>");
  predict->add_option("--seeds", o.seeds, "comma separated seeds");
  predict->add_option("--max-in-flight", o.max_in_flight,
                      "concurrent backend requests");
  predict->add_option("--out", o.out, "run directory");

  auto* score = app.add_subcommand("score", "parse and score predictions");
  add_config(score);
  add_task(score);
  score->add_option("--input", o.input, "test corpus");
  score->add_option("--predictions", o.predictions, "predictions JSONL");
  score->add_option("--out", o.out, "scores JSON (default stdout)");

  auto* report = app.add_subcommand("report", "aggregate seeds into a table");
  report->add_option("--runs", o.runs, "run directories, one row each");
  report->add_option("--out", o.out, "directory for report.tsv/report.json");

  auto* run_all = app.add_subcommand("run-all", "run the whole protocol");
  add_config(run_all);
  add_split(run_all);
  run_all->add_option("--task", o.tasks, "comma separated tasks");
  run_all->add_option("--regime", o.regime, "traditional|sentinel|mask|mlm");
  run_all->add_option("--seeds", o.seeds, "comma separated seeds");
  run_all->add_option("--backend", o.backend, "gold|corrupt:<d>|http:<url>");
  run_all->add_option("--out", o.out, "output directory");
  run_all->add_option("--setting", o.setting, "report row label");
  run_all->add_option("--max-in-flight", o.max_in_flight,
                      "concurrent backend requests");
  run_all->add_option("--absa-train", o.absa_train, "ABSA training corpus");
  run_all->add_option("--absa-test", o.absa_test, "ABSA test corpus");
  run_all->add_option("--polarity-train", o.polarity_train,
                      "polarity training corpus");
  run_all->add_option("--polarity-test", o.polarity_test,
                      "polarity test corpus");

  auto* dedup = app.add_subcommand("dedup", "drop annotated reviews from a raw corpus");
  dedup->add_option("--raw", o.raw, "one review per line");
  dedup->add_option("--annotated", o.annotated,
                    "annotated corpora (.xml, .tsv, .jsonl or .txt)");
  dedup->add_option("--out", o.out, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) return CmdIngest(o);
    if (*split) return CmdSplit(o);
    if (*render) return CmdRender(o);
    if (*predict) return CmdPredict(o);
    if (*score) return CmdScore(o);
    if (*report) return CmdReport(o);
    if (*run_all) return CmdRunAll(o);
    if (*dedup) return CmdDedup(o);
  } catch (const absa::ParseError& e) {
    std::cerr << "error: malformed input: " << e.what() << "\n";
    return 3;
  } catch (const absa::TransportError& e) {
    std::cerr << "error: backend: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
