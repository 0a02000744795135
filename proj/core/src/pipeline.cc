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

#include "absa/pipeline.h"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "absa/errors.h"
#include "absa/serialization.h"
#include "absa/text.h"

namespace absa {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string Lower(std::string_view s) { return text::ToLower(text::Trim(s)); }

std::ofstream CreateFile(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void WriteJsonFile(const fs::path& path, const json& j) {
  auto out = CreateFile(path);
  out << j.dump(2) << '\n';
}

json ReadJsonFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

template <typename T>
void WriteJsonlFile(const fs::path& path, const std::vector<T>& records) {
  auto out = CreateFile(path);
  WriteJsonl(out, records);
}

void CheckCategories(const std::vector<AbsaSentence>& sentences,
                     const CategorySet& allowed) {
  for (const AbsaSentence& s : sentences) {
    for (const OpinionTriplet& t : s.triplets) {
      if (!allowed.contains(t.category)) {
        throw ValidationError("sentence '" + s.sentence_id + "': category '" +
                              t.category.canonical() +
                              "' is not in the allowed category set");
      }
    }
  }
}

CategorySet ObservedIn(const Corpus& corpus) {
  CategorySet set;
  if (const auto* absa = std::get_if<std::vector<AbsaSentence>>(&corpus)) {
    for (const AbsaSentence& s : *absa) {
      for (const OpinionTriplet& t : s.triplets) set.insert(t.category);
    }
  }
  return set;
}

const std::vector<AbsaSentence>& AbsaOf(const Corpus& corpus,
                                        TaskFamily family) {
  const auto* absa = std::get_if<std::vector<AbsaSentence>>(&corpus);
  if (absa == nullptr) {
    throw ValidationError(std::string(FamilyName(family)) +
                          " tasks need an ABSA corpus, got polarity documents");
  }
  return *absa;
}

const std::vector<PolarityDocument>& DocumentsOf(const Corpus& corpus) {
  const auto* docs = std::get_if<std::vector<PolarityDocument>>(&corpus);
  if (docs == nullptr) {
    throw ValidationError("sc needs a polarity corpus, got ABSA sentences");
  }
  return *docs;
}

void CheckRegime(TaskFamily family, Regime regime) {
  const bool seq2seq = regime == Regime::kTraditional ||
                       regime == Regime::kSentinel || regime == Regime::kMask;
  const bool classification =
      regime == Regime::kTraditional || regime == Regime::kMlm;
  if (family == TaskFamily::kTuple ? !seq2seq : !classification) {
    throw ValidationError(
        std::string(FamilyName(family)) + " tasks do not support the " +
        std::string(RegimeName(regime)) + " regime" +
        (family == TaskFamily::kTuple
             ? " (use traditional, sentinel or mask)"
             : " (use traditional or mlm)"));
  }
}

// Template settings for a family; SC renders no categories.
TemplateConfig FamilyTemplate(TaskFamily family, Regime regime,
                              const ToolkitConfig& config,
                              const CategorySet& allowed) {
  return MakeTemplateConfig(config, regime,
                            family == TaskFamily::kSc ? CategorySet() : allowed);
}

std::vector<ClassificationExample> ClassificationExamples(
    TaskFamily family, const Corpus& corpus) {
  if (family == TaskFamily::kApd) return ApdExamples(AbsaOf(corpus, family));
  return ScExamples(DocumentsOf(corpus));
}

Task ClassificationTask(TaskFamily family) {
  return family == TaskFamily::kApd ? Task::kApd : Task::kSc;
}

std::optional<fs::path> ResolvePath(const std::map<std::string, std::string>& kv,
                                    const std::string& key,
                                    const fs::path& base) {
  auto it = kv.find(key);
  if (it == kv.end() || text::Trim(it->second).empty()) return std::nullopt;
  fs::path p(std::string(text::Trim(it->second)));
  return p.is_absolute() ? p : base / p;
}

std::size_t ParseCount(const std::string& v, const std::string& key) {
  std::size_t used = 0;
  long long n = -1;
  try {
    n = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || n <= 0) {
    throw ValidationError(key + ": expected a positive integer, got '" + v +
                          "'");
  }
  return static_cast<std::size_t>(n);
}

double ParseDouble(const std::string& v, const std::string& key) {
  std::size_t used = 0;
  double d = 0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size()) {
    throw ValidationError(key + ": expected a number, got '" + v + "'");
  }
  return d;
}

std::vector<TaskFamily> FamiliesOf(const std::vector<Task>& tasks) {
  std::set<TaskFamily> families;
  for (Task t : tasks) families.insert(FamilyOf(t));
  return {families.begin(), families.end()};
}

json EffectiveConfig(const ExperimentConfig& e) {
  const ToolkitConfig& t = e.toolkit;
  json tasks = json::array();
  for (Task task : e.tasks) tasks.push_back(TaskName(task));
  auto verbalizer = [](const Verbalizer& v) {
    json j;
    for (Polarity p : kPolarities) j[std::string(PolarityName(p))] = v.Word(p);
    return j;
  };
  auto names = [](const std::map<AspectCategory, std::string>& m) {
    json j = json::object();
    for (const auto& [c, n] : m) j[c.canonical()] = n;
    return j;
  };
  json categories = nullptr;
  if (t.allowed_categories) {
    categories = json::array();
    for (const AspectCategory& c : *t.allowed_categories) {
      categories.push_back(c.canonical());
    }
  }
  return {
      {"tasks", tasks},
      {"regime", RegimeName(e.regime)},
      {"split", e.split.Describe()},
      {"val_frac", e.val_frac ? json(*e.val_frac) : json(nullptr)},
      {"seeds", e.seeds},
      {"backend", e.backend.Describe()},
      {"max_new_units", e.max_new_units},
      {"language", LanguageName(t.seq2seq_language)},
      {"mlm_language", LanguageName(t.mlm_language)},
      {"separator", t.separator},
      {"triplet_joiner", t.triplet_joiner},
      {"max_input_units", t.max_input_units},
      {"mlm_trailing_period", t.mlm_trailing_period},
      {"seq2seq_verbalizer", verbalizer(t.seq2seq_verbalizer)},
      {"mlm_verbalizer", verbalizer(t.mlm_verbalizer)},
      {"categories", categories},
      {"category_names_en", names(t.names_en)},
      {"category_names_cs", names(t.names_cs)},
  };
}

}  // namespace

BackendSpec BackendSpec::Parse(std::string_view spec) {
  const std::string s(text::Trim(spec));
  BackendSpec b;
  if (s == "gold") return b;
  if (s.rfind("corrupt:", 0) == 0) {
    b.kind = Kind::kCorrupt;
    b.rate = ParseDouble(s.substr(8), "--backend corrupt rate");
    if (!(b.rate >= 0.0 && b.rate <= 1.0)) {
      throw ValidationError("corruption rate must be in [0, 1]");
    }
    return b;
  }
  if (s.rfind("http://", 0) == 0 || s.rfind("https://", 0) == 0) {
    b.kind = Kind::kHttp;
    b.url = s;
    return b;
  }
  if (s.rfind("http:", 0) == 0 && s.size() > 5) {
    b.kind = Kind::kHttp;
    b.url = s.substr(5);
    if (b.url.find("://") == std::string::npos) b.url = "http://" + b.url;
    return b;
  }
  throw ValidationError("unknown backend '" + s +
                        "' (expected gold, corrupt:<d> or http:<url>)");
}

std::string BackendSpec::Describe() const {
  switch (kind) {
    case Kind::kGold:
      return "gold";
    case Kind::kCorrupt: {
      std::ostringstream os;
      os << "corrupt:" << rate;
      return os.str();
    }
    case Kind::kHttp:
      return "http:" + url;
  }
  return "gold";
}

TaskFamily FamilyOf(Task task) {
  if (IsTupleTask(task)) return TaskFamily::kTuple;
  return task == Task::kApd ? TaskFamily::kApd : TaskFamily::kSc;
}

std::string_view FamilyName(TaskFamily family) {
  switch (family) {
    case TaskFamily::kTuple:
      return "tuple";
    case TaskFamily::kApd:
      return "apd";
    case TaskFamily::kSc:
      return "sc";
  }
  return "sc";
}

Corpus LoadCorpus(const fs::path& path,
                  const std::optional<CategorySet>& allowed) {
  const std::string ext = Lower(path.extension().string());
  if (ext == ".xml") {
    if (allowed) return LoadAbsaCorpus(path, *allowed);
    return LoadAbsaCorpus(path, ObservedCategories(path));
  }
  if (ext == ".tsv") return LoadPolarityCorpus(path);
  if (ext == ".jsonl") {
    const std::vector<json> records = ReadJsonlFile(path);
    if (!records.empty() && records.front().contains("label")) {
      std::vector<PolarityDocument> docs;
      for (const json& j : records) docs.push_back(j.get<PolarityDocument>());
      return docs;
    }
    std::vector<AbsaSentence> sentences;
    std::unordered_set<std::string> ids;
    for (const json& j : records) {
      sentences.push_back(j.get<AbsaSentence>());
      if (!ids.insert(sentences.back().sentence_id).second) {
        throw ValidationError("duplicate sentence id '" +
                              sentences.back().sentence_id + "' in " +
                              path.string());
      }
    }
    if (allowed) CheckCategories(sentences, *allowed);
    return sentences;
  }
  throw ValidationError("cannot tell the corpus format of " + path.string() +
                        " (expected .xml, .tsv or .jsonl)");
}

CategorySet ResolveCategories(const ToolkitConfig& config,
                              const std::optional<fs::path>& train,
                              const std::optional<fs::path>& test) {
  if (config.allowed_categories) return *config.allowed_categories;
  if (train) return ObservedIn(LoadCorpus(*train, std::nullopt));
  if (test) return ObservedIn(LoadCorpus(*test, std::nullopt));
  return {};
}

std::size_t CorpusSize(const Corpus& corpus) {
  return std::visit([](const auto& v) { return v.size(); }, corpus);
}

Corpus SplitCorpus(const Corpus& corpus, const SplitSpec& spec) {
  return std::visit(
      [&](const auto& v) -> Corpus {
        using T = typename std::decay_t<decltype(v)>::value_type;
        return MakeSplit<T>(std::span<const T>(v), spec);
      },
      corpus);
}

void WriteCorpusJsonl(std::ostream& out, const Corpus& corpus) {
  std::visit([&](const auto& v) { WriteJsonl(out, v); }, corpus);
}

CorpusStats ComputeStats(const Corpus& corpus) {
  CorpusStats stats;
  for (Polarity p : kPolarities) stats.polarities[p] = 0;
  stats.records = CorpusSize(corpus);
  if (const auto* absa = std::get_if<std::vector<AbsaSentence>>(&corpus)) {
    for (const AbsaSentence& s : *absa) {
      for (const OpinionTriplet& t : s.triplets) {
        ++stats.triplets;
        ++stats.polarities[t.polarity];
      }
    }
  } else {
    for (const PolarityDocument& d :
         std::get<std::vector<PolarityDocument>>(corpus)) {
      ++stats.polarities[d.label];
    }
  }
  return stats;
}

json StatsToJson(const CorpusStats& stats) {
  json j = {{"records", stats.records}, {"triplets", stats.triplets}};
  for (const auto& [p, n] : stats.polarities) j[std::string(PolarityName(p))] = n;
  return j;
}

EvalSet::EvalSet(TaskFamily family, const Corpus& corpus, Regime regime,
                 const ToolkitConfig& config, const CategorySet& allowed,
                 std::size_t max_new_units)
    : family_(family),
      regime_(regime),
      store_((CheckRegime(family, regime),
              FamilyTemplate(family, regime, config, allowed)),
             VerbalizerFor(config, regime)) {
  if (family == TaskFamily::kTuple) {
    sentences_ = AbsaOf(corpus, family);
    for (const AbsaSentence& s : sentences_) {
      const PromptRendering& r = store_.Add(s);
      renderings_.push_back(r);
      requests_.push_back(
          BackendRequest::Generate(r.example_id, r.model_input, max_new_units));
    }
    return;
  }
  examples_ = ClassificationExamples(family, corpus);
  const Task task = ClassificationTask(family);
  for (const ClassificationExample& e : examples_) {
    const PromptRendering& r = store_.Add(e, task);
    renderings_.push_back(r);
    if (regime == Regime::kMlm) {
      requests_.push_back(BackendRequest::FillMask(
          r.example_id, r.model_input, store_.verbalizer().Candidates()));
    } else {
      requests_.push_back(
          BackendRequest::Generate(r.example_id, r.model_input, max_new_units));
    }
  }
}

std::vector<TaskPrediction> EvalSet::Gold(Task task) const {
  if (FamilyOf(task) != family_) {
    throw ValidationError(std::string(TaskName(task)) +
                          " does not belong to the " +
                          std::string(FamilyName(family_)) + " family");
  }
  std::vector<TaskPrediction> gold;
  if (family_ == TaskFamily::kTuple) {
    for (const AbsaSentence& s : sentences_) {
      gold.push_back(ProjectTriplets(s.sentence_id, s.triplets, task));
    }
  } else {
    for (const ClassificationExample& e : examples_) {
      gold.push_back(PolarityPrediction(e.id, task, e.label));
    }
  }
  return gold;
}

std::vector<PromptRendering> RenderCorpus(TaskFamily family,
                                          const Corpus& corpus, Regime regime,
                                          const ToolkitConfig& config,
                                          const CategorySet& allowed) {
  CheckRegime(family, regime);
  const TemplateConfig cfg = FamilyTemplate(family, regime, config, allowed);
  const Verbalizer& v = VerbalizerFor(config, regime);
  std::vector<PromptRendering> out;
  if (family == TaskFamily::kTuple) {
    for (const AbsaSentence& s : AbsaOf(corpus, family)) {
      out.push_back(RenderSeq2Seq(s, cfg, v));
    }
    return out;
  }
  const Task task = ClassificationTask(family);
  for (const ClassificationExample& e : ClassificationExamples(family, corpus)) {
    out.push_back(RenderClassification(e, task, cfg, v));
  }
  return out;
}

void to_json(json& j, const RawPrediction& p) {
  j = {{"id", p.example_id}};
  if (p.chosen.empty()) {
    j["output"] = p.output;
  } else {
    j["chosen"] = p.chosen;
    j["scores"] = p.scores;
  }
}

void from_json(const json& j, RawPrediction& p) {
  p.example_id = j.at("id").get<std::string>();
  p.output = j.value("output", "");
  p.chosen = j.value("chosen", "");
  p.scores.clear();
  if (j.contains("scores")) {
    p.scores = j.at("scores").get<std::map<std::string, double>>();
  }
}

std::unique_ptr<Backend> MakeBackend(const BackendSpec& spec,
                                     const GoldStore& store,
                                     std::uint64_t seed,
                                     const HttpSettings& http) {
  switch (spec.kind) {
    case BackendSpec::Kind::kGold:
      return std::make_unique<GoldOracleBackend>(store);
    case BackendSpec::Kind::kCorrupt:
      return std::make_unique<CorruptionOracleBackend>(store, spec.rate, seed);
    case BackendSpec::Kind::kHttp: {
      HttpEndpoint endpoint;
      endpoint.base_url = spec.url;
      endpoint.timeout_ms = http.timeout_ms;
      endpoint.max_retries = http.max_retries;
      return std::make_unique<HttpBackend>(endpoint);
    }
  }
  return nullptr;
}

std::vector<RawPrediction> Predict(const EvalSet& eval, const Backend& backend,
                                   std::size_t max_in_flight) {
  const std::vector<BackendResponse> responses =
      RunRequests(backend, eval.requests(), max_in_flight);
  std::vector<RawPrediction> out;
  out.reserve(responses.size());
  for (std::size_t i = 0; i < responses.size(); ++i) {
    const BackendRequest& req = eval.requests()[i];
    RawPrediction p;
    p.example_id = req.example_id;
    if (req.kind == RequestKind::kFillMask) {
      p.chosen = responses[i].chosen;
      p.scores = responses[i].scores;
    } else {
      p.output = responses[i].output;
    }
    out.push_back(std::move(p));
  }
  return out;
}

json ScoreToJson(const TaskScore& s) {
  json j = {{"score", s.score}, {"examples", s.examples}, {"dropped", s.dropped}};
  if (s.micro) {
    j["precision"] = s.micro->precision;
    j["recall"] = s.micro->recall;
    j["f1"] = s.micro->f1;
    j["tp"] = s.micro->counts.tp;
    j["fp"] = s.micro->counts.fp;
    j["fn"] = s.micro->counts.fn;
  } else {
    j["accuracy"] = s.score;
  }
  return j;
}

TaskScore ScoreTask(const EvalSet& eval, Task task,
                    std::span<const RawPrediction> raw) {
  std::unordered_map<std::string, const RawPrediction*> by_id;
  for (const RawPrediction& p : raw) {
    if (!by_id.emplace(p.example_id, &p).second) {
      throw ValidationError("duplicate prediction for '" + p.example_id + "'");
    }
  }
  if (raw.size() != eval.renderings().size()) {
    throw ValidationError("expected " +
                          std::to_string(eval.renderings().size()) +
                          " predictions, got " + std::to_string(raw.size()));
  }

  const TemplateConfig& cfg = eval.store().config();
  const Verbalizer& v = eval.store().verbalizer();
  TaskScore score;
  score.task = task;
  for (const PromptRendering& r : eval.renderings()) {
    auto it = by_id.find(r.example_id);
    if (it == by_id.end()) {
      throw ValidationError("no prediction for example '" + r.example_id + "'");
    }
    const RawPrediction& p = *it->second;
    TaskPrediction pred;
    if (eval.family() == TaskFamily::kTuple) {
      pred = ProjectTask(r.example_id, ParseSeq2SeqOutput(p.output, cfg, v),
                         task);
    } else if (eval.regime() == Regime::kMlm) {
      pred = PolarityPrediction(r.example_id, task, ParseMlmOutput(p.chosen, v));
    } else {
      pred = PolarityPrediction(r.example_id, task,
                                ParseClassifierOutput(p.output));
    }
    score.dropped += pred.dropped;
    score.predictions.push_back(std::move(pred));
  }
  const std::vector<TaskPrediction> gold = eval.Gold(task);
  score.examples = gold.size();
  if (IsTupleTask(task)) {
    score.micro = MicroF1(gold, score.predictions);
    score.score = score.micro->f1;
  } else {
    score.score = Accuracy(gold, score.predictions);
  }
  return score;
}

std::vector<std::uint64_t> ParseSeedList(std::string_view list) {
  std::string s(list);
  std::replace(s.begin(), s.end(), ',', ' ');
  std::vector<std::uint64_t> seeds;
  for (std::string_view word : text::SplitWords(s)) {
    const std::string w(word);
    std::size_t used = 0;
    unsigned long long n = 0;
    try {
      n = std::stoull(w, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != w.size() || w.front() == '-') {
      throw ValidationError("invalid seed '" + w + "'");
    }
    seeds.push_back(n);
  }
  if (seeds.empty()) throw ValidationError("seed list is empty");
  return seeds;
}

ExperimentConfig ExperimentFromConfig(const ToolkitConfig& config,
                                      const fs::path& base_dir) {
  ExperimentConfig e;
  e.toolkit = config;
  const auto& kv = config.experiment;
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end() || text::Trim(it->second).empty()) return std::nullopt;
    return std::string(text::Trim(it->second));
  };
  e.absa_train = ResolvePath(kv, "absa_train", base_dir);
  e.absa_test = ResolvePath(kv, "absa_test", base_dir);
  e.polarity_train = ResolvePath(kv, "polarity_train", base_dir);
  e.polarity_test = ResolvePath(kv, "polarity_test", base_dir);
  if (auto v = get("tasks")) {
    std::string list = *v;
    std::replace(list.begin(), list.end(), ',', ' ');
    for (std::string_view t : text::SplitWords(list)) e.tasks.push_back(ParseTask(t));
  }
  if (auto v = get("regime")) e.regime = ParseRegime(*v);
  if (auto v = get("few_shot")) {
    e.split = SplitSpec::FewShot(ParseCount(*v, "experiment.few_shot"));
  }
  if (auto v = get("zero_shot")) {
    const std::string b = Lower(*v);
    if (b == "true" || b == "1" || b == "yes") {
      if (e.split.kind() == SplitSpec::Kind::kFewShot) {
        throw ValidationError("few_shot and zero_shot are mutually exclusive");
      }
      e.split = SplitSpec::ZeroShot();
    }
  }
  if (auto v = get("val_frac")) e.val_frac = ParseDouble(*v, "experiment.val_frac");
  if (auto v = get("seeds")) e.seeds = ParseSeedList(*v);
  if (auto v = get("backend")) e.backend = BackendSpec::Parse(*v);
  if (auto v = ResolvePath(kv, "out", base_dir)) e.out_dir = *v;
  if (auto v = get("setting")) e.setting = *v;
  if (auto v = get("max_in_flight")) {
    e.max_in_flight = ParseCount(*v, "experiment.max_in_flight");
  }
  if (auto v = get("max_new_units")) {
    e.max_new_units = ParseCount(*v, "experiment.max_new_units");
  }
  if (auto v = get("http_timeout_ms")) {
    e.http.timeout_ms =
        static_cast<int>(ParseCount(*v, "experiment.http_timeout_ms"));
  }
  if (auto v = get("http_retries")) {
    e.http.max_retries = std::stoi(*v);
    if (e.http.max_retries < 0) {
      throw ValidationError("experiment.http_retries must be non-negative");
    }
  }
  return e;
}

void ValidateExperiment(const ExperimentConfig& e) {
  if (e.tasks.empty()) throw ValidationError("no tasks selected");
  if (e.seeds.empty()) throw ValidationError("no seeds selected");
  if (e.val_frac && !(*e.val_frac >= 0.0 && *e.val_frac < 1.0)) {
    throw ValidationError("val_frac must be in [0, 1)");
  }
  for (TaskFamily family : FamiliesOf(e.tasks)) {
    CheckRegime(family, e.regime);
    const bool sc = family == TaskFamily::kSc;
    const auto& test = sc ? e.polarity_test : e.absa_test;
    const auto& train = sc ? e.polarity_train : e.absa_train;
    const std::string what = sc ? "polarity" : "ABSA";
    if (!test) {
      throw ValidationError(std::string(FamilyName(family)) + " tasks need a " +
                            what + " test file");
    }
    if (!fs::exists(*test)) throw ValidationError("missing input " + test->string());
    if (e.split.kind() == SplitSpec::Kind::kFewShot && !train) {
      throw ValidationError("few-shot runs need a " + what + " training file");
    }
    if (train && !fs::exists(*train)) {
      throw ValidationError("missing input " + train->string());
    }
  }
}

std::string SettingLabel(const ExperimentConfig& e) {
  if (!e.setting.empty()) return e.setting;
  return std::string(RegimeName(e.regime)) + ", " + e.split.Describe();
}

std::vector<ReportRow> RunAll(const ExperimentConfig& e, std::ostream* log) {
  ValidateExperiment(e);
  fs::create_directories(e.out_dir);
  const std::vector<TaskFamily> families = FamiliesOf(e.tasks);
  const bool needs_categories =
      std::any_of(families.begin(), families.end(),
                  [](TaskFamily f) { return f != TaskFamily::kSc; });
  const CategorySet allowed =
      needs_categories
          ? ResolveCategories(e.toolkit, e.absa_train, e.absa_test)
          : CategorySet();

  json inputs = json::object();
  std::map<std::uint64_t, json> seed_scores;
  for (TaskFamily family : families) {
    const std::string fam(FamilyName(family));
    const bool sc = family == TaskFamily::kSc;
    const auto& train = sc ? e.polarity_train : e.absa_train;
    const fs::path test = *(sc ? e.polarity_test : e.absa_test);
    const std::optional<CategorySet> check =
        sc ? std::nullopt : std::optional<CategorySet>(allowed);

    if (train && e.split.kind() != SplitSpec::Kind::kZeroShot) {
      inputs[fam + "_train"] = {{"path", train->string()},
                                {"sha256", Sha256File(*train)}};
      Corpus split = SplitCorpus(LoadCorpus(*train, check), e.split);
      if (e.val_frac) {
        Corpus validation;
        std::visit(
            [&](auto& v) {
              auto held = HoldOutTail(std::move(v), *e.val_frac);
              v = std::move(held.train);
              validation = std::move(held.validation);
            },
            split);
        auto out = CreateFile(e.out_dir / ("validation." + fam + ".jsonl"));
        WriteCorpusJsonl(out, validation);
      }
      {
        auto out = CreateFile(e.out_dir / ("train." + fam + ".jsonl"));
        WriteCorpusJsonl(out, split);
      }
      WriteJsonlFile(e.out_dir / ("train." + fam + ".rendered.jsonl"),
                     RenderCorpus(family, split, e.regime, e.toolkit, allowed));
      if (log) {
        *log << fam << ": wrote " << CorpusSize(split) << " training records ("
             << e.split.Describe() << ")\n";
      }
    }

    inputs[fam + "_test"] = {{"path", test.string()},
                             {"sha256", Sha256File(test)}};
    const EvalSet eval(family, LoadCorpus(test, check), e.regime, e.toolkit,
                       allowed, e.max_new_units);
    WriteJsonlFile(e.out_dir / ("test." + fam + ".rendered.jsonl"),
                   eval.renderings());

    for (std::uint64_t seed : e.seeds) {
      const fs::path seed_dir = e.out_dir / ("seed-" + std::to_string(seed));
      auto backend = MakeBackend(e.backend, eval.store(), seed, e.http);
      const std::vector<RawPrediction> raw =
          Predict(eval, *backend, e.max_in_flight);
      WriteJsonlFile(seed_dir / ("predictions." + fam + ".jsonl"), raw);
      for (Task task : e.tasks) {
        if (FamilyOf(task) != family) continue;
        const TaskScore score = ScoreTask(eval, task, raw);
        WriteJsonlFile(
            seed_dir / ("parsed." + std::string(TaskName(task)) + ".jsonl"),
            score.predictions);
        seed_scores[seed][std::string(TaskName(task))] = ScoreToJson(score);
        if (log) {
          *log << "seed " << seed << " " << TaskName(task) << ": "
               << std::fixed << std::setprecision(4) << score.score << "\n";
        }
      }
    }
  }
  for (const auto& [seed, scores] : seed_scores) {
    WriteJsonFile(e.out_dir / ("seed-" + std::to_string(seed)) / "scores.json",
                  scores);
  }

  json tasks = json::array();
  for (Task t : e.tasks) tasks.push_back(TaskName(t));
  const json effective = EffectiveConfig(e);
  WriteJsonFile(e.out_dir / "manifest.json",
                {{"setting", SettingLabel(e)},
                 {"config_sha256", Sha256Hex(effective.dump())},
                 {"config", effective},
                 {"inputs", inputs},
                 {"seeds", e.seeds},
                 {"tasks", tasks}});

  const std::vector<fs::path> runs = {e.out_dir};
  std::vector<ReportRow> rows = ReportFromRuns(runs);
  {
    auto out = CreateFile(e.out_dir / "report.tsv");
    WriteReportTsv(out, rows);
  }
  WriteJsonFile(e.out_dir / "report.json", ReportToJson(rows));
  return rows;
}

std::vector<ReportRow> ReportFromRuns(std::span<const fs::path> run_dirs) {
  std::vector<ReportRow> rows;
  for (const fs::path& dir : run_dirs) {
    const json manifest = ReadJsonFile(dir / "manifest.json");
    ReportRow row;
    row.setting = manifest.at("setting").get<std::string>();
    const auto seeds = manifest.at("seeds").get<std::vector<std::uint64_t>>();
    std::vector<json> per_seed;
    for (std::uint64_t seed : seeds) {
      per_seed.push_back(ReadJsonFile(dir / ("seed-" + std::to_string(seed)) /
                                      "scores.json"));
    }
    for (const json& name : manifest.at("tasks")) {
      const Task task = ParseTask(name.get<std::string>());
      std::vector<double> scores;
      for (const json& s : per_seed) {
        scores.push_back(s.at(std::string(TaskName(task))).at("score").get<double>());
      }
      row.cells[task] = AggregateSeeds(task, scores);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string Sha256Hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw Error("sha256 failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) {
    os << std::hex << std::setw(2) << std::setfill('0')
       << static_cast<int>(digest[i]);
  }
  return os.str();
}

std::string Sha256File(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return Sha256Hex(buffer.str());
}

}  // namespace absa
