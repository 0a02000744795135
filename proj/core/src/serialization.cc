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

#include "absa/serialization.h"

#include <fstream>
#include <istream>

#include "absa/errors.h"

namespace absa {
namespace {

using nlohmann::json;

json TermJson(const std::optional<std::string>& term) {
  return term ? json(*term) : json(nullptr);
}

std::optional<std::string> TermFromJson(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<std::string>();
}

json ItemJson(const TaskItem& item, Task task) {
  switch (task) {
    case Task::kAcd:
      return item.category->canonical();
    case Task::kAte:
      return TermJson(item.term);
    case Task::kActe:
      return json::array({item.category->canonical(), TermJson(item.term)});
    case Task::kTasd:
      return json::array({item.category->canonical(), TermJson(item.term),
                          PolarityName(*item.polarity)});
    case Task::kApd:
    case Task::kSc:
      return PolarityName(*item.polarity);
  }
  return nullptr;
}

TaskItem ItemFromJson(const json& j, Task task) {
  TaskItem item;
  switch (task) {
    case Task::kAcd:
      item.category = AspectCategory::Parse(j.get<std::string>());
      break;
    case Task::kAte:
      item.term = j.get<std::string>();
      break;
    case Task::kActe:
      item.category = AspectCategory::Parse(j.at(0).get<std::string>());
      item.term = TermFromJson(j.at(1));
      break;
    case Task::kTasd:
      item.category = AspectCategory::Parse(j.at(0).get<std::string>());
      item.term = TermFromJson(j.at(1));
      item.polarity = ParsePolarity(j.at(2).get<std::string>());
      break;
    case Task::kApd:
    case Task::kSc:
      item.polarity = ParsePolarity(j.get<std::string>());
      break;
  }
  return item;
}

}  // namespace

void TripletToJson(json& j, const OpinionTriplet& t) {
  j = {{"category", t.category.canonical()},
       {"target", TermJson(t.term)},
       {"polarity", PolarityName(t.polarity)}};
}

OpinionTriplet TripletFromJson(const json& j) {
  return OpinionTriplet(AspectCategory::Parse(j.at("category").get<std::string>()),
                     TermFromJson(j.at("target")),
                     ParsePolarity(j.at("polarity").get<std::string>()));
}

void to_json(json& j, const AbsaSentence& s) {
  j = {{"review_id", s.review_id},
       {"sentence_id", s.sentence_id},
       {"text", s.text},
       {"opinions", s.triplets}};
}

void from_json(const json& j, AbsaSentence& s) {
  s.review_id = j.at("review_id").get<std::string>();
  s.sentence_id = j.at("sentence_id").get<std::string>();
  s.text = j.at("text").get<std::string>();
  s.triplets.clear();
  for (const json& o : j.at("opinions")) s.triplets.push_back(o.get<OpinionTriplet>());
}

void to_json(json& j, const PolarityDocument& d) {
  j = {{"id", d.doc_id},
       {"label", PolarityName(d.label)},
       {"text", d.text},
       {"stars", d.stars ? json(*d.stars) : json(nullptr)}};
}

void from_json(const json& j, PolarityDocument& d) {
  d.doc_id = j.at("id").get<std::string>();
  d.label = ParsePolarity(j.at("label").get<std::string>());
  d.text = j.at("text").get<std::string>();
  d.stars.reset();
  if (j.contains("stars") && !j["stars"].is_null()) d.stars = j["stars"].get<int>();
}

void to_json(json& j, const PromptRendering& r) {
  j = {{"id", r.example_id},
       {"input", r.model_input},
       {"target", r.expected_target},
       {"regime", RegimeName(r.regime)},
       {"n_triplets", r.triplet_count}};
}

void from_json(const json& j, PromptRendering& r) {
  r.example_id = j.at("id").get<std::string>();
  r.model_input = j.at("input").get<std::string>();
  r.expected_target = j.at("target").get<std::string>();
  r.regime = ParseRegime(j.at("regime").get<std::string>());
  r.triplet_count = j.at("n_triplets").get<std::size_t>();
}

void to_json(json& j, const TaskPrediction& p) {
  json items = json::array();
  for (const TaskItem& item : p.items) items.push_back(ItemJson(item, p.task));
  j = {{"id", p.example_id},
       {"task", TaskName(p.task)},
       {"items", std::move(items)},
       {"dropped", p.dropped}};
}

void from_json(const json& j, TaskPrediction& p) {
  p.example_id = j.at("id").get<std::string>();
  p.task = ParseTask(j.at("task").get<std::string>());
  p.items.clear();
  for (const json& item : j.at("items")) p.items.insert(ItemFromJson(item, p.task));
  p.dropped = j.value("dropped", std::size_t{0});
}

std::vector<json> ReadJsonl(std::istream& in) {
  std::vector<json> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("invalid JSON record: ") + e.what(),
                       line_no);
    }
  }
  return out;
}

std::vector<json> ReadJsonlFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return ReadJsonl(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

}  // namespace absa
