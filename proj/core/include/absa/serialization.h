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

#ifndef ABSA_SERIALIZATION_H_
#define ABSA_SERIALIZATION_H_

#include <filesystem>
#include <iosfwd>
#include <vector>

#include <nlohmann/json.hpp>

#include "absa/parsing.h"
#include "absa/prompting.h"
#include "absa/types.h"

namespace absa {
OpinionTriplet TripletFromJson(const nlohmann::json& j);
void TripletToJson(nlohmann::json& j, const OpinionTriplet& t);
}  // namespace absa

// OpinionTriplet has no default constructor.
template <>
struct nlohmann::adl_serializer<absa::OpinionTriplet> {
  static absa::OpinionTriplet from_json(const json& j) {
    return absa::TripletFromJson(j);
  }
  static void to_json(json& j, const absa::OpinionTriplet& t) {
    absa::TripletToJson(j, t);
  }
};

// JSON forms of the records exchanged between commands. JSONL files carry
// one compact object per line.
namespace absa {

// {"review_id", "sentence_id", "text", "opinions": [{"category", "target",
// "polarity"}]}; a NULL target is JSON null.
void to_json(nlohmann::json& j, const AbsaSentence& s);
void from_json(const nlohmann::json& j, AbsaSentence& s);

// {"id", "label", "text", "stars"}
void to_json(nlohmann::json& j, const PolarityDocument& d);
void from_json(const nlohmann::json& j, PolarityDocument& d);

// {"id", "input", "target", "regime", "n_triplets"}
void to_json(nlohmann::json& j, const PromptRendering& r);
void from_json(const nlohmann::json& j, PromptRendering& r);

// {"id", "task", "items", "dropped"}. Items: ACD "FOOD#QUALITY"; ATE "steak";
// ACTE ["FOOD#QUALITY", "steak" | null]; TASD [category, term | null,
// polarity]; APD and SC "positive".
void to_json(nlohmann::json& j, const TaskPrediction& p);
void from_json(const nlohmann::json& j, TaskPrediction& p);

// Throws ParseError with the 1-based line of the first bad record.
std::vector<nlohmann::json> ReadJsonl(std::istream& in);
std::vector<nlohmann::json> ReadJsonlFile(const std::filesystem::path& path);

template <typename T>
std::vector<T> ReadJsonlAs(const std::filesystem::path& path) {
  std::vector<T> out;
  for (const nlohmann::json& j : ReadJsonlFile(path)) out.push_back(j.get<T>());
  return out;
}

template <typename Range>
void WriteJsonl(std::ostream& out, const Range& records) {
  for (const auto& r : records) out << nlohmann::json(r).dump() << '\n';
}

}  // namespace absa

#endif  // ABSA_SERIALIZATION_H_
