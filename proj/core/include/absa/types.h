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

#ifndef ABSA_TYPES_H_
#define ABSA_TYPES_H_

#include <array>
#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace absa {

enum class Polarity { kPositive, kNegative, kNeutral };

// Fixed order used wherever polarities are enumerated. It is also the
// tie-break order for classification scores.
inline constexpr std::array<Polarity, 3> kPolarities = {
    Polarity::kPositive, Polarity::kNegative, Polarity::kNeutral};

std::string_view PolarityName(Polarity p);
std::optional<Polarity> PolarityFromName(std::string_view name);
// Case-insensitive and trimmed. Throws ValidationError for anything else.
Polarity ParsePolarity(std::string_view name);

// An ENTITY#ATTRIBUTE pair, stored upper-case.
class AspectCategory {
 public:
  AspectCategory(std::string_view entity, std::string_view attribute);

  // Parses "ENTITY#ATTRIBUTE" (any case). Throws ValidationError.
  static AspectCategory Parse(std::string_view canonical);

  const std::string& entity() const { return entity_; }
  const std::string& attribute() const { return attribute_; }
  std::string canonical() const { return entity_ + "#" + attribute_; }

  auto operator<=>(const AspectCategory&) const = default;

 private:
  std::string entity_;
  std::string attribute_;
};

// The closed set of categories a corpus may use.
class CategorySet {
 public:
  CategorySet() = default;
  explicit CategorySet(std::set<AspectCategory> categories)
      : categories_(std::move(categories)) {}

  // Comma- or whitespace-separated list of canonical names.
  static CategorySet FromList(std::string_view list);

  bool contains(const AspectCategory& c) const {
    return categories_.count(c) > 0;
  }
  void insert(const AspectCategory& c) { categories_.insert(c); }
  bool empty() const { return categories_.empty(); }
  std::size_t size() const { return categories_.size(); }
  auto begin() const { return categories_.begin(); }
  auto end() const { return categories_.end(); }

 private:
  std::set<AspectCategory> categories_;
};

// One (category, term, polarity) opinion. An absent term is the NULL term.
struct OpinionTriplet {
  AspectCategory category;
  std::optional<std::string> term;
  Polarity polarity;

  OpinionTriplet(AspectCategory c, std::optional<std::string> t, Polarity p);

  auto operator<=>(const OpinionTriplet&) const = default;
};

// A known (category, term) pair whose polarity is to be classified.
struct AspectTuple {
  AspectCategory category;
  std::optional<std::string> term;

  auto operator<=>(const AspectTuple&) const = default;
};

struct AbsaSentence {
  std::string review_id;
  std::string sentence_id;
  std::string text;
  std::vector<OpinionTriplet> triplets;
};

struct PolarityDocument {
  std::string doc_id;
  std::string text;
  Polarity label;
  std::optional<int> stars;
};

// Polarity classification example (APD tuple or SC document).
struct ClassificationExample {
  std::string id;
  std::string text;
  std::optional<AspectTuple> tuple;
  Polarity label = Polarity::kNeutral;
};

enum class Task { kAcd, kAte, kActe, kTasd, kApd, kSc };

std::string_view TaskName(Task t);  // lower-case: "acd", "tasd", ...
Task ParseTask(std::string_view name);
// ACD, ATE, ACTE and TASD are projected from generated triplets.
bool IsTupleTask(Task t);

enum class Regime { kTraditional, kSentinel, kMask, kMlm };

std::string_view RegimeName(Regime r);  // "traditional", "sentinel", ...
Regime ParseRegime(std::string_view name);

enum class Language { kEn, kCs };

std::string_view LanguageName(Language l);
Language ParseLanguage(std::string_view name);

}  // namespace absa

#endif  // ABSA_TYPES_H_
