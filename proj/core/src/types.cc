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

#include "absa/types.h"

#include <algorithm>
#include <cctype>

#include "absa/errors.h"
#include "absa/text.h"

namespace absa {
namespace {

std::string UpperAscii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return out;
}

void CheckCategoryPart(std::string_view part, std::string_view whole) {
  if (part.empty()) {
    throw ValidationError("aspect category '" + std::string(whole) +
                          "' has an empty entity or attribute");
  }
  for (char c : part) {
    if (c == '#' || std::isspace(static_cast<unsigned char>(c))) {
      throw ValidationError("aspect category '" + std::string(whole) +
                            "' is not of the form ENTITY#ATTRIBUTE");
    }
  }
}

}  // namespace

std::string_view PolarityName(Polarity p) {
  switch (p) {
    case Polarity::kPositive:
      return "positive";
    case Polarity::kNegative:
      return "negative";
    case Polarity::kNeutral:
      return "neutral";
  }
  return "neutral";
}

std::optional<Polarity> PolarityFromName(std::string_view name) {
  for (Polarity p : kPolarities) {
    if (PolarityName(p) == name) return p;
  }
  return std::nullopt;
}

Polarity ParsePolarity(std::string_view name) {
  if (auto p = PolarityFromName(text::ToLower(text::Trim(name)))) return *p;
  throw ValidationError("unknown polarity '" + std::string(name) +
                        "' (expected positive, negative or neutral)");
}

AspectCategory::AspectCategory(std::string_view entity,
                               std::string_view attribute)
    : entity_(UpperAscii(text::Trim(entity))),
      attribute_(UpperAscii(text::Trim(attribute))) {
  const std::string whole = entity_ + "#" + attribute_;
  CheckCategoryPart(entity_, whole);
  CheckCategoryPart(attribute_, whole);
}

AspectCategory AspectCategory::Parse(std::string_view canonical) {
  std::string_view s = text::Trim(canonical);
  const std::size_t hash = s.find('#');
  if (hash == std::string_view::npos) {
    throw ValidationError("aspect category '" + std::string(s) +
                          "' is not of the form ENTITY#ATTRIBUTE");
  }
  return AspectCategory(s.substr(0, hash), s.substr(hash + 1));
}

CategorySet CategorySet::FromList(std::string_view list) {
  std::string normalized(list);
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  CategorySet set;
  for (std::string_view name : text::SplitWords(normalized)) {
    set.insert(AspectCategory::Parse(name));
  }
  return set;
}

OpinionTriplet::OpinionTriplet(AspectCategory c, std::optional<std::string> t,
                               Polarity p)
    : category(std::move(c)), term(std::move(t)), polarity(p) {
  if (term && text::Trim(*term).empty()) {
    throw ValidationError(
        "aspect term is blank; use an absent term for NULL");
  }
}

std::string_view TaskName(Task t) {
  switch (t) {
    case Task::kAcd:
      return "acd";
    case Task::kAte:
      return "ate";
    case Task::kActe:
      return "acte";
    case Task::kTasd:
      return "tasd";
    case Task::kApd:
      return "apd";
    case Task::kSc:
      return "sc";
  }
  return "sc";
}

Task ParseTask(std::string_view name) {
  const std::string lower = text::ToLower(text::Trim(name));
  for (Task t : {Task::kAcd, Task::kAte, Task::kActe, Task::kTasd, Task::kApd,
                 Task::kSc}) {
    if (TaskName(t) == lower) return t;
  }
  throw ValidationError("unknown task '" + std::string(name) +
                        "' (expected acd, ate, acte, tasd, apd or sc)");
}

bool IsTupleTask(Task t) {
  return t == Task::kAcd || t == Task::kAte || t == Task::kActe ||
         t == Task::kTasd;
}

std::string_view RegimeName(Regime r) {
  switch (r) {
    case Regime::kTraditional:
      return "traditional";
    case Regime::kSentinel:
      return "sentinel";
    case Regime::kMask:
      return "mask";
    case Regime::kMlm:
      return "mlm";
  }
  return "mlm";
}

Regime ParseRegime(std::string_view name) {
  const std::string lower = text::ToLower(text::Trim(name));
  for (Regime r : {Regime::kTraditional, Regime::kSentinel, Regime::kMask,
                   Regime::kMlm}) {
    if (RegimeName(r) == lower) return r;
  }
  throw ValidationError("unknown regime '" + std::string(name) +
                        "' (expected traditional, sentinel, mask or mlm)");
}

std::string_view LanguageName(Language l) {
  return l == Language::kEn ? "en" : "cs";
}

Language ParseLanguage(std::string_view name) {
  const std::string lower = text::ToLower(text::Trim(name));
  if (lower == "en") return Language::kEn;
  if (lower == "cs") return Language::kCs;
  throw ValidationError("unknown language '" + std::string(name) +
                        "' (expected en or cs)");
}

}  // namespace absa
