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

#ifndef ABSA_PROMPTING_H_
#define ABSA_PROMPTING_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absa/types.h"

namespace absa {

inline constexpr std::string_view kNullTerm = "NULL";
inline constexpr std::string_view kMaskToken = "<mask>";
inline constexpr std::string_view kAnswerSlot = "[MASK]";

// "<extra_id_N>"
std::string Sentinel(std::size_t id);

// Bijective map between polarities and words filling a label or answer slot.
class Verbalizer {
 public:
  // Throws ValidationError unless the three words are non-empty and
  // distinct after lower-casing.
  Verbalizer(std::string positive, std::string negative, std::string neutral);

  // great / bad / ok, used in generated seq2seq labels.
  static Verbalizer Seq2SeqEnglish();
  // dobrý / špatný / ok, used for the Czech masked-LM answer slot.
  static Verbalizer MlmCzech();

  const std::string& Word(Polarity p) const;
  // Exact match after lower-casing and trimming.
  std::optional<Polarity> Inverse(std::string_view word) const;
  // Words in kPolarities order.
  std::vector<std::string> Candidates() const;

  bool operator==(const Verbalizer&) const = default;

 private:
  std::vector<std::string> words_;  // indexed like kPolarities
  std::vector<std::string> keys_;   // lower-cased words
};

// Display strings for the allowed categories and the inverse lookup used by
// the output parsers.
class CategoryRenderer {
 public:
  CategoryRenderer() = default;

  // "FOOD#STYLE_OPTIONS" -> "Food style options".
  static std::string DefaultDisplay(const AspectCategory& c);

  // Every allowed category gets DefaultDisplay unless `overrides` names it.
  static CategoryRenderer Derived(
      const CategorySet& allowed,
      const std::map<AspectCategory, std::string>& overrides = {});
  // Every allowed category must have an entry in `names`.
  static CategoryRenderer FromTable(
      const CategorySet& allowed,
      const std::map<AspectCategory, std::string>& names);

  // Throws ValidationError for categories outside the table.
  const std::string& Render(const AspectCategory& c) const;
  // Case-insensitive, whitespace-normalized lookup.
  std::optional<AspectCategory> Invert(std::string_view display) const;

  std::size_t size() const { return display_.size(); }

 private:
  void Add(const AspectCategory& c, std::string display);

  std::map<AspectCategory, std::string> display_;
  std::map<std::string, AspectCategory> inverse_;
};

struct TemplateConfig {
  Regime regime = Regime::kTraditional;
  // Language of label schemas and prompts.
  Language language = Language::kEn;
  CategoryRenderer categories;
  std::string separator = " | ";
  std::string triplet_joiner = "; ";
  // Whitespace-delimited words, review plus prompt.
  std::size_t max_input_units = 400;
  bool mlm_trailing_period = true;
};

struct PromptRendering {
  std::string example_id;
  std::string model_input;
  std::string expected_target;
  Regime regime = Regime::kTraditional;
  std::size_t triplet_count = 0;

  bool operator==(const PromptRendering&) const = default;
};

// The words around the category, polarity and term slots of a label.
struct LabelGrammar {
  std::string_view copula;      // " is "
  std::string_view expression;  // ", given the expression: "
};
LabelGrammar GrammarFor(Language language);

// "<category> is <word>, given the expression: <term|NULL>"
std::string RenderTripletLabel(const OpinionTriplet& t,
                               const TemplateConfig& cfg, const Verbalizer& v);

// Input is the review; target is the joined triplet labels.
PromptRendering RenderTraditional(const AbsaSentence& example,
                                  const TemplateConfig& cfg,
                                  const Verbalizer& v);

// Review + separator + label templates whose slots are sentinels 3k, 3k+1,
// 3k+2 for the k-th triplet. The target lists each sentinel followed by its
// value and ends with sentinel 3 * triplet_count.
PromptRendering RenderSentinelPrompt(const AbsaSentence& example,
                                     const TemplateConfig& cfg,
                                     const Verbalizer& v);

// Same template with every slot set to <mask>; the target is the whole input
// with the slots filled in.
PromptRendering RenderMaskPrompt(const AbsaSentence& example,
                                 const TemplateConfig& cfg,
                                 const Verbalizer& v);

// Dispatches on cfg.regime (traditional, sentinel or mask).
PromptRendering RenderSeq2Seq(const AbsaSentence& example,
                              const TemplateConfig& cfg, const Verbalizer& v);

// Appends the one-slot classification prompt to the review, trimming words
// off the end of the review so the whole input stays within
// cfg.max_input_units. The target is v.Word(gold).
// task must be kSc or kApd; kApd needs `tuple`.
PromptRendering RenderMlmPrompt(std::string_view example_id,
                                std::string_view text, Task task,
                                const std::optional<AspectTuple>& tuple,
                                Polarity gold, const TemplateConfig& cfg,
                                const Verbalizer& v);

// "<category> | <term|NULL> | <text>"
std::string RenderApdTraditionalInput(std::string_view text,
                                      const AspectTuple& tuple,
                                      const TemplateConfig& cfg);

// regime mlm -> RenderMlmPrompt; regime traditional -> classifier input
// (tuple prefix for APD, bare text for SC) with the label name as target.
PromptRendering RenderClassification(const ClassificationExample& example,
                                     Task task, const TemplateConfig& cfg,
                                     const Verbalizer& v);

}  // namespace absa

#endif  // ABSA_PROMPTING_H_
