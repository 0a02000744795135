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

#include "absa/prompting.h"

#include "absa/errors.h"
#include "absa/text.h"

namespace absa {
namespace {

std::size_t Index(Polarity p) {
  for (std::size_t i = 0; i < kPolarities.size(); ++i) {
    if (kPolarities[i] == p) return i;
  }
  return 0;
}

std::string InverseKey(std::string_view display) {
  return text::ToLower(text::CollapseWhitespace(display));
}

std::string TermText(const std::optional<std::string>& term) {
  return term ? *term : std::string(kNullTerm);
}

// One label template with its three slots filled by the given strings.
std::string FillTemplate(const LabelGrammar& g, std::string_view category,
                         std::string_view word, std::string_view term) {
  std::string out;
  out.reserve(category.size() + word.size() + term.size() + 40);
  out.append(category).append(g.copula).append(word).append(g.expression);
  out.append(term);
  return out;
}

// Review + separator + per-triplet templates, slots produced by `slot(i)`.
template <typename SlotFn>
std::string PromptedInput(const AbsaSentence& example,
                          const TemplateConfig& cfg, SlotFn&& slot) {
  const LabelGrammar g = GrammarFor(cfg.language);
  std::vector<std::string> templates;
  templates.reserve(example.triplets.size());
  for (std::size_t k = 0; k < example.triplets.size(); ++k) {
    templates.push_back(
        FillTemplate(g, slot(3 * k), slot(3 * k + 1), slot(3 * k + 2)));
  }
  return example.text + cfg.separator + text::Join(templates, cfg.triplet_joiner);
}

std::string MlmPrompt(Task task, const std::optional<AspectTuple>& tuple,
                      const TemplateConfig& cfg) {
  std::string prompt;
  if (task == Task::kSc) {
    prompt = cfg.language == Language::kCs
                 ? "Je to " + std::string(kAnswerSlot) + " film"
                 : "It is a " + std::string(kAnswerSlot) + " movie";
  } else {
    const LabelGrammar g = GrammarFor(cfg.language);
    prompt = FillTemplate(g, cfg.categories.Render(tuple->category),
                          kAnswerSlot, TermText(tuple->term));
  }
  if (cfg.mlm_trailing_period) prompt.push_back('.');
  return prompt;
}

}  // namespace

std::string Sentinel(std::size_t id) {
  return "<extra_id_" + std::to_string(id) + ">";
}

Verbalizer::Verbalizer(std::string positive, std::string negative,
                       std::string neutral)
    : words_{std::move(positive), std::move(negative), std::move(neutral)} {
  for (const std::string& w : words_) {
    std::string key = text::ToLower(text::Trim(w));
    if (key.empty()) throw ValidationError("verbalizer word is empty");
    for (const std::string& other : keys_) {
      if (other == key) {
        throw ValidationError("verbalizer word '" + w +
                              "' is used for two polarities");
      }
    }
    keys_.push_back(std::move(key));
  }
}

Verbalizer Verbalizer::Seq2SeqEnglish() {
  return Verbalizer("great", "bad", "ok");
}

Verbalizer Verbalizer::MlmCzech() {
  return Verbalizer("dobrý", "špatný", "ok");
}

const std::string& Verbalizer::Word(Polarity p) const {
  return words_[Index(p)];
}

std::optional<Polarity> Verbalizer::Inverse(std::string_view word) const {
  const std::string key = text::ToLower(text::Trim(word));
  for (std::size_t i = 0; i < keys_.size(); ++i) {
    if (keys_[i] == key) return kPolarities[i];
  }
  return std::nullopt;
}

std::vector<std::string> Verbalizer::Candidates() const { return words_; }

std::string CategoryRenderer::DefaultDisplay(const AspectCategory& c) {
  auto words = [](std::string_view s) {
    std::string out = text::ToLower(s);
    for (char& ch : out) {
      if (ch == '_') ch = ' ';
    }
    return out;
  };
  std::string display = words(c.entity());
  if (!display.empty() && display[0] >= 'a' && display[0] <= 'z') {
    display[0] = static_cast<char>(display[0] - 'a' + 'A');
  }
  return display + " " + words(c.attribute());
}

CategoryRenderer CategoryRenderer::Derived(
    const CategorySet& allowed,
    const std::map<AspectCategory, std::string>& overrides) {
  CategoryRenderer r;
  for (const AspectCategory& c : allowed) {
    auto it = overrides.find(c);
    r.Add(c, it != overrides.end() ? it->second : DefaultDisplay(c));
  }
  return r;
}

CategoryRenderer CategoryRenderer::FromTable(
    const CategorySet& allowed,
    const std::map<AspectCategory, std::string>& names) {
  CategoryRenderer r;
  for (const AspectCategory& c : allowed) {
    auto it = names.find(c);
    if (it == names.end()) {
      throw ValidationError("no display name configured for category " +
                            c.canonical());
    }
    r.Add(c, it->second);
  }
  return r;
}

void CategoryRenderer::Add(const AspectCategory& c, std::string display) {
  std::string key = InverseKey(display);
  if (key.empty()) {
    throw ValidationError("empty display name for category " + c.canonical());
  }
  auto [it, inserted] = inverse_.emplace(key, c);
  if (!inserted && it->second != c) {
    throw ValidationError("display name '" + display + "' is shared by " +
                          it->second.canonical() + " and " + c.canonical());
  }
  display_[c] = text::CollapseWhitespace(display);
}

const std::string& CategoryRenderer::Render(const AspectCategory& c) const {
  auto it = display_.find(c);
  if (it == display_.end()) {
    throw ValidationError("category " + c.canonical() +
                          " has no display rendering");
  }
  return it->second;
}

std::optional<AspectCategory> CategoryRenderer::Invert(
    std::string_view display) const {
  auto it = inverse_.find(InverseKey(display));
  if (it == inverse_.end()) return std::nullopt;
  return it->second;
}

LabelGrammar GrammarFor(Language language) {
  if (language == Language::kCs) return {" je ", ", dáno výrazem: "};
  return {" is ", ", given the expression: "};
}

std::string RenderTripletLabel(const OpinionTriplet& t,
                               const TemplateConfig& cfg,
                               const Verbalizer& v) {
  return FillTemplate(GrammarFor(cfg.language), cfg.categories.Render(t.category),
                      v.Word(t.polarity), TermText(t.term));
}

PromptRendering RenderTraditional(const AbsaSentence& example,
                                  const TemplateConfig& cfg,
                                  const Verbalizer& v) {
  std::vector<std::string> labels;
  labels.reserve(example.triplets.size());
  for (const OpinionTriplet& t : example.triplets) {
    labels.push_back(RenderTripletLabel(t, cfg, v));
  }
  return {example.sentence_id, example.text,
          text::Join(labels, cfg.triplet_joiner), Regime::kTraditional,
          example.triplets.size()};
}

PromptRendering RenderSentinelPrompt(const AbsaSentence& example,
                                     const TemplateConfig& cfg,
                                     const Verbalizer& v) {
  PromptRendering r;
  r.example_id = example.sentence_id;
  r.regime = Regime::kSentinel;
  r.triplet_count = example.triplets.size();
  r.model_input = PromptedInput(example, cfg, Sentinel);
  std::string& target = r.expected_target;
  std::size_t id = 0;
  for (const OpinionTriplet& t : example.triplets) {
    for (const std::string& value :
         {cfg.categories.Render(t.category), v.Word(t.polarity),
          TermText(t.term)}) {
      target.append(Sentinel(id++)).append(" ").append(value).append(" ");
    }
  }
  target.append(Sentinel(id));
  return r;
}

PromptRendering RenderMaskPrompt(const AbsaSentence& example,
                                 const TemplateConfig& cfg,
                                 const Verbalizer& v) {
  PromptRendering r;
  r.example_id = example.sentence_id;
  r.regime = Regime::kMask;
  r.triplet_count = example.triplets.size();
  r.model_input = PromptedInput(
      example, cfg, [](std::size_t) { return std::string(kMaskToken); });
  r.expected_target = PromptedInput(example, cfg, [&](std::size_t slot) {
    const OpinionTriplet& t = example.triplets[slot / 3];
    switch (slot % 3) {
      case 0:
        return cfg.categories.Render(t.category);
      case 1:
        return v.Word(t.polarity);
      default:
        return TermText(t.term);
    }
  });
  return r;
}

PromptRendering RenderSeq2Seq(const AbsaSentence& example,
                              const TemplateConfig& cfg, const Verbalizer& v) {
  switch (cfg.regime) {
    case Regime::kTraditional:
      return RenderTraditional(example, cfg, v);
    case Regime::kSentinel:
      return RenderSentinelPrompt(example, cfg, v);
    case Regime::kMask:
      return RenderMaskPrompt(example, cfg, v);
    case Regime::kMlm:
      break;
  }
  throw ValidationError("regime mlm does not produce seq2seq renderings");
}

PromptRendering RenderMlmPrompt(std::string_view example_id,
                                std::string_view text, Task task,
                                const std::optional<AspectTuple>& tuple,
                                Polarity gold, const TemplateConfig& cfg,
                                const Verbalizer& v) {
  if (task != Task::kSc && task != Task::kApd) {
    throw ValidationError("masked-LM prompts exist only for sc and apd");
  }
  if (task == Task::kApd && !tuple) {
    throw ValidationError("apd prompt for '" + std::string(example_id) +
                          "' needs an aspect tuple");
  }
  const std::string prompt = MlmPrompt(task, tuple, cfg);
  const std::size_t prompt_units = text::SplitWords(prompt).size();
  if (prompt_units > cfg.max_input_units) {
    throw ValidationError("prompt of " + std::to_string(prompt_units) +
                          " words exceeds the input limit of " +
                          std::to_string(cfg.max_input_units));
  }
  const std::size_t budget = cfg.max_input_units - prompt_units;

  std::string_view review = text::Trim(text);
  const std::vector<std::string_view> words = text::SplitWords(review);
  if (words.size() > budget) {
    if (budget == 0) {
      review = {};
    } else {
      const std::string_view& last = words[budget - 1];
      review = review.substr(0, static_cast<std::size_t>(
                                    last.data() + last.size() - review.data()));
    }
  }

  PromptRendering r;
  r.example_id = std::string(example_id);
  r.regime = Regime::kMlm;
  r.triplet_count = task == Task::kApd ? 1 : 0;
  r.model_input = review.empty() ? prompt : std::string(review) + " " + prompt;
  r.expected_target = v.Word(gold);
  return r;
}

std::string RenderApdTraditionalInput(std::string_view text,
                                      const AspectTuple& tuple,
                                      const TemplateConfig& cfg) {
  std::string out = cfg.categories.Render(tuple.category);
  out.append(" | ").append(TermText(tuple.term)).append(" | ").append(text);
  return out;
}

PromptRendering RenderClassification(const ClassificationExample& example,
                                     Task task, const TemplateConfig& cfg,
                                     const Verbalizer& v) {
  if (cfg.regime == Regime::kMlm) {
    return RenderMlmPrompt(example.id, example.text, task, example.tuple,
                           example.label, cfg, v);
  }
  if (cfg.regime != Regime::kTraditional) {
    throw ValidationError(std::string(TaskName(task)) +
                          " supports only the traditional and mlm regimes");
  }
  PromptRendering r;
  r.example_id = example.id;
  r.regime = Regime::kTraditional;
  if (task == Task::kApd) {
    if (!example.tuple) {
      throw ValidationError("apd example '" + example.id +
                            "' has no aspect tuple");
    }
    r.model_input = RenderApdTraditionalInput(example.text, *example.tuple, cfg);
    r.triplet_count = 1;
  } else {
    r.model_input = example.text;
  }
  r.expected_target = std::string(PolarityName(example.label));
  return r;
}

}  // namespace absa
