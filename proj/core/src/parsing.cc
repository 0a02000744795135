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

#include "absa/parsing.h"

#include <variant>

#include "absa/errors.h"
#include "absa/text.h"

namespace absa {
namespace {

constexpr std::string_view kSentinelOpen = "<extra_id_";

using ClauseResult = std::variant<OpinionTriplet, std::string>;

std::string_view TrimmedOrSelf(std::string_view s) {
  std::string_view t = text::Trim(s);
  return t.empty() ? s : t;
}

// Builds a triplet from its three rendered fields or names the first failure.
ClauseResult BuildTriplet(std::string_view category_text,
                          std::string_view word, std::string_view term_text,
                          const TemplateConfig& cfg, const Verbalizer& v) {
  std::optional<AspectCategory> category =
      cfg.categories.Invert(category_text);
  if (!category) return std::string("unknown category");
  std::optional<Polarity> polarity = v.Inverse(word);
  if (!polarity) return std::string("unknown polarity word");
  std::string_view term = text::Trim(term_text);
  if (term.empty()) return std::string("empty term");
  std::optional<std::string> term_value;
  if (text::ToLower(term) != "null") term_value = std::string(term);
  return OpinionTriplet(std::move(*category), std::move(term_value), *polarity);
}

ClauseResult ParseClause(std::string_view clause, const TemplateConfig& cfg,
                         const Verbalizer& v) {
  const LabelGrammar g = GrammarFor(cfg.language);
  // Tolerate a missing space after the colon.
  std::string_view expression = g.expression;
  while (!expression.empty() && expression.back() == ' ') {
    expression.remove_suffix(1);
  }
  const std::size_t at = clause.rfind(expression);
  if (at == std::string_view::npos) {
    return std::string("clause does not match label grammar");
  }
  const std::string_view head = clause.substr(0, at);
  const std::string_view term = clause.substr(at + expression.size());
  const std::size_t copula = head.rfind(g.copula);
  if (copula == std::string_view::npos) {
    return std::string("clause does not match label grammar");
  }
  return BuildTriplet(head.substr(0, copula),
                      head.substr(copula + g.copula.size()), term, cfg, v);
}

void Record(ParsedOutput& out, std::string clause, ClauseResult result) {
  if (auto* t = std::get_if<OpinionTriplet>(&result)) {
    out.triplets.push_back(std::move(*t));
  } else {
    ++out.dropped_clauses;
    out.diagnostics.push_back(
        {std::move(clause), std::move(std::get<std::string>(result))});
  }
}

struct SentinelMarker {
  std::size_t begin;
  std::size_t end;
};

std::vector<SentinelMarker> FindSentinels(std::string_view raw) {
  std::vector<SentinelMarker> markers;
  std::size_t pos = 0;
  while ((pos = raw.find(kSentinelOpen, pos)) != std::string_view::npos) {
    std::size_t i = pos + kSentinelOpen.size();
    const std::size_t digits_begin = i;
    while (i < raw.size() && raw[i] >= '0' && raw[i] <= '9') ++i;
    if (i > digits_begin && i < raw.size() && raw[i] == '>') {
      markers.push_back({pos, i + 1});
      pos = i + 1;
    } else {
      pos += kSentinelOpen.size();
    }
  }
  return markers;
}

}  // namespace

ParsedOutput ParseTraditionalOutput(std::string_view raw,
                                    const TemplateConfig& cfg,
                                    const Verbalizer& v) {
  ParsedOutput out;
  for (std::string_view piece :
       text::Split(raw, TrimmedOrSelf(cfg.triplet_joiner))) {
    std::string_view clause = text::Trim(piece);
    if (clause.empty()) continue;
    Record(out, std::string(clause), ParseClause(clause, cfg, v));
  }
  return out;
}

ParsedOutput ParseSentinelOutput(std::string_view raw,
                                 const TemplateConfig& cfg,
                                 const Verbalizer& v) {
  ParsedOutput out;
  const std::vector<SentinelMarker> markers = FindSentinels(raw);
  const std::string_view before =
      text::Trim(raw.substr(0, markers.empty() ? raw.size() : markers[0].begin));
  if (!before.empty()) {
    out.diagnostics.push_back({std::string(before),
                               "text outside sentinel fields ignored"});
  }

  std::vector<std::string_view> fields;
  for (std::size_t m = 0; m < markers.size(); ++m) {
    const std::size_t stop =
        m + 1 < markers.size() ? markers[m + 1].begin : raw.size();
    const std::string_view value =
        text::Trim(raw.substr(markers[m].end, stop - markers[m].end));
    // The last sentinel closes the sequence unless text follows it.
    if (m + 1 == markers.size() && value.empty()) break;
    fields.push_back(value);
  }

  std::size_t i = 0;
  for (; i + 3 <= fields.size(); i += 3) {
    std::string clause = std::string(fields[i]) + " / " +
                         std::string(fields[i + 1]) + " / " +
                         std::string(fields[i + 2]);
    Record(out, std::move(clause),
           BuildTriplet(fields[i], fields[i + 1], fields[i + 2], cfg, v));
  }
  if (i < fields.size()) {
    std::vector<std::string> rest(fields.begin() + static_cast<std::ptrdiff_t>(i),
                                  fields.end());
    ++out.dropped_clauses;
    out.diagnostics.push_back({text::Join(rest, " / "), "incomplete group"});
  }
  return out;
}

ParsedOutput ParseMaskOutput(std::string_view raw, const TemplateConfig& cfg,
                             const Verbalizer& v) {
  std::size_t at = raw.rfind(cfg.separator);
  std::size_t width = cfg.separator.size();
  if (at == std::string_view::npos) {
    const std::string_view bare = TrimmedOrSelf(cfg.separator);
    at = raw.rfind(bare);
    width = bare.size();
  }
  if (at == std::string_view::npos || width == 0) {
    ParsedOutput out = ParseTraditionalOutput(raw, cfg, v);
    out.diagnostics.insert(out.diagnostics.begin(),
                           {std::string(raw), "separator missing"});
    return out;
  }
  return ParseTraditionalOutput(raw.substr(at + width), cfg, v);
}

ParsedOutput ParseSeq2SeqOutput(std::string_view raw, const TemplateConfig& cfg,
                                const Verbalizer& v) {
  switch (cfg.regime) {
    case Regime::kSentinel:
      return ParseSentinelOutput(raw, cfg, v);
    case Regime::kMask:
      return ParseMaskOutput(raw, cfg, v);
    case Regime::kTraditional:
    case Regime::kMlm:
      break;
  }
  return ParseTraditionalOutput(raw, cfg, v);
}

std::string NormalizeTerm(std::string_view term) {
  return text::ToLower(text::CollapseWhitespace(term));
}

TaskPrediction ProjectTriplets(std::string_view example_id,
                               std::span<const OpinionTriplet> triplets,
                               Task task) {
  if (!IsTupleTask(task)) {
    throw ValidationError(std::string(TaskName(task)) +
                          " is not projected from triplets");
  }
  TaskPrediction p;
  p.example_id = std::string(example_id);
  p.task = task;
  for (const OpinionTriplet& t : triplets) {
    std::optional<std::string> term;
    if (t.term) term = NormalizeTerm(*t.term);
    switch (task) {
      case Task::kAcd:
        p.items.insert({t.category, std::nullopt, std::nullopt});
        break;
      case Task::kAte:
        if (term) p.items.insert({std::nullopt, std::move(term), std::nullopt});
        break;
      case Task::kActe:
        p.items.insert({t.category, std::move(term), std::nullopt});
        break;
      case Task::kTasd:
        p.items.insert({t.category, std::move(term), t.polarity});
        break;
      case Task::kApd:
      case Task::kSc:
        break;
    }
  }
  return p;
}

TaskPrediction ProjectTask(std::string_view example_id,
                           const ParsedOutput& parsed, Task task) {
  TaskPrediction p = ProjectTriplets(example_id, parsed.triplets, task);
  p.dropped = parsed.dropped_clauses;
  return p;
}

TaskPrediction PolarityPrediction(std::string_view example_id, Task task,
                                  std::optional<Polarity> polarity) {
  if (task != Task::kApd && task != Task::kSc) {
    throw ValidationError(std::string(TaskName(task)) +
                          " is not a polarity classification task");
  }
  TaskPrediction p;
  p.example_id = std::string(example_id);
  p.task = task;
  if (polarity) {
    p.items.insert({std::nullopt, std::nullopt, *polarity});
  } else {
    p.dropped = 1;
  }
  return p;
}

Polarity ParseMlmOutput(std::string_view top_token, const Verbalizer& v) {
  if (auto p = v.Inverse(top_token)) return *p;
  throw Error("unconstrained backend output: '" + std::string(top_token) +
              "' is not a verbalizer word");
}

std::optional<Polarity> ParseClassifierOutput(std::string_view output) {
  return PolarityFromName(text::ToLower(text::Trim(output)));
}

}  // namespace absa
