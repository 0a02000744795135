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

#ifndef ABSA_PARSING_H_
#define ABSA_PARSING_H_

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absa/prompting.h"
#include "absa/types.h"

namespace absa {

struct ClauseDiagnostic {
  std::string clause;
  std::string reason;

  bool operator==(const ClauseDiagnostic&) const = default;
};

// Triplets recovered from generated text. Every attempted clause ends up
// either in `triplets` or counted in `dropped_clauses`; `diagnostics` holds
// one entry per dropped clause plus notes that dropped nothing (a missing
// separator, text before the first sentinel).
struct ParsedOutput {
  std::vector<OpinionTriplet> triplets;
  std::size_t dropped_clauses = 0;
  std::vector<ClauseDiagnostic> diagnostics;

  bool operator==(const ParsedOutput&) const = default;
};

// Seq2seq parsers are total: they never throw on any input string.
ParsedOutput ParseTraditionalOutput(std::string_view raw,
                                    const TemplateConfig& cfg,
                                    const Verbalizer& v);
ParsedOutput ParseSentinelOutput(std::string_view raw,
                                 const TemplateConfig& cfg,
                                 const Verbalizer& v);
ParsedOutput ParseMaskOutput(std::string_view raw, const TemplateConfig& cfg,
                             const Verbalizer& v);
// Dispatches on cfg.regime.
ParsedOutput ParseSeq2SeqOutput(std::string_view raw, const TemplateConfig& cfg,
                                const Verbalizer& v);

// Lower-cased, whitespace-collapsed form used for term equality.
std::string NormalizeTerm(std::string_view term);

// One element of a task prediction. Which fields are set depends on the task:
// ACD category; ATE term; ACTE category + term (absent term is NULL); TASD
// all three; APD and SC polarity.
struct TaskItem {
  std::optional<AspectCategory> category;
  std::optional<std::string> term;
  std::optional<Polarity> polarity;

  auto operator<=>(const TaskItem&) const = default;
};

struct TaskPrediction {
  std::string example_id;
  Task task = Task::kTasd;
  std::set<TaskItem> items;
  std::size_t dropped = 0;

  bool operator==(const TaskPrediction&) const = default;
};

// Projects triplets onto a tuple task with set semantics. ATE drops NULL
// terms. Throws ValidationError for APD and SC.
TaskPrediction ProjectTriplets(std::string_view example_id,
                               std::span<const OpinionTriplet> triplets,
                               Task task);
TaskPrediction ProjectTask(std::string_view example_id,
                           const ParsedOutput& parsed, Task task);

// A single-label prediction for APD or SC; nullopt yields an empty item set,
// which never matches gold.
TaskPrediction PolarityPrediction(std::string_view example_id, Task task,
                                  std::optional<Polarity> polarity);

// Inverts the answer-slot fill. Throws Error("unconstrained backend output")
// for words outside the verbalizer.
Polarity ParseMlmOutput(std::string_view top_token, const Verbalizer& v);

// Label name produced by a traditional classifier ("positive", ...).
std::optional<Polarity> ParseClassifierOutput(std::string_view output);

}  // namespace absa

#endif  // ABSA_PARSING_H_
