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

#ifndef ABSA_CONFIG_H_
#define ABSA_CONFIG_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "absa/prompting.h"
#include "absa/types.h"

namespace absa {

// Contents of a key-value (INI) configuration file:
//
//   [prompting]            language, mlm_language, separator, triplet_joiner,
//                          max_input_units, mlm_trailing_period
//   [seq2seq_verbalizer]   positive / negative / neutral words
//   [mlm_verbalizer]       positive / negative / neutral words
//   [categories]           allowed = FOOD#QUALITY, SERVICE#GENERAL, ...
//   [category_names_en]    FOOD#QUALITY = Food quality
//   [category_names_cs]    FOOD#QUALITY = Kvalita jídla
//   [experiment]           read by the command line tool
//
// Values may be wrapped in double quotes to keep surrounding spaces.
struct ToolkitConfig {
  Language seq2seq_language = Language::kEn;
  Language mlm_language = Language::kCs;
  std::string separator = " | ";
  std::string triplet_joiner = "; ";
  std::size_t max_input_units = 400;
  bool mlm_trailing_period = true;

  Verbalizer seq2seq_verbalizer = Verbalizer::Seq2SeqEnglish();
  Verbalizer mlm_verbalizer = Verbalizer::MlmCzech();

  std::optional<CategorySet> allowed_categories;
  std::map<AspectCategory, std::string> names_en;
  std::map<AspectCategory, std::string> names_cs;

  std::map<std::string, std::string> experiment;
};

ToolkitConfig ParseToolkitConfig(std::istream& in);
ToolkitConfig LoadToolkitConfig(const std::filesystem::path& path);

// Template settings for `regime`. The label language is seq2seq_language for
// seq2seq regimes and mlm_language for mlm. English display names default to
// CategoryRenderer::DefaultDisplay; Czech names must all be configured.
TemplateConfig MakeTemplateConfig(const ToolkitConfig& config, Regime regime,
                                  const CategorySet& allowed);

// The verbalizer matching `regime`.
const Verbalizer& VerbalizerFor(const ToolkitConfig& config, Regime regime);

}  // namespace absa

#endif  // ABSA_CONFIG_H_
