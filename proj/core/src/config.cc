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

#include "absa/config.h"

#include <fstream>
#include <istream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "absa/errors.h"
#include "absa/text.h"

namespace absa {
namespace {

namespace pt = boost::property_tree;

std::string Unquote(const std::string& value) {
  std::string_view v = text::Trim(value);
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
    v = v.substr(1, v.size() - 2);
  }
  return std::string(v);
}

std::optional<std::string> Get(const pt::ptree& tree, const std::string& section,
                               const std::string& key) {
  auto s = tree.get_child_optional(pt::ptree::path_type(section, '\0'));
  if (!s) return std::nullopt;
  auto v = s->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
  if (!v) return std::nullopt;
  return Unquote(*v);
}

bool ParseBool(const std::string& v, const std::string& key) {
  const std::string lower = text::ToLower(v);
  if (lower == "true" || lower == "1" || lower == "yes") return true;
  if (lower == "false" || lower == "0" || lower == "no") return false;
  throw ValidationError("config key " + key + ": expected a boolean, got '" +
                        v + "'");
}

std::size_t ParsePositive(const std::string& v, const std::string& key) {
  std::size_t used = 0;
  long long n = 0;
  try {
    n = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || n <= 0) {
    throw ValidationError("config key " + key +
                          ": expected a positive integer, got '" + v + "'");
  }
  return static_cast<std::size_t>(n);
}

Verbalizer ReadVerbalizer(const pt::ptree& tree, const std::string& section,
                          const Verbalizer& fallback) {
  auto word = [&](Polarity p) {
    return Get(tree, section, std::string(PolarityName(p)))
        .value_or(fallback.Word(p));
  };
  return Verbalizer(word(Polarity::kPositive), word(Polarity::kNegative),
                    word(Polarity::kNeutral));
}

std::map<AspectCategory, std::string> ReadNames(const pt::ptree& tree,
                                                const std::string& section) {
  std::map<AspectCategory, std::string> names;
  auto s = tree.get_child_optional(pt::ptree::path_type(section, '\0'));
  if (!s) return names;
  for (const auto& [key, value] : *s) {
    names[AspectCategory::Parse(key)] = Unquote(value.data());
  }
  return names;
}

}  // namespace

ToolkitConfig ParseToolkitConfig(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError("malformed config: " + e.message(), e.line());
  }
  ToolkitConfig c;
  if (auto v = Get(tree, "prompting", "language")) {
    c.seq2seq_language = ParseLanguage(*v);
  }
  if (auto v = Get(tree, "prompting", "mlm_language")) {
    c.mlm_language = ParseLanguage(*v);
  }
  if (auto v = Get(tree, "prompting", "separator")) c.separator = *v;
  if (auto v = Get(tree, "prompting", "triplet_joiner")) c.triplet_joiner = *v;
  if (auto v = Get(tree, "prompting", "max_input_units")) {
    c.max_input_units = ParsePositive(*v, "prompting.max_input_units");
  }
  if (auto v = Get(tree, "prompting", "mlm_trailing_period")) {
    c.mlm_trailing_period = ParseBool(*v, "prompting.mlm_trailing_period");
  }
  if (c.separator.empty()) throw ValidationError("separator must not be empty");
  if (c.triplet_joiner.empty()) {
    throw ValidationError("triplet_joiner must not be empty");
  }
  c.seq2seq_verbalizer =
      ReadVerbalizer(tree, "seq2seq_verbalizer", c.seq2seq_verbalizer);
  c.mlm_verbalizer = ReadVerbalizer(tree, "mlm_verbalizer", c.mlm_verbalizer);
  if (auto v = Get(tree, "categories", "allowed")) {
    c.allowed_categories = CategorySet::FromList(*v);
  }
  c.names_en = ReadNames(tree, "category_names_en");
  c.names_cs = ReadNames(tree, "category_names_cs");
  if (auto s = tree.get_child_optional("experiment")) {
    for (const auto& [key, value] : *s) c.experiment[key] = Unquote(value.data());
  }
  return c;
}

ToolkitConfig LoadToolkitConfig(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config " + path.string());
  try {
    return ParseToolkitConfig(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

TemplateConfig MakeTemplateConfig(const ToolkitConfig& config, Regime regime,
                                  const CategorySet& allowed) {
  TemplateConfig t;
  t.regime = regime;
  t.language =
      regime == Regime::kMlm ? config.mlm_language : config.seq2seq_language;
  t.categories = t.language == Language::kEn
                     ? CategoryRenderer::Derived(allowed, config.names_en)
                     : CategoryRenderer::FromTable(allowed, config.names_cs);
  t.separator = config.separator;
  t.triplet_joiner = config.triplet_joiner;
  t.max_input_units = config.max_input_units;
  t.mlm_trailing_period = config.mlm_trailing_period;
  return t;
}

const Verbalizer& VerbalizerFor(const ToolkitConfig& config, Regime regime) {
  return regime == Regime::kMlm ? config.mlm_verbalizer
                                : config.seq2seq_verbalizer;
}

}  // namespace absa
