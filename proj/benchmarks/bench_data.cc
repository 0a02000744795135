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

#include "bench_data.h"

#include <random>
#include <string>

namespace absa::bench {
namespace {

const char* const kCategories[] = {"FOOD#QUALITY", "SERVICE#GENERAL",
                                   "AMBIENCE#GENERAL", "RESTAURANT#PRICES",
                                   "DRINKS#QUALITY", "LOCATION#GENERAL"};
const char* const kWords[] = {"the",  "steak", "was",   "really", "good",
                              "but",  "staff", "slow",  "wine",   "list",
                              "crème brûlée", "view", "table", "noisy"};

}  // namespace

std::vector<AbsaSentence> Sentences(std::size_t n, std::size_t max_triplets) {
  std::mt19937_64 rng(12345);
  std::vector<AbsaSentence> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    AbsaSentence s;
    s.review_id = "r" + std::to_string(i);
    s.sentence_id = s.review_id + ":0";
    const std::size_t words = 8 + rng() % 24;
    for (std::size_t w = 0; w < words; ++w) {
      if (w > 0) s.text += ' ';
      s.text += kWords[rng() % std::size(kWords)];
    }
    const std::size_t k = 1 + rng() % max_triplets;
    for (std::size_t t = 0; t < k; ++t) {
      std::optional<std::string> term;
      if (rng() % 4 != 0) term = std::string(kWords[rng() % std::size(kWords)]) + " " + std::to_string(t);
      s.triplets.emplace_back(AspectCategory::Parse(kCategories[rng() % std::size(kCategories)]),
                              term, kPolarities[rng() % 3]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

TemplateConfig Config(Regime regime) {
  TemplateConfig cfg;
  cfg.regime = regime;
  CategorySet set;
  for (const char* c : kCategories) set.insert(AspectCategory::Parse(c));
  cfg.categories = CategoryRenderer::Derived(set);
  return cfg;
}

}  // namespace absa::bench
