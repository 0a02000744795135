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

#ifndef ABSA_TEXT_H_
#define ABSA_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

// UTF-8 string helpers shared by the corpus, prompting and parsing code.
namespace absa::text {

// Strips ASCII whitespace from both ends.
std::string_view Trim(std::string_view s);

// Full Unicode lower-casing (root locale), so "DOBRÝ" becomes "dobrý".
std::string ToLower(std::string_view utf8);

std::string NormalizeNfc(std::string_view utf8);

// Replaces every run of Unicode white space with one ASCII space and trims.
std::string CollapseWhitespace(std::string_view utf8);

// Splits on runs of ASCII whitespace; never returns empty pieces.
std::vector<std::string_view> SplitWords(std::string_view s);

// Splits on every occurrence of `delim`; keeps empty pieces.
std::vector<std::string_view> Split(std::string_view s, std::string_view delim);

std::string Join(const std::vector<std::string>& parts, std::string_view sep);

bool IsValidUtf8(std::string_view s);

}  // namespace absa::text

#endif  // ABSA_TEXT_H_
