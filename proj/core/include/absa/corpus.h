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

#ifndef ABSA_CORPUS_H_
#define ABSA_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "absa/errors.h"
#include "absa/types.h"

namespace absa {

// 0-1 stars negative, 2-3 neutral, 4-5 positive.
Polarity StarToPolarity(int stars);

// SemEval-2016 style review XML. Every <Opinion> becomes one triplet and
// target="NULL" (or a missing target) becomes the absent term. Categories
// outside `allowed` raise ValidationError; malformed XML raises ParseError
// carrying the line number. Sentence order follows the file.
std::vector<AbsaSentence> ParseAbsaXml(std::istream& in,
                                       const CategorySet& allowed);
std::vector<AbsaSentence> LoadAbsaCorpus(const std::filesystem::path& path,
                                         const CategorySet& allowed);

// Every category used by any opinion in the file, without validation.
CategorySet ObservedCategories(const std::filesystem::path& path);

// Writes sentences back in the same XML dialect. Consecutive sentences with
// the same review_id share a <Review> element.
void WriteAbsaXml(std::ostream& out, std::span<const AbsaSentence> sentences);

// UTF-8 TSV with header "label<TAB>text" and an optional third "stars"
// column. Documents get ids "doc-<row>" with 1-based data rows.
std::vector<PolarityDocument> ParsePolarityTsv(std::istream& in);
std::vector<PolarityDocument> LoadPolarityCorpus(
    const std::filesystem::path& path);

class SplitSpec {
 public:
  enum class Kind { kFull, kFewShot, kZeroShot };

  static SplitSpec Full() { return SplitSpec(Kind::kFull, 0); }
  static SplitSpec ZeroShot() { return SplitSpec(Kind::kZeroShot, 0); }
  // n must be positive.
  static SplitSpec FewShot(std::size_t n);

  Kind kind() const { return kind_; }
  std::size_t n() const { return n_; }
  // "full", "few-shot 10" or "zero-shot".
  std::string Describe() const;

  bool operator==(const SplitSpec&) const = default;

 private:
  SplitSpec(Kind kind, std::size_t n) : kind_(kind), n_(n) {}

  Kind kind_;
  std::size_t n_;
};

// Few-shot sets are the first n records in stored order; the corpus is never
// shuffled.
template <typename T>
std::vector<T> MakeSplit(std::span<const T> corpus, const SplitSpec& spec) {
  switch (spec.kind()) {
    case SplitSpec::Kind::kFull:
      return {corpus.begin(), corpus.end()};
    case SplitSpec::Kind::kZeroShot:
      return {};
    case SplitSpec::Kind::kFewShot:
      if (spec.n() > corpus.size()) {
        throw ValidationError("few-shot size " + std::to_string(spec.n()) +
                              " exceeds training set size " +
                              std::to_string(corpus.size()));
      }
      return {corpus.begin(), corpus.begin() + spec.n()};
  }
  return {};
}

template <typename T>
struct HeldOut {
  std::vector<T> train;
  std::vector<T> validation;
};

// Moves the last floor(fraction * size) records into a validation part.
template <typename T>
HeldOut<T> HoldOutTail(std::vector<T> records, double fraction) {
  if (!(fraction >= 0.0 && fraction < 1.0)) {
    throw ValidationError("validation fraction must be in [0, 1)");
  }
  const auto n_val = static_cast<std::size_t>(
      static_cast<double>(records.size()) * fraction);
  HeldOut<T> out;
  const auto cut = records.end() - static_cast<std::ptrdiff_t>(n_val);
  out.validation.assign(std::make_move_iterator(cut),
                        std::make_move_iterator(records.end()));
  records.erase(cut, records.end());
  out.train = std::move(records);
  return out;
}

// One APD example per gold triplet, id "<sentence_id>#<k>". Sentences
// without triplets yield nothing.
std::vector<ClassificationExample> ApdExamples(
    std::span<const AbsaSentence> sentences);
std::vector<ClassificationExample> ScExamples(
    std::span<const PolarityDocument> documents);

// NFC, whitespace runs collapsed to one space, trimmed.
std::string NormalizeForDedup(std::string_view review);

class DedupFilter {
 public:
  explicit DedupFilter(std::span<const std::string> annotated);

  bool IsAnnotated(std::string_view review) const;
  std::size_t size() const { return normalized_.size(); }

 private:
  std::unordered_set<std::string> normalized_;
};

struct DedupStats {
  std::size_t read = 0;
  std::size_t kept = 0;
  std::size_t removed = 0;
};

// Streams one review per line from `raw` to `out`, dropping annotated
// reviews. Kept lines are written unchanged and in order.
DedupStats DedupStream(std::istream& raw, std::ostream& out,
                       const DedupFilter& filter);

}  // namespace absa

#endif  // ABSA_CORPUS_H_
