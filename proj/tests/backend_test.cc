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

#include "absa/backend.h"

#include <gtest/gtest.h>

#include <thread>

#include "absa/corpus.h"
#include "absa/errors.h"
#include "absa/parsing.h"
#include "test_support.h"

namespace absa {
namespace {

TemplateConfig Config(Regime regime) {
  TemplateConfig cfg;
  cfg.regime = regime;
  cfg.categories = CategoryRenderer::Derived(testing::FixtureCategories());
  return cfg;
}

TemplateConfig CzechMlm() {
  const ToolkitConfig tk = testing::LoadFixtureConfig();
  return MakeTemplateConfig(tk, Regime::kMlm, *tk.allowed_categories);
}

TEST(BackendRequestTest, FillMaskNeedsExactlyOneSlot) {
  EXPECT_NO_THROW(BackendRequest::FillMask("x", "Je to [MASK] film.", {"a"}));
  EXPECT_THROW(BackendRequest::FillMask("x", "Je to film.", {"a"}),
               ValidationError);
  EXPECT_THROW(BackendRequest::FillMask("x", "[MASK] [MASK]", {"a"}),
               ValidationError);
}

TEST(GoldStoreTest, DuplicateAndUnknownIds) {
  GoldStore store(Config(Regime::kTraditional), Verbalizer::Seq2SeqEnglish());
  const auto sentences = testing::LoadFixture();
  store.Add(sentences[0]);
  EXPECT_THROW(store.Add(sentences[0]), ValidationError);
  EXPECT_THROW(store.Find("nope"), Error);
}

TEST(GoldOracleTest, EchoesExpectedTarget) {
  GoldStore store(Config(Regime::kSentinel), Verbalizer::Seq2SeqEnglish());
  for (const auto& s : testing::LoadFixture()) {
    const PromptRendering& r = store.Add(s);
    const GoldOracleBackend gold(store);
    EXPECT_EQ(gold.Call(BackendRequest::Generate(r.example_id, r.model_input))
                  .output,
              r.expected_target);
  }
  const GoldOracleBackend gold(store);
  EXPECT_THROW(gold.Call(BackendRequest::Generate("missing", "x")), Error);
  EXPECT_THROW(gold.Call(BackendRequest::Generate("1:0", "different input")),
               Error);
}

TEST(GoldOracleTest, FillMaskReturnsGoldWord) {
  GoldStore store(CzechMlm(), Verbalizer::MlmCzech());
  const ClassificationExample e{"d1", "Skvělý film.", std::nullopt,
                                Polarity::kPositive};
  const PromptRendering& r = store.Add(e, Task::kSc);
  const GoldOracleBackend gold(store);
  const auto response = gold.Call(BackendRequest::FillMask(
      "d1", r.model_input, Verbalizer::MlmCzech().Candidates()));
  EXPECT_EQ(response.chosen, "dobrý");
  EXPECT_EQ(response.scores.size(), 3u);
  // Gold word outside the offered candidates is a contract violation.
  EXPECT_THROW(gold.Call(BackendRequest::FillMask("d1", r.model_input,
                                                  {"ok", "špatný"})),
               Error);
}

TEST(CorruptionOracleTest, RateValidation) {
  GoldStore store(Config(Regime::kTraditional), Verbalizer::Seq2SeqEnglish());
  EXPECT_THROW(CorruptionOracleBackend(store, -0.1, 1), ValidationError);
  EXPECT_THROW(CorruptionOracleBackend(store, 1.5, 1), ValidationError);
}

TEST(CorruptionOracleTest, DegenerateRates) {
  GoldStore store(Config(Regime::kTraditional), Verbalizer::Seq2SeqEnglish());
  std::vector<BackendRequest> requests;
  for (const auto& s : testing::LoadFixture()) {
    const PromptRendering& r = store.Add(s);
    requests.push_back(BackendRequest::Generate(r.example_id, r.model_input));
  }
  const GoldOracleBackend gold(store);
  const CorruptionOracleBackend none(store, 0.0, 9);
  const CorruptionOracleBackend all(store, 1.0, 9);
  for (const auto& req : requests) {
    EXPECT_EQ(none.Call(req).output, gold.Call(req).output);
    EXPECT_EQ(all.Call(req).output, "");
  }
}

TEST(CorruptionOracleTest, AlwaysFlipsAtRateOne) {
  GoldStore store(CzechMlm(), Verbalizer::MlmCzech());
  const auto docs = LoadPolarityCorpus(testing::PolarityTsv());
  const CorruptionOracleBackend flip(store, 1.0, 4);
  for (const auto& e : ScExamples(docs)) {
    const PromptRendering& r = store.Add(e, Task::kSc);
    const auto response = flip.Call(BackendRequest::FillMask(
        e.id, r.model_input, Verbalizer::MlmCzech().Candidates()));
    EXPECT_NE(response.chosen, r.expected_target);
    EXPECT_TRUE(Verbalizer::MlmCzech().Inverse(response.chosen).has_value());
  }
}

TEST(CorruptionOracleTest, DeterministicAndSeedDependent) {
  GoldStore store(Config(Regime::kMask), Verbalizer::Seq2SeqEnglish());
  std::vector<BackendRequest> requests;
  for (const auto& s : testing::LoadFixture()) {
    const PromptRendering& r = store.Add(s);
    requests.push_back(BackendRequest::Generate(r.example_id, r.model_input));
  }
  auto outputs = [&](std::uint64_t seed, std::size_t in_flight) {
    const CorruptionOracleBackend b(store, 0.5, seed);
    std::vector<std::string> out;
    for (const auto& r : RunRequests(b, requests, in_flight)) {
      out.push_back(r.output);
    }
    return out;
  };
  EXPECT_EQ(outputs(1, 1), outputs(1, 8));
  EXPECT_NE(outputs(1, 4), outputs(2, 4));
}

TEST(ArgmaxCandidateTest, TieBreakByCandidateOrder) {
  const std::vector<std::string> candidates = {"dobrý", "ok", "špatný"};
  EXPECT_EQ(ArgmaxCandidate({{"dobrý", 0.1}, {"ok", 0.7}, {"špatný", 0.2}},
                            candidates),
            "ok");
  EXPECT_EQ(ArgmaxCandidate({{"dobrý", 0.4}, {"ok", 0.4}, {"špatný", 0.2}},
                            candidates),
            "dobrý");
  EXPECT_FALSE(ArgmaxCandidate({{"dobrý", 0.4}}, candidates).has_value());
}

class CountingBackend : public Backend {
 public:
  BackendResponse Call(const BackendRequest& request) const override {
    const int now = ++in_flight_;
    int seen = peak_.load();
    while (now > seen && !peak_.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
    --in_flight_;
    if (request.input == "fail") throw Error("boom " + request.example_id);
    return {request.example_id, "", {}, 0};
  }
  std::string Describe() const override { return "counting"; }
  int peak() const { return peak_; }

 private:
  mutable std::atomic<int> in_flight_{0};
  mutable std::atomic<int> peak_{0};
};

TEST(RunRequestsTest, OrderPreservedAndConcurrencyBounded) {
  std::vector<BackendRequest> requests;
  for (int i = 0; i < 40; ++i) {
    requests.push_back(BackendRequest::Generate("e" + std::to_string(i), "x"));
  }
  const CountingBackend backend;
  const auto responses = RunRequests(backend, requests, 3);
  ASSERT_EQ(responses.size(), 40u);
  for (int i = 0; i < 40; ++i) EXPECT_EQ(responses[i].output, "e" + std::to_string(i));
  EXPECT_LE(backend.peak(), 3);
}

TEST(RunRequestsTest, EarliestErrorRethrown) {
  std::vector<BackendRequest> requests;
  for (int i = 0; i < 10; ++i) {
    requests.push_back(BackendRequest::Generate(
        "e" + std::to_string(i), i == 3 || i == 7 ? "fail" : "x"));
  }
  const CountingBackend backend;
  try {
    RunRequests(backend, requests, 4);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "boom e3");
  }
}

}  // namespace
}  // namespace absa
