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

#include <gtest/gtest.h>

#include "absa/errors.h"
#include "test_support.h"

namespace absa {
namespace {

const AspectCategory kFoodQuality("FOOD", "QUALITY");
const AspectCategory kService("SERVICE", "GENERAL");

TemplateConfig Config(Regime regime) {
  TemplateConfig cfg;
  cfg.regime = regime;
  cfg.categories = CategoryRenderer::Derived(testing::FixtureCategories());
  return cfg;
}

const Verbalizer& En() {
  static const Verbalizer v = Verbalizer::Seq2SeqEnglish();
  return v;
}

TEST(TraditionalParseTest, SingleClause) {
  const auto out = ParseTraditionalOutput(
      "Food quality is great, given the expression: steak",
      Config(Regime::kTraditional), En());
  ASSERT_EQ(out.triplets.size(), 1u);
  EXPECT_EQ(out.triplets[0],
            OpinionTriplet(kFoodQuality, "steak", Polarity::kPositive));
  EXPECT_EQ(out.dropped_clauses, 0u);
}

TEST(TraditionalParseTest, NullTermAndSeveralClauses) {
  const auto out = ParseTraditionalOutput(
      "Food quality is great, given the expression: steak; Service general is "
      "bad, given the expression: NULL",
      Config(Regime::kTraditional), En());
  ASSERT_EQ(out.triplets.size(), 2u);
  EXPECT_FALSE(out.triplets[1].term.has_value());
  EXPECT_EQ(out.triplets[1].polarity, Polarity::kNegative);
}

TEST(TraditionalParseTest, TolerantOfSpacingAndCase) {
  const auto out = ParseTraditionalOutput(
      "  food QUALITY is Great, given the expression:steak ;;",
      Config(Regime::kTraditional), En());
  ASSERT_EQ(out.triplets.size(), 1u);
  EXPECT_EQ(out.triplets[0].term, "steak");
}

TEST(TraditionalParseTest, MalformedClausesDroppedWithReasons) {
  const auto out = ParseTraditionalOutput(
      "Food quality is great, given the expression: steak; Food texture is "
      "great, given the expression: x; Food quality is superb, given the "
      "expression: y; Food quality is great, given the expression: ; nonsense",
      Config(Regime::kTraditional), En());
  EXPECT_EQ(out.triplets.size(), 1u);
  EXPECT_EQ(out.dropped_clauses, 4u);
  ASSERT_EQ(out.diagnostics.size(), 4u);
  EXPECT_EQ(out.diagnostics[0].reason, "unknown category");
  EXPECT_EQ(out.diagnostics[1].reason, "unknown polarity word");
  EXPECT_EQ(out.diagnostics[2].reason, "empty term");
  EXPECT_EQ(out.diagnostics[3].reason, "clause does not match label grammar");
  EXPECT_EQ(out.diagnostics[3].clause, "nonsense");
}

TEST(TraditionalParseTest, EmptyOutputIsEmpty) {
  const auto out =
      ParseTraditionalOutput("", Config(Regime::kTraditional), En());
  EXPECT_TRUE(out.triplets.empty());
  EXPECT_EQ(out.dropped_clauses, 0u);
}

TEST(SentinelParseTest, GroupsOfThree) {
  const auto out = ParseSentinelOutput(
      "<extra_id_0> Food quality <extra_id_1> great <extra_id_2> steak "
      "<extra_id_3> Service general <extra_id_4> bad <extra_id_5> NULL "
      "<extra_id_6>",
      Config(Regime::kSentinel), En());
  ASSERT_EQ(out.triplets.size(), 2u);
  EXPECT_EQ(out.triplets[1], OpinionTriplet(kService, std::nullopt,
                                            Polarity::kNegative));
  EXPECT_TRUE(out.diagnostics.empty());
}

TEST(SentinelParseTest, MissingTerminatorAccepted) {
  const auto out = ParseSentinelOutput(
      "<extra_id_0> Food quality <extra_id_1> ok <extra_id_2> steak",
      Config(Regime::kSentinel), En());
  ASSERT_EQ(out.triplets.size(), 1u);
  EXPECT_EQ(out.triplets[0].polarity, Polarity::kNeutral);
}

TEST(SentinelParseTest, IncompleteGroupDropped) {
  const auto out = ParseSentinelOutput(
      "<extra_id_0> Food quality <extra_id_1> great <extra_id_2> steak "
      "<extra_id_3> Service general <extra_id_4> bad <extra_id_5>",
      Config(Regime::kSentinel), En());
  EXPECT_EQ(out.triplets.size(), 1u);
  EXPECT_EQ(out.dropped_clauses, 1u);
  EXPECT_EQ(out.diagnostics.back().reason, "incomplete group");
}

TEST(SentinelParseTest, LeadingTextIsDiagnosedNotDropped) {
  const auto out = ParseSentinelOutput(
      "garbage <extra_id_0> Food quality <extra_id_1> great <extra_id_2> x",
      Config(Regime::kSentinel), En());
  EXPECT_EQ(out.triplets.size(), 1u);
  EXPECT_EQ(out.dropped_clauses, 0u);
  ASSERT_EQ(out.diagnostics.size(), 1u);
  EXPECT_EQ(out.diagnostics[0].clause, "garbage");
}

TEST(SentinelParseTest, EmptyTarget) {
  const auto out =
      ParseSentinelOutput("<extra_id_0>", Config(Regime::kSentinel), En());
  EXPECT_TRUE(out.triplets.empty());
  EXPECT_EQ(out.dropped_clauses, 0u);
}

TEST(MaskParseTest, TakesTextAfterSeparator) {
  const auto out = ParseMaskOutput(
      "The steak was very tasty | Food quality is great, given the expression: "
      "steak",
      Config(Regime::kMask), En());
  ASSERT_EQ(out.triplets.size(), 1u);
  EXPECT_TRUE(out.diagnostics.empty());
}

TEST(MaskParseTest, BareSeparatorFallback) {
  const auto out = ParseMaskOutput(
      "Tasty|Food quality is great, given the expression: steak",
      Config(Regime::kMask), En());
  ASSERT_EQ(out.triplets.size(), 1u);
}

TEST(MaskParseTest, MissingSeparatorDiagnosed) {
  const auto out = ParseMaskOutput(
      "Food quality is great, given the expression: steak",
      Config(Regime::kMask), En());
  ASSERT_EQ(out.triplets.size(), 1u);
  ASSERT_FALSE(out.diagnostics.empty());
  EXPECT_EQ(out.diagnostics[0].reason, "separator missing");
}

TEST(ProjectionTest, TaskProjections) {
  const std::vector<OpinionTriplet> triplets = {
      OpinionTriplet(kFoodQuality, "Steak", Polarity::kPositive),
      OpinionTriplet(kFoodQuality, "steak", Polarity::kPositive),
      OpinionTriplet(kFoodQuality, std::nullopt, Polarity::kNegative),
      OpinionTriplet(kService, "waiter", Polarity::kNegative)};
  EXPECT_EQ(ProjectTriplets("s", triplets, Task::kAcd).items.size(), 2u);
  // NULL terms are not extracted terms; "Steak" and "steak" coincide.
  const auto ate = ProjectTriplets("s", triplets, Task::kAte);
  EXPECT_EQ(ate.items.size(), 2u);
  EXPECT_TRUE(ate.items.count({std::nullopt, "steak", std::nullopt}));
  EXPECT_EQ(ProjectTriplets("s", triplets, Task::kActe).items.size(), 3u);
  EXPECT_EQ(ProjectTriplets("s", triplets, Task::kTasd).items.size(), 3u);
  EXPECT_THROW(ProjectTriplets("s", triplets, Task::kSc), ValidationError);
}

TEST(ProjectionTest, DroppedCarriedOver) {
  ParsedOutput parsed;
  parsed.dropped_clauses = 2;
  EXPECT_EQ(ProjectTask("s", parsed, Task::kTasd).dropped, 2u);
}

TEST(ProjectionTest, NormalizeTerm) {
  EXPECT_EQ(NormalizeTerm("  Hot   DOG "), "hot dog");
  EXPECT_EQ(NormalizeTerm("Svíčková"), "svíčková");
}

TEST(PolarityPredictionTest, MissingPolarityCountsAsDropped) {
  const auto p = PolarityPrediction("d", Task::kSc, std::nullopt);
  EXPECT_TRUE(p.items.empty());
  EXPECT_EQ(p.dropped, 1u);
  EXPECT_THROW(PolarityPrediction("d", Task::kAcd, Polarity::kPositive),
               ValidationError);
}

TEST(MlmParseTest, VerbalizerInverse) {
  const Verbalizer cs = Verbalizer::MlmCzech();
  EXPECT_EQ(ParseMlmOutput("dobrý", cs), Polarity::kPositive);
  EXPECT_EQ(ParseMlmOutput("ok", cs), Polarity::kNeutral);
  EXPECT_EQ(ParseMlmOutput("špatný", cs), Polarity::kNegative);
  EXPECT_THROW(ParseMlmOutput("super", cs), Error);
}

TEST(ClassifierParseTest, LabelNames) {
  EXPECT_EQ(ParseClassifierOutput(" Positive\n"), Polarity::kPositive);
  EXPECT_FALSE(ParseClassifierOutput("great").has_value());
}

}  // namespace
}  // namespace absa
