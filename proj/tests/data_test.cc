/*
 * Copyright 2026 The eqodds Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "eqodds/data.h"

#include <gtest/gtest.h>

#include <sstream>

#include "eqodds/errors.h"
#include "test_support.h"

namespace eqodds {
namespace {

LabeledPredictions ParseCsv(const std::string& text) {
  std::istringstream in(text);
  return LoadPredictions(in, DataFormat::kCsv);
}

LabeledPredictions ParseJson(const std::string& text) {
  std::istringstream in(text);
  return LoadPredictions(in, DataFormat::kJson);
}

TEST(LoadPredictionsTest, MinimalCsv) {
  const auto data = ParseCsv("score,label,group\n0.9,1,A\n0.2,0,A");
  ASSERT_EQ(data.size(), 2u);
  EXPECT_EQ(data.groups(), std::vector<std::string>{"A"});
  EXPECT_DOUBLE_EQ(data.score(0), 0.9);
  EXPECT_EQ(data.label(1), 0);
}

TEST(LoadPredictionsTest, OutOfRangeScoreReportsLine) {
  try {
    ParseCsv("score,label,group\n0.5,1,A\n1.3,0,A\n");
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(LoadPredictionsTest, RejectsBadLabelAndMalformedFields) {
  EXPECT_THROW(ParseCsv("score,label,group\n0.5,2,A\n"), DomainError);
  EXPECT_THROW(ParseCsv("score,label,group\nabc,1,A\n"), ParseError);
  EXPECT_THROW(ParseCsv("score,label,group\n0.5,1\n"), ParseError);
  EXPECT_THROW(ParseCsv("score,group\n0.5,A\n"), SchemaError);
  EXPECT_THROW(ParseCsv("score,label,group\n"), SchemaError);
  EXPECT_THROW(ParseCsv(""), SchemaError);
}

TEST(LoadPredictionsTest, ColumnsInAnyOrderWithExtras) {
  const auto data = ParseCsv("group,id,label,score\nB,7,1,0.25\nA,8,0,1\n");
  ASSERT_EQ(data.size(), 2u);
  EXPECT_EQ(data.group_name(data.group_id(0)), "B");
  EXPECT_DOUBLE_EQ(data.score(0), 0.25);
  EXPECT_DOUBLE_EQ(data.score(1), 1.0);
}

TEST(LoadPredictionsTest, TwelveRowFixtureCounts) {
  // Hand count: A has 4 positives and 2 negatives, B 1 positive, 5 negatives.
  const auto data = ParseCsv(
      "score,label,group\n"
      "0.9,1,A\n0.8,1,A\n0.7,1,A\n0.4,1,A\n0.3,0,A\n0.6,0,A\n"
      "0.2,0,B\n0.1,0,B\n0.5,1,B\n0.3,0,B\n0.4,0,B\n0.0,0,B\n");
  ASSERT_EQ(data.size(), 12u);
  EXPECT_EQ(data.groups(), (std::vector<std::string>{"A", "B"}));
  const int a = *data.FindGroup("A");
  const int b = *data.FindGroup("B");
  EXPECT_EQ(data.GroupLabelCount(a, 1), 4u);
  EXPECT_EQ(data.GroupLabelCount(a, 0), 2u);
  EXPECT_EQ(data.GroupLabelCount(b, 1), 1u);
  EXPECT_EQ(data.GroupLabelCount(b, 0), 5u);
  EXPECT_EQ(data.LabelCount(1), 5u);
  EXPECT_FALSE(data.FindGroup("C").has_value());
}

TEST(LoadPredictionsTest, JsonRowsAcceptIntegerGroups) {
  const auto data = ParseJson(
      R"([{"score": 0.5, "label": 1, "group": 3},
          {"score": 0.1, "label": 0, "group": "x"}])");
  EXPECT_EQ(data.groups(), (std::vector<std::string>{"3", "x"}));
  EXPECT_THROW(ParseJson(R"({"score": 1})"), SchemaError);
  EXPECT_THROW(ParseJson(R"([{"score": 0.5, "label": 1}])"), SchemaError);
  EXPECT_THROW(ParseJson(R"([{"score": "a", "label": 1, "group": "A"}])"),
               ParseError);
  EXPECT_THROW(ParseJson("[1,"), ParseError);
}

TEST(LoadPredictionsTest, FormatFromPathAndName) {
  EXPECT_EQ(FormatFromPath("x/data.json"), DataFormat::kJson);
  EXPECT_EQ(FormatFromPath("data.csv"), DataFormat::kCsv);
  EXPECT_EQ(FormatFromPath("data"), DataFormat::kCsv);
  EXPECT_EQ(ParseDataFormat("json"), DataFormat::kJson);
  EXPECT_FALSE(ParseDataFormat("xml").has_value());
}

TEST(LoadPredictionsTest, RoundTripIsIdentity) {
  testing::Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const auto data = trial % 2 == 0
                          ? testing::RandomSmallDataset(rng, 40, 1, 3)
                          : testing::GaussianDataset(rng, 50, {0.3, 0.6},
                                                     {1.0, 2.0});
    for (auto format : {DataFormat::kCsv, DataFormat::kJson}) {
      std::stringstream buffer;
      WritePredictions(data, buffer, format);
      EXPECT_EQ(LoadPredictions(buffer, format), data);
    }
  }
}

TEST(PrevalencesTest, SingleGroup) {
  const auto data = testing::FromTriples(
      {{0.1, 0, "A"}, {0.2, 0, "A"}, {0.8, 1, "A"}, {0.9, 1, "A"}});
  const auto p = ComputePrevalences(data);
  EXPECT_DOUBLE_EQ(p.p(0), 0.5);
  EXPECT_DOUBLE_EQ(p.p(1), 0.5);
  EXPECT_DOUBLE_EQ(p.group_given(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(p.group_given(0, 1), 1.0);
}

TEST(PrevalencesTest, MissingClassIsDegenerate) {
  const auto data = testing::FromTriples({{0.1, 1, "A"}, {0.9, 1, "B"}});
  EXPECT_THROW(ComputePrevalences(data), DegenerateLabelError);
}

TEST(PrevalencesTest, DirectCounting) {
  const auto data = testing::FromTriples(
      {{0.9, 1, "A"}, {0.8, 1, "A"}, {0.7, 1, "A"}, {0.1, 0, "A"},
       {0.6, 1, "B"}, {0.2, 0, "B"}, {0.3, 0, "B"}, {0.4, 0, "B"}});
  const auto p = ComputePrevalences(data);
  EXPECT_DOUBLE_EQ(p.p(1), 0.5);
  EXPECT_DOUBLE_EQ(p.group_given(0, 1), 0.75);
  EXPECT_DOUBLE_EQ(p.group_given(0, 0), 0.25);
}

TEST(PrevalencesTest, ConditionalsSumToOne) {
  testing::Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p =
        ComputePrevalences(testing::RandomSmallDataset(rng, 40, 2, 3));
    EXPECT_NEAR(p.p(0) + p.p(1), 1.0, 1e-12);
    for (int y = 0; y < 2; ++y) {
      double total = 0.0;
      for (std::size_t s = 0; s < p.num_groups(); ++s) {
        total += p.group_given(static_cast<int>(s), y);
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
    }
  }
}

TEST(LossSpecTest, ValidatesCosts) {
  EXPECT_NO_THROW(LossSpec::Create(0.0, 2.0));
  EXPECT_THROW(LossSpec::Create(-1.0, 2.0), UsageError);
  EXPECT_THROW(LossSpec::Create(0.0, 0.0), UsageError);
  EXPECT_DOUBLE_EQ(LossSpec::Create(1.0, 3.0).CalibratedThreshold(), 0.25);
  EXPECT_DOUBLE_EQ(LossSpec::Create(3.0, 1.0).CalibratedThreshold(), 0.75);
}

}  // namespace
}  // namespace eqodds
