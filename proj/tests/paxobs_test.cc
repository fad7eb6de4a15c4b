// Copyright 2026 The Unblend Authors.
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


#include "unblend/paxobs.h"

#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "unblend/corpus.h"

namespace unblend {
namespace {

using ::testing::ElementsAre;

PaxobsLabeling L(absl::string_view labels) {
  absl::StatusOr<PaxobsLabeling> parsed = PaxobsLabeling::Parse(labels);
  EXPECT_TRUE(parsed.ok()) << parsed.status();
  return *parsed;
}

TEST(PaxobsLabelingTest, RejectsUnknownLabels) {
  EXPECT_FALSE(PaxobsLabeling::Parse("AAQB").ok());
  EXPECT_FALSE(PaxobsLabeling::Parse("aab").ok());
  EXPECT_TRUE(PaxobsLabeling::Parse("PAXOBCS").ok());
}

TEST(PaxobsLabelingTest, BodyRangeSkipsAffixes) {
  EXPECT_EQ(L("AXXBBBBSSS").BodyRange(), std::make_pair(0, 7));
  EXPECT_EQ(L("PPAB").BodyRange(), std::make_pair(2, 4));
  EXPECT_EQ(L("AABB").NumBases(), 2);
  EXPECT_EQ(L("AXBXC").NumBases(), 3);
}

TEST(ValidateLabelingTest, AcceptsAnnotatedExamples) {
  for (absl::string_view labels :
       {"AXXBBBBSSS", "AAXXBBBS", "XXAAXBBXXX", "AAABOBBB"}) {
    EXPECT_TRUE(ValidateLabeling(L(labels)).ok()) << labels;
  }
}

TEST(ValidateLabelingTest, ReportsEachViolation) {
  EXPECT_TRUE(ValidateLabeling(L("")).Has(Violation::kEmpty));
  EXPECT_TRUE(ValidateLabeling(L("APB")).Has(Violation::kPrefixPosition));
  EXPECT_TRUE(ValidateLabeling(L("ASB")).Has(Violation::kSuffixPosition));
  EXPECT_TRUE(ValidateLabeling(L("BBAA")).Has(Violation::kBaseOrdering));
  EXPECT_TRUE(
      ValidateLabeling(L("AACC")).Has(Violation::kNonContiguousBaseLetters));
  EXPECT_TRUE(ValidateLabeling("shop", L("AAB")).Has(Violation::kLengthMismatch));
}

TEST(ValidateLabelingTest, CountsCodePointsNotBytes) {
  EXPECT_TRUE(ValidateLabeling("caf\xc3\xa9s", L("AAABB")).ok());
}

TEST(IsLinearTest, AnnotatedExamples) {
  EXPECT_TRUE(*IsLinear(L("AXXBBBBSSS")));
  EXPECT_TRUE(*IsLinear(L("AAXXBBBS")));
  EXPECT_FALSE(*IsLinear(L("XXAAXBBXXX")));
  EXPECT_FALSE(*IsLinear(L("AAABOBBB")));
}

TEST(IsLinearTest, ThreeBases) {
  EXPECT_TRUE(*IsLinear(L("AAXBBXCC")));
  EXPECT_TRUE(*IsLinear(L("AABBCC")));
  EXPECT_FALSE(*IsLinear(L("AABBCCAA")));
  EXPECT_FALSE(*IsLinear(L("ABAB")));
}

TEST(SegmentationTest, CreateValidates) {
  EXPECT_FALSE(Segmentation::Create({0}, 4).ok());
  EXPECT_FALSE(Segmentation::Create({4}, 4).ok());
  EXPECT_FALSE(Segmentation::Create({2, 2}, 4).ok());
  absl::StatusOr<Segmentation> s = Segmentation::Create({3, 1}, 4);
  ASSERT_TRUE(s.ok());
  EXPECT_THAT(s->cuts(), ElementsAre(1, 3));
  EXPECT_THAT(s->Segments(), ElementsAre(std::make_pair(0, 1),
                                         std::make_pair(1, 3),
                                         std::make_pair(3, 4)));
}

TEST(SegmentationTest, RenderUsesCharacters) {
  absl::StatusOr<Segmentation> s = Segmentation::Create({2}, 4);
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(s->Render("\xc3\xa9t\xc3\xa9s", "|"), "\xc3\xa9t|\xc3\xa9s");
}

TEST(GoldSegmentationTest, CutsAtEveryLabelChange) {
  EXPECT_EQ(GoldSegmentation(L("AAXXBBBS")).Render("shoptics", ";"),
            "sh;op;tic;s");
  EXPECT_EQ(GoldSegmentation(L("AXXBBBBSSS")).Render("hatriotism", ";"),
            "h;at;riot;ism");
  EXPECT_EQ(GoldSegmentation(L("AAAA")).cuts().size(), 0u);
}

TEST(BodySegmentationTest, KeepsAffixesAttached) {
  EXPECT_EQ(BodySegmentation(L("AAXXBBBS")).Render("shoptics", ";"),
            "sh;op;tics");
  EXPECT_EQ(BodySegmentation(L("PAABB")).Render("xbrch", ";"), "xbr;ch");
}

}  // namespace
}  // namespace unblend
