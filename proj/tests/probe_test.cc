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


#include "unblend/probe.h"

#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "support.h"
#include "unblend/corpus.h"
#include "unblend/smoothie.h"

namespace unblend {
namespace {

using ::testing::ElementsAre;

// One layer of two-dimensional, context-free piece vectors.
class TableBackend : public testing::HashBackend {
 public:
  TableBackend() {
    info_.layers = 1;
    info_.dim = 2;
  }

  const MlmInfo& info() const override { return info_; }

  absl::StatusOr<std::vector<std::string>> Tokenize(
      absl::string_view text) override {
    std::vector<std::string> out;
    for (absl::string_view w : absl::StrSplit(text, ' ', absl::SkipEmpty())) {
      auto it = split.find(std::string(w));
      if (it == split.end()) {
        out.emplace_back(w);
      } else {
        out.insert(out.end(), it->second.begin(), it->second.end());
      }
    }
    return out;
  }

  absl::StatusOr<LayerVectors> EncodeLayers(
      const std::vector<std::string>& pieces) override {
    longest = std::max(longest, pieces.size());
    LayerVectors out(1);
    for (const std::string& p : pieces) {
      auto it = vectors.find(p);
      out[0].push_back(it == vectors.end() ? std::vector<float>{1, 1}
                                           : it->second);
    }
    return out;
  }

  std::map<std::string, std::vector<std::string>> split;
  std::map<std::string, std::vector<float>> vectors;
  size_t longest = 0;

 private:
  MlmInfo info_;
};

ComplexWordRecord Shoptics() {
  ComplexWordRecord r;
  r.surface = "Shoptics";
  r.bases = {"shop", "optics"};
  r.labeling = *PaxobsLabeling::Parse("AAXXBBBS");
  r.relation = "loc-part-whole";
  r.context = "the shoptics here";
  return r;
}

double Cos(std::vector<double> u, std::vector<double> v) {
  return (u[0] * v[0] + u[1] * v[1]) /
         (std::hypot(u[0], u[1]) * std::hypot(v[0], v[1]));
}

class ProbeTest : public ::testing::Test {
 protected:
  void SetUp() override {
    backend_.split = {{"shoptics", {"shop", "##tics"}},
                      {"optics", {"op", "##tics"}}};
    backend_.vectors = {{"sh", {1, 0}},    {"##op", {0, 1}},
                        {"shop", {2, 0}},  {"##tics", {0, 4}},
                        {"op", {0, 2}}};
  }
  TableBackend backend_;
};

TEST_F(ProbeTest, MeansOverPiecesThenBases) {
  absl::StatusOr<SimilarityProfile> p = ComputeSimilarityProfile(
      Shoptics(), backend_, ProbeTokenization::kDefault);
  ASSERT_TRUE(p.ok()) << p.status();
  EXPECT_EQ(p->group, "blend");
  EXPECT_EQ(p->word_pieces, 2);
  // word (2,0),(0,4) -> (1,2); bases shop (2,0) and optics (0,3) -> (1,1.5).
  EXPECT_THAT(p->cosines, ElementsAre(::testing::DoubleNear(
                              Cos({1, 2}, {1, 1.5}), 1e-9)));
}

TEST_F(ProbeTest, PaxobsTokenizationSplitsAtBases) {
  absl::StatusOr<SimilarityProfile> p = ComputeSimilarityProfile(
      Shoptics(), backend_, ProbeTokenization::kPaxobsInformed);
  ASSERT_TRUE(p.ok()) << p.status();
  EXPECT_EQ(p->word_pieces, 3);
  // sh ##op ##tics -> (1,0),(0,1),(0,4).
  EXPECT_NEAR(p->cosines[0], Cos({1.0 / 3, 5.0 / 3}, {1, 1.5}), 1e-9);
}

TEST_F(ProbeTest, MissingWordIsNotFound) {
  ComplexWordRecord r = Shoptics();
  r.context = "nothing to see";
  EXPECT_EQ(ComputeSimilarityProfile(r, backend_, ProbeTokenization::kDefault)
                .status()
                .code(),
            absl::StatusCode::kNotFound);
}

TEST_F(ProbeTest, LongContextsAreTrimmed) {
  ComplexWordRecord r = Shoptics();
  std::string filler;
  for (int i = 0; i < 400; ++i) absl::StrAppend(&filler, "w", i, " ");
  r.context = absl::StrCat(filler, "shoptics ", filler);
  absl::StatusOr<SimilarityProfile> p =
      ComputeSimilarityProfile(r, backend_, ProbeTokenization::kDefault);
  ASSERT_TRUE(p.ok()) << p.status();
  EXPECT_EQ(backend_.longest, static_cast<size_t>(kMaxProbePieces));
}

TEST(ProbeHashTest, CosinesBoundedOnePerLayer) {
  absl::StatusOr<std::vector<ComplexWordRecord>> records =
      LoadCorpus(testing::TestDataPath("corpus.jsonl"));
  ASSERT_TRUE(records.ok());
  testing::HashBackend backend;
  for (const ComplexWordRecord& r : *records) {
    absl::StatusOr<SimilarityProfile> p =
        ComputeSimilarityProfile(r, backend, ProbeTokenization::kDefault);
    ASSERT_TRUE(p.ok()) << r.surface << ": " << p.status();
    ASSERT_EQ(p->cosines.size(), 3u);
    for (double c : p->cosines) {
      EXPECT_GE(c, -1.0);
      EXPECT_LE(c, 1.0);
    }
  }
}

SimilarityProfile Profile(std::string group, std::optional<std::string> rel,
                          std::vector<double> cosines) {
  SimilarityProfile p;
  p.word_id = group;
  p.group = std::move(group);
  p.relation = std::move(rel);
  p.cosines = std::move(cosines);
  return p;
}

TEST(AggregateProfilesTest, MeanAndStandardError) {
  const std::vector<SimilarityProfile> profiles = {
      Profile("blend", "r1", {0.1, 0.5}), Profile("blend", "r1", {0.3, 0.5}),
      Profile("blend", std::nullopt, {0.5, 0.5}),
      Profile("transparent_compound", "r2", {0.9, 0.2})};
  absl::StatusOr<std::vector<GroupSummary>> by_class =
      AggregateProfiles(profiles, ProfileGrouping::kClass);
  ASSERT_TRUE(by_class.ok());
  ASSERT_EQ(by_class->size(), 2u);
  const GroupSummary& blend = (*by_class)[0];
  EXPECT_EQ(blend.group, "blend");
  EXPECT_EQ(blend.n, 3);
  EXPECT_NEAR(blend.mean[0], 0.3, 1e-12);
  // Sample sd of .1 .3 .5 is .2.
  EXPECT_NEAR(blend.sem[0], 0.2 / std::sqrt(3.0), 1e-12);
  EXPECT_EQ(blend.mean[1], 0.5);
  EXPECT_EQ(blend.sem[1], 0.0);
  EXPECT_EQ((*by_class)[1].sem[0], 0.0);

  absl::StatusOr<std::vector<GroupSummary>> by_relation =
      AggregateProfiles(profiles, ProfileGrouping::kRelation, 1);
  ASSERT_TRUE(by_relation.ok());
  ASSERT_EQ(by_relation->size(), 1u);
  EXPECT_EQ((*by_relation)[0].group, "r1");
  EXPECT_EQ((*by_relation)[0].n, 2);
  EXPECT_FALSE(AggregateProfiles({}, ProfileGrouping::kClass).ok());
}

TEST(SmoothieTest, RateZeroConcatenates) {
  std::mt19937_64 rng(1);
  absl::StatusOr<Smoothie> s = SynthesizeSmoothie("junk", "time", 0.0, rng);
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(s->surface, "junktime");
  EXPECT_EQ(s->labeling.str(), "AAAABBBB");
  EXPECT_EQ(s->deleted, 0);
}

TEST(SmoothieTest, SeamDeletionsCanGiveBoerson) {
  bool seen = false;
  for (uint64_t seed = 0; seed < 500 && !seen; ++seed) {
    std::mt19937_64 rng(seed);
    absl::StatusOr<Smoothie> s = SynthesizeSmoothie("bow", "person", 0.2, rng);
    ASSERT_TRUE(s.ok());
    seen = s->surface == "boerson";
  }
  EXPECT_TRUE(seen);
}

TEST(SmoothieTest, AlwaysLinearAndKeepsBothBases) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const std::string a = testing::RandomString(rng, "abcdef", 2, 8);
    const std::string b = testing::RandomString(rng, "abcdef", 2, 8);
    absl::StatusOr<Smoothie> s = SynthesizeSmoothie(a, b, 0.2, rng);
    ASSERT_TRUE(s.ok()) << a << " " << b;
    EXPECT_TRUE(*IsLinear(s->labeling));
    EXPECT_TRUE(ValidateLabeling(s->surface, s->labeling).ok());
    EXPECT_EQ(s->labeling.NumBases(), 2);
    EXPECT_EQ(s->surface.size() + s->deleted, a.size() + b.size());
  }
}

TEST(SmoothieTest, RealizedRateTracksTarget) {
  const std::vector<std::pair<std::string, std::string>> bases = {
      {"junk", "time"}, {"bow", "person"}, {"quiz", "maker"},
      {"book", "worm"}, {"snow", "storm"}, {"water", "melon"}};
  for (double rate : {0.1, 0.2}) {
    std::mt19937_64 rng(13);
    long deleted = 0;
    long total = 0;
    for (int i = 0; i < 1000; ++i) {
      const auto& [a, b] = bases[i % bases.size()];
      absl::StatusOr<Smoothie> s = SynthesizeSmoothie(a, b, rate, rng);
      ASSERT_TRUE(s.ok());
      deleted += s->deleted;
      total += a.size() + b.size();
    }
    EXPECT_NEAR(static_cast<double>(deleted) / total, rate, 0.02);
  }
}

TEST(SmoothieTest, RejectsImpossibleRequests) {
  std::mt19937_64 rng(1);
  EXPECT_FALSE(SynthesizeSmoothie("", "time", 0.1, rng).ok());
  EXPECT_FALSE(SynthesizeSmoothie("junk", "time", 1.0, rng).ok());
  EXPECT_FALSE(SynthesizeSmoothie("a", "b", 0.5, rng).ok());
}

TEST(SmoothieTest, RecordReplacesFirstOccurrence) {
  ComplexWordRecord r;
  r.surface = "junktime";
  r.word_class = WordClass::kTransparentCompound;
  r.bases = {"junk", "time"};
  r.labeling = *PaxobsLabeling::Parse("AAAABBBB");
  r.context = "see junktime again, junktime.";
  std::mt19937_64 rng(2);
  absl::StatusOr<ComplexWordRecord> s = SmoothieRecord(r, 0.0, rng);
  ASSERT_TRUE(s.ok()) << s.status();
  EXPECT_EQ(s->context, "see junktime again, junktime.");
  EXPECT_EQ(s->id(), "junktime~smoothie");
  r.bases.push_back("x");
  EXPECT_FALSE(SmoothieRecord(r, 0.1, rng).ok());
}

TEST(SmoothieTest, LinearBlendDeletionRate) {
  absl::StatusOr<std::vector<ComplexWordRecord>> records =
      LoadCorpus(testing::TestDataPath("annotated.jsonl"));
  ASSERT_TRUE(records.ok());
  // Whole deleted characters over base characters of the linear rows.
  double deleted = 0;
  double total = 0;
  for (const ComplexWordRecord& r : *records) {
    if (!*IsLinear(r.labeling)) continue;
    const double chars = r.bases[0].size() + r.bases[1].size();
    deleted += std::round(DeletionRate(r) * chars);
    total += chars;
  }
  EXPECT_NEAR(LinearBlendDeletionRate(*records), deleted / total, 1e-12);
}

}  // namespace
}  // namespace unblend
