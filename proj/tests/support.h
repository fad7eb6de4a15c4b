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


// Brute-force reference implementations and fakes shared by the unit tests
// and the acceptance suite. They are written from the definitions, not from
// the library code, and favour obviousness over speed.

#ifndef UNBLEND_TESTS_SUPPORT_H_
#define UNBLEND_TESTS_SUPPORT_H_

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "unblend/mlm.h"
#include "unblend/mlm_ranker.h"
#include "unblend/paxobs.h"
#include "unblend/rankers.h"
#include "unblend/recovery.h"
#include "unblend/segeval.h"
#include "unblend/unigram.h"

namespace unblend::testing {

// Directory holding the checked-in fixtures.
std::string TestDataPath(absl::string_view name);

// A random labeling accepted by ValidateLabeling, at most `max_length`
// characters long.
PaxobsLabeling RandomLabeling(std::mt19937_64& rng, int max_length);

// Every cut set over `length` characters, as bit masks expanded to cuts.
std::vector<std::vector<int>> AllCutSets(int length);

// Scores one predicted segmentation rule by rule: a cut touching P or S is
// free, a cut between equal labels is false, any other cut is true; each
// predicted segment is judged on its non-affix characters only.
SegScore OracleScore(absl::string_view labels, const std::vector<int>& cuts);

// Best total log probability over all segmentations of `word` into listed
// pieces (unlisted single characters use the unknown score).
double OracleUnigramScore(const UnigramModel& model, absl::string_view word);

// Plain recursive Levenshtein distance over code points.
int OracleEditDistance(const std::u32string& a, const std::u32string& b);

std::string RandomString(std::mt19937_64& rng, absl::string_view alphabet,
                         int min_length, int max_length);

// Deterministic backend for ranker tests. Words split into two-character
// pieces ("abcde" -> ab ##cd ##e). Mask probabilities are a coarse hash of
// the whole input, the mask ordinal and the piece, so equal scores are
// common.
class HashBackend : public MlmBackend {
 public:
  explicit HashBackend(int levels = 3) : levels_(levels) {}

  const MlmInfo& info() const override { return info_; }
  absl::StatusOr<std::vector<std::string>> Tokenize(
      absl::string_view text) override;
  absl::StatusOr<std::vector<PieceProbs>> MaskTopK(
      const std::vector<std::string>& pieces, int k) override;
  absl::StatusOr<std::vector<std::map<std::string, double>>> MaskProbabilities(
      const std::vector<std::string>& pieces,
      const std::vector<std::vector<std::string>>& candidates) override;
  absl::StatusOr<LayerVectors> EncodeLayers(
      const std::vector<std::string>& pieces) override;

  double Probability(const std::vector<std::string>& pieces, int mask,
                     const std::string& piece) const;
  int queries() const { return queries_; }

 private:
  MlmInfo info_{3, 4, "[MASK]", "##"};
  int levels_;
  int queries_ = 0;
};

// The MLM ranking computed by expanding every item to its full sequence of
// per-depth keys, each scored with its own query, and sorting those
// sequences. Views follow `variant`.
absl::StatusOr<Ranking> OracleMlmRanking(const CandidateSet& candidates,
                                         MlmBackend& backend,
                                         const BlendContext& context,
                                         const MlmVariant& variant);

// Five hand-built candidate sets with rankings whose ranks are, in order:
//   A: 1, 3, 4 (absent), 1, 1     B: 2, 1, 1, 2, 1 (empty list)
//   pair: 1, 4, 7 (absent), 2, 1 (empty list)
struct RankedItem {
  CandidateSet candidates;
  Ranking ranking;
};
std::vector<RankedItem> HandRankedItems();

// Small random candidate set over a two-letter alphabet, so words share
// prefixes often.
CandidateSet RandomCandidateSet(std::mt19937_64& rng, int max_a, int max_b);

}  // namespace unblend::testing

#endif  // UNBLEND_TESTS_SUPPORT_H_
