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


// Base recovery: candidate lists for each side of a blend, and the ranking
// metrics (MRR for side A, side B and the base pair, and precision at 1).

#ifndef UNBLEND_RECOVERY_H_
#define UNBLEND_RECOVERY_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "absl/types/span.h"
#include "unblend/corpus.h"

namespace unblend {

using WordPair = std::pair<std::string, std::string>;

struct CandidateSet {
  std::string blend_id;
  std::string surface;
  std::vector<std::string> side_a;  // sorted, distinct
  std::vector<std::string> side_b;
  std::string true_a;
  std::string true_b;  // the last base when there are three
  bool a_present = false;
  bool b_present = false;

  friend bool operator==(const CandidateSet&, const CandidateSet&) = default;
};

struct CandidateOptions {
  // Shortest side material that may generate candidates. Shorter material
  // yields only the true base, when the vocabulary has it.
  int min_overlap = 3;
};

// Lowercased, deduplicated word list with prefix and suffix lookup.
class CandidateVocab {
 public:
  explicit CandidateVocab(absl::Span<const std::string> words);

  // First whitespace-separated field of each line; a leading "count dim"
  // header line, as in fastText files, is skipped.
  static absl::StatusOr<CandidateVocab> Load(const std::string& path);

  bool Contains(absl::string_view word) const;
  std::vector<std::string> WithPrefix(absl::string_view prefix) const;
  std::vector<std::string> WithSuffix(absl::string_view suffix) const;
  size_t size() const { return words_.size(); }

 private:
  std::vector<std::string> words_;     // sorted
  std::vector<std::string> reversed_;  // each word reversed, sorted
};

// Material that a side's candidates must share with the blend. Side A reads
// the prefix run and then the leading run of A and X labels; side B reads
// the trailing run of last-base and X labels followed by the suffix run.
struct SideKeys {
  std::string a;
  std::string b;
};
absl::StatusOr<SideKeys> ExtractSideKeys(const ComplexWordRecord& record);

// Candidates for a blend with two or three bases: vocabulary words beginning
// with the A key (ending with the B key), minus the blend itself and words
// that share a stem with the true base without being it. The true base is
// kept whenever it is in the vocabulary.
absl::StatusOr<CandidateSet> GenerateCandidates(
    const ComplexWordRecord& record, const CandidateVocab& vocab,
    const CandidateOptions& options = {});

std::string SerializeCandidateSet(const CandidateSet& set);
absl::StatusOr<CandidateSet> ParseCandidateSet(absl::string_view line);
absl::StatusOr<std::vector<CandidateSet>> LoadCandidateSets(
    const std::string& path);

// A ranker's output for one blend. Any of the three views may be missing.
struct Ranking {
  std::string blend_id;
  std::optional<std::vector<WordPair>> pairs;
  std::optional<std::vector<std::string>> side_a;
  std::optional<std::vector<std::string>> side_b;
};

std::string SerializeRanking(const Ranking& ranking);
absl::StatusOr<Ranking> ParseRanking(absl::string_view line);
absl::StatusOr<std::vector<Ranking>> LoadRankings(const std::string& path);

struct RecoveryScore {
  std::optional<int> rank_a;
  std::optional<int> rank_b;
  std::optional<int> rank_pair;
  std::optional<bool> top1_correct;
};

// Ranks are 1-based. A true base missing from its list ranks one past the
// end; an empty pair list ranks the true pair first. Each ranked view must
// be a permutation of the corresponding candidates.
absl::StatusOr<RecoveryScore> ScoreRanking(const CandidateSet& candidates,
                                           const Ranking& ranking);

struct RecoveryMetrics {
  int items = 0;
  std::optional<double> mrr_a;
  std::optional<double> mrr_b;
  std::optional<double> mrr_pair;
  std::optional<double> p_at_1;
};

// Means over the items that carry each rank.
absl::StatusOr<RecoveryMetrics> AggregateRecovery(
    absl::Span<const RecoveryScore> scores);

// The worst any ranker can do on these lists: true items last.
Ranking LowerBoundRanking(const CandidateSet& candidates);

// All pairs side_a x side_b, A-major.
std::vector<WordPair> AllPairs(const CandidateSet& candidates);

}  // namespace unblend

#endif  // UNBLEND_RECOVERY_H_
