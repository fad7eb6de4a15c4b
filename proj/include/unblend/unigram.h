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

#ifndef UNBLEND_UNIGRAM_H_
#define UNBLEND_UNIGRAM_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "unblend/subword.h"

namespace unblend {

struct UnigramTrainerOptions {
  int vocab_size = kDefaultVocabSize;
  // Longest seed substring, in characters.
  int max_piece_length = 8;
  // Multi-character substrings need at least this many occurrences to seed
  // the initial vocabulary. Single characters are always kept.
  int64_t min_seed_frequency = 2;
  int max_seed_pieces = 1000000;
  // Fraction of pieces kept by each pruning round.
  double shrink_factor = 0.75;
  int em_iterations = 2;
};

// Unigram language model over pieces: a word is segmented into the sequence
// of pieces with the highest product of piece probabilities.
class UnigramModel {
 public:
  // EM over piece probabilities, seeded with frequent substrings, pruning the
  // pieces whose removal costs the least likelihood until `vocab_size`
  // pieces remain. Single characters are never pruned.
  static absl::StatusOr<UnigramModel> Train(
      const WordCounts& corpus, const UnigramTrainerOptions& options);

  // Log probabilities must be finite and <= 0.
  static absl::StatusOr<UnigramModel> FromPieces(
      std::map<std::string, double> pieces);

  // "piece\tlogprob" per line.
  static absl::StatusOr<UnigramModel> Load(const std::string& path);
  absl::Status Save(const std::string& path) const;

  // Viterbi segmentation. Characters with no piece become single-character
  // pieces scored with unknown_logprob(). Ties prefer the segmentation found
  // first, scanning end positions left to right and shorter pieces first.
  std::vector<std::string> Encode(absl::string_view word) const;

  // Sum of piece log probabilities of Encode(word).
  double ViterbiScore(absl::string_view word) const;

  // Log probability of a piece, or unknown_logprob() for an unlisted single
  // character. Fails for unlisted multi-character pieces.
  absl::StatusOr<double> PieceLogProb(absl::string_view piece) const;

  double unknown_logprob() const { return unknown_logprob_; }
  const std::map<std::string, double>& pieces() const { return pieces_; }

 private:
  explicit UnigramModel(std::map<std::string, double> pieces);

  struct Best {
    double score;
    std::vector<std::string> pieces;
  };
  Best Viterbi(absl::string_view word) const;

  std::map<std::string, double> pieces_;
  absl::flat_hash_map<std::u32string, double> lookup_;
  int max_length_ = 1;
  double unknown_logprob_ = 0;
};

}  // namespace unblend

#endif  // UNBLEND_UNIGRAM_H_
