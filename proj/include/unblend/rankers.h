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


// Rankers for base recovery. Every ranker returns total orders: remaining
// ties break lexicographically on the words.

#ifndef UNBLEND_RANKERS_H_
#define UNBLEND_RANKERS_H_

#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "unblend/char_lm.h"
#include "unblend/corpus.h"
#include "unblend/embeddings.h"
#include "unblend/recovery.h"

namespace unblend {

// Pairs by ascending edit distance between the two words; each side by
// distance to the other side's true base.
Ranking RankByEditDistance(const CandidateSet& candidates);

// Pairs by descending cosine of the two words' vectors; each side by cosine
// with the other side's true base. Words without a usable vector rank below
// every scored item.
Ranking RankByEmbedding(const CandidateSet& candidates,
                        const EmbeddingTable& table);

// The blend's context split around the blend occurrence.
struct BlendContext {
  std::string left;
  std::string right;
};

// Lowercases `context` and splits it at the first whole-token occurrence of
// `surface`. Fails when there is none.
absl::StatusOr<BlendContext> SplitContext(absl::string_view context,
                                          absl::string_view surface);

// Side A by the forward model continuing the left context, side B by the
// backward model continuing the right context (read leftwards); higher mean
// log-likelihood first. No pair ranking.
Ranking RankByCharLm(const CandidateSet& candidates, const CharNgramLm& forward,
                     const CharNgramLm& backward, const BlendContext& context);

}  // namespace unblend

#endif  // UNBLEND_RANKERS_H_
