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


#include "unblend/rankers.h"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "unblend/edit_distance.h"
#include "unblend/utf8.h"

namespace unblend {
namespace {

// Descending score, scored before unscored, then the key ascending.
template <typename Key, typename Score>
std::vector<Key> SortByScore(std::vector<Key> keys, Score score) {
  std::vector<std::pair<std::optional<double>, Key>> scored;
  scored.reserve(keys.size());
  for (Key& k : keys) {
    std::optional<double> s = score(k);
    scored.emplace_back(s, std::move(k));
  }
  std::sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) {
    if (x.first.has_value() != y.first.has_value()) {
      return x.first.has_value();
    }
    if (x.first.has_value() && *x.first != *y.first) {
      return *x.first > *y.first;
    }
    return x.second < y.second;
  });
  std::vector<Key> out;
  out.reserve(scored.size());
  for (auto& [s, k] : scored) out.push_back(std::move(k));
  return out;
}

}  // namespace

Ranking RankByEditDistance(const CandidateSet& candidates) {
  Ranking ranking;
  ranking.blend_id = candidates.blend_id;
  auto negated = [](absl::string_view a, absl::string_view b) {
    return std::optional<double>(-EditDistance(a, b));
  };
  ranking.pairs = SortByScore(AllPairs(candidates), [&](const WordPair& p) {
    return negated(p.first, p.second);
  });
  ranking.side_a = SortByScore(candidates.side_a, [&](const std::string& a) {
    return negated(a, candidates.true_b);
  });
  ranking.side_b = SortByScore(candidates.side_b, [&](const std::string& b) {
    return negated(candidates.true_a, b);
  });
  return ranking;
}

Ranking RankByEmbedding(const CandidateSet& candidates,
                        const EmbeddingTable& table) {
  Ranking ranking;
  ranking.blend_id = candidates.blend_id;
  ranking.pairs = SortByScore(AllPairs(candidates), [&](const WordPair& p) {
    return table.Cosine(p.first, p.second);
  });
  ranking.side_a = SortByScore(candidates.side_a, [&](const std::string& a) {
    return table.Cosine(a, candidates.true_b);
  });
  ranking.side_b = SortByScore(candidates.side_b, [&](const std::string& b) {
    return table.Cosine(candidates.true_a, b);
  });
  return ranking;
}

absl::StatusOr<BlendContext> SplitContext(absl::string_view context,
                                          absl::string_view surface) {
  const std::string lowered = utf8::ToLower(context);
  std::optional<TokenSpan> span = FindToken(lowered, surface);
  if (!span.has_value()) {
    return absl::NotFoundError(
        absl::StrCat("\"", surface, "\" does not occur in its context"));
  }
  return BlendContext{lowered.substr(0, span->begin), lowered.substr(span->end)};
}

Ranking RankByCharLm(const CandidateSet& candidates, const CharNgramLm& forward,
                     const CharNgramLm& backward, const BlendContext& context) {
  Ranking ranking;
  ranking.blend_id = candidates.blend_id;
  ranking.side_a = SortByScore(candidates.side_a, [&](const std::string& a) {
    return std::optional<double>(forward.ContinuationScore(context.left, a));
  });
  ranking.side_b = SortByScore(candidates.side_b, [&](const std::string& b) {
    return std::optional<double>(backward.ContinuationScore(context.right, b));
  });
  return ranking;
}

}  // namespace unblend
