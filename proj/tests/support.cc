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


#include "support.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "unblend/utf8.h"

namespace unblend::testing {
namespace {

bool IsAffix(char c) { return c == 'P' || c == 'S'; }

uint64_t Fnv(absl::string_view text, uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

using Pieces = std::vector<std::string>;

// One step of an expanded key: an ended slot (kind 0 or 1) or the pieces
// at this depth with their score (kind 2).
struct Step {
  int kind = 2;
  double score = 0;
  std::vector<std::string> pieces;
};

struct Expanded {
  std::vector<std::string> words;
  std::vector<Step> steps;
};

using Builder = std::function<Pieces(const std::vector<Pieces>&)>;

absl::StatusOr<Expanded> Expand(const std::vector<std::string>& words,
                                const std::vector<Pieces>& pieces,
                                MlmBackend& backend, const Builder& build) {
  Expanded e{words, {}};
  for (size_t d = 0;; ++d) {
    for (size_t slot = 0; slot < pieces.size(); ++slot) {
      if (pieces[slot].size() == d) {
        e.steps.push_back({static_cast<int>(slot), 0, {}});
        return e;
      }
    }
    std::vector<Pieces> prefixes;
    std::vector<std::vector<std::string>> candidates;
    Step step;
    for (const Pieces& p : pieces) {
      prefixes.emplace_back(p.begin(), p.begin() + d);
      candidates.push_back({p[d]});
      step.pieces.push_back(p[d]);
    }
    absl::StatusOr<std::vector<std::map<std::string, double>>> probs =
        backend.MaskProbabilities(build(prefixes), candidates);
    if (!probs.ok()) return probs.status();
    for (size_t slot = 0; slot < pieces.size(); ++slot) {
      auto it = (*probs)[slot].find(pieces[slot][d]);
      if (it != (*probs)[slot].end()) step.score += it->second;
    }
    e.steps.push_back(std::move(step));
  }
}

bool Before(const Expanded& x, const Expanded& y) {
  for (size_t i = 0;; ++i) {
    const Step& a = x.steps[i];
    const Step& b = y.steps[i];
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.kind != 2) return x.words < y.words;
    if (a.score != b.score) return a.score > b.score;
    if (a.pieces != b.pieces) return a.pieces < b.pieces;
  }
}

absl::StatusOr<std::vector<Expanded>> SortExpanded(
    const std::vector<std::vector<std::string>>& words, MlmBackend& backend,
    const Builder& build) {
  std::vector<Expanded> all;
  for (const auto& w : words) {
    std::vector<Pieces> pieces;
    for (const std::string& word : w) {
      absl::StatusOr<Pieces> p = backend.Tokenize(word);
      if (!p.ok()) return p.status();
      pieces.push_back(*std::move(p));
    }
    absl::StatusOr<Expanded> e = Expand(w, pieces, backend, build);
    if (!e.ok()) return e.status();
    all.push_back(*std::move(e));
  }
  std::sort(all.begin(), all.end(), Before);
  return all;
}

}  // namespace

std::string TestDataPath(absl::string_view name) {
  return absl::StrCat(UNBLEND_TESTDATA_DIR, "/", name);
}

PaxobsLabeling RandomLabeling(std::mt19937_64& rng, int max_length) {
  static constexpr absl::string_view kBody = "AAABBBXXOC";
  for (;;) {
    std::uniform_int_distribution<int> length(1, max_length);
    const int n = length(rng);
    std::uniform_int_distribution<int> affix(0, std::min(2, n - 1));
    int prefix = affix(rng);
    int suffix = std::min(affix(rng), n - 1 - prefix);
    std::string labels(prefix, 'P');
    std::uniform_int_distribution<size_t> pick(0, kBody.size() - 1);
    for (int i = prefix; i < n - suffix; ++i) labels += kBody[pick(rng)];
    labels.append(suffix, 'S');
    absl::StatusOr<PaxobsLabeling> parsed = PaxobsLabeling::Parse(labels);
    if (parsed.ok() && ValidateLabeling(*parsed).ok()) return *parsed;
  }
}

std::vector<std::vector<int>> AllCutSets(int length) {
  std::vector<std::vector<int>> out;
  if (length <= 0) return out;
  for (unsigned mask = 0; mask < (1u << (length - 1)); ++mask) {
    std::vector<int> cuts;
    for (int i = 1; i < length; ++i) {
      if (mask >> (i - 1) & 1) cuts.push_back(i);
    }
    out.push_back(std::move(cuts));
  }
  return out;
}

SegScore OracleScore(absl::string_view labels, const std::vector<int>& cuts) {
  SegScore s;
  for (int c : cuts) {
    const char left = labels[c - 1];
    const char right = labels[c];
    if (IsAffix(left) || IsAffix(right)) continue;
    if (left == right) {
      ++s.fp_cuts;
    } else {
      ++s.tp_cuts;
    }
  }
  std::vector<int> bounds = {0};
  bounds.insert(bounds.end(), cuts.begin(), cuts.end());
  bounds.push_back(static_cast<int>(labels.size()));
  bool lenient_all = true;
  bool strict_all = true;
  for (size_t k = 0; k + 1 < bounds.size(); ++k) {
    std::string body;
    for (int i = bounds[k]; i < bounds[k + 1]; ++i) {
      if (!IsAffix(labels[i])) body += labels[i];
    }
    if (body.empty()) continue;
    ++s.scored_segments;
    std::set<char> bases;
    for (char c : body) {
      if (c != 'X' && c != 'O') bases.insert(c);
    }
    const bool has_x = body.find('X') != std::string::npos;
    const bool has_o = body.find('O') != std::string::npos;
    const bool lenient = bases.size() <= 1;
    const bool strict = lenient && !((has_x || has_o) && !bases.empty());
    s.sound_lenient += lenient;
    s.sound_strict += strict;
    lenient_all = lenient_all && lenient;
    strict_all = strict_all && strict;
  }
  s.exact_match_lenient = s.fp_cuts == 0 && lenient_all;
  s.exact_match_strict = s.fp_cuts == 0 && strict_all;
  return s;
}

double OracleUnigramScore(const UnigramModel& model, absl::string_view word) {
  const std::vector<std::string> chars = utf8::SplitChars(word);
  const int n = static_cast<int>(chars.size());
  double best = -std::numeric_limits<double>::infinity();
  for (const std::vector<int>& cuts : AllCutSets(n)) {
    std::vector<int> bounds = {0};
    bounds.insert(bounds.end(), cuts.begin(), cuts.end());
    bounds.push_back(n);
    double total = 0;
    bool ok = true;
    for (size_t k = 0; k + 1 < bounds.size() && ok; ++k) {
      std::string piece;
      for (int i = bounds[k]; i < bounds[k + 1]; ++i) piece += chars[i];
      auto it = model.pieces().find(piece);
      if (it != model.pieces().end()) {
        total += it->second;
      } else if (bounds[k + 1] - bounds[k] == 1) {
        total += model.unknown_logprob();
      } else {
        ok = false;
      }
    }
    if (ok) best = std::max(best, total);
  }
  return best;
}

int OracleEditDistance(const std::u32string& a, const std::u32string& b) {
  if (a.empty()) return static_cast<int>(b.size());
  if (b.empty()) return static_cast<int>(a.size());
  const std::u32string a1 = a.substr(1);
  const std::u32string b1 = b.substr(1);
  return std::min({OracleEditDistance(a1, b) + 1,
                   OracleEditDistance(a, b1) + 1,
                   OracleEditDistance(a1, b1) + (a[0] == b[0] ? 0 : 1)});
}

std::string RandomString(std::mt19937_64& rng, absl::string_view alphabet,
                         int min_length, int max_length) {
  std::uniform_int_distribution<int> length(min_length, max_length);
  std::uniform_int_distribution<size_t> pick(0, alphabet.size() - 1);
  std::string out;
  for (int i = length(rng); i > 0; --i) out += alphabet[pick(rng)];
  return out;
}

absl::StatusOr<std::vector<std::string>> HashBackend::Tokenize(
    absl::string_view text) {
  std::vector<std::string> out;
  for (absl::string_view word :
       absl::StrSplit(text, ' ', absl::SkipEmpty())) {
    for (size_t i = 0; i < word.size(); i += 2) {
      out.push_back(absl::StrCat(i == 0 ? "" : "##", word.substr(i, 2)));
    }
  }
  return out;
}

absl::StatusOr<std::vector<PieceProbs>> HashBackend::MaskTopK(
    const std::vector<std::string>& pieces, int /*k*/) {
  // No fixed vocabulary to rank; callers only ask for listed candidates.
  return std::vector<PieceProbs>(CountMasks(pieces, info_.mask));
}

double HashBackend::Probability(const std::vector<std::string>& pieces,
                                int mask, const std::string& piece) const {
  uint64_t h = Fnv(absl::StrJoin(pieces, " "));
  h = Fnv(absl::StrCat("#", mask, "#", piece), h);
  return static_cast<double>(h % levels_ + 1) / (levels_ + 1);
}

absl::StatusOr<std::vector<std::map<std::string, double>>>
HashBackend::MaskProbabilities(
    const std::vector<std::string>& pieces,
    const std::vector<std::vector<std::string>>& candidates) {
  ++queries_;
  const int masks = CountMasks(pieces, info_.mask);
  if (masks != static_cast<int>(candidates.size())) {
    return absl::InvalidArgumentError("candidate lists do not match masks");
  }
  std::vector<std::map<std::string, double>> out(masks);
  for (int m = 0; m < masks; ++m) {
    for (const std::string& c : candidates[m]) {
      out[m][c] = Probability(pieces, m, c);
    }
  }
  return out;
}

absl::StatusOr<LayerVectors> HashBackend::EncodeLayers(
    const std::vector<std::string>& pieces) {
  LayerVectors out(info_.layers);
  for (int l = 0; l < info_.layers; ++l) {
    for (const std::string& p : pieces) {
      std::vector<float> v(info_.dim);
      for (int d = 0; d < info_.dim; ++d) {
        v[d] = static_cast<float>(Fnv(absl::StrCat(p, "/", l, "/", d)) % 7) -
               3.0f;
      }
      out[l].push_back(std::move(v));
    }
  }
  return out;
}

absl::StatusOr<Ranking> OracleMlmRanking(const CandidateSet& candidates,
                                         MlmBackend& backend,
                                         const BlendContext& context,
                                         const MlmVariant& variant) {
  const std::string mask = backend.info().mask;
  Pieces left;
  Pieces right;
  if (!variant.minus_context) {
    left = *backend.Tokenize(context.left);
    right = *backend.Tokenize(context.right);
  }
  auto cat = [](std::initializer_list<const Pieces*> parts) {
    Pieces out;
    for (const Pieces* p : parts) out.insert(out.end(), p->begin(), p->end());
    return out;
  };
  const Pieces m = {mask};

  Ranking ranking;
  ranking.blend_id = candidates.blend_id;
  if (variant.pair) {
    std::vector<std::vector<std::string>> words;
    for (const std::string& a : candidates.side_a) {
      for (const std::string& b : candidates.side_b) words.push_back({a, b});
    }
    absl::StatusOr<std::vector<Expanded>> sorted = SortExpanded(
        words, backend, [&](const std::vector<Pieces>& pre) {
          return cat({&left, &pre[0], &m, &pre[1], &m, &right});
        });
    if (!sorted.ok()) return sorted.status();
    ranking.pairs.emplace();
    for (const Expanded& e : *sorted) {
      ranking.pairs->emplace_back(e.words[0], e.words[1]);
    }
  }
  for (int side = 0; side < 2; ++side) {
    if (side == 0 ? !variant.single_a : !variant.single_b) continue;
    Pieces other;
    if (variant.plus_other_base) {
      other = *backend.Tokenize(side == 0 ? candidates.true_b
                                          : candidates.true_a);
    }
    std::vector<std::vector<std::string>> words;
    for (const std::string& w :
         side == 0 ? candidates.side_a : candidates.side_b) {
      words.push_back({w});
    }
    absl::StatusOr<std::vector<Expanded>> sorted = SortExpanded(
        words, backend, [&](const std::vector<Pieces>& pre) {
          return side == 0 ? cat({&left, &pre[0], &m, &other, &right})
                           : cat({&left, &other, &pre[0], &m, &right});
        });
    if (!sorted.ok()) return sorted.status();
    std::vector<std::string> order;
    for (const Expanded& e : *sorted) order.push_back(e.words[0]);
    (side == 0 ? ranking.side_a : ranking.side_b) = std::move(order);
  }
  return ranking;
}

std::vector<RankedItem> HandRankedItems() {
  auto make = [](absl::string_view id, std::vector<std::string> a,
                 std::vector<std::string> b, std::string true_a,
                 std::string true_b, std::vector<std::string> rank_a,
                 std::vector<std::string> rank_b, int pair_rank) {
    RankedItem item;
    CandidateSet& c = item.candidates;
    c.blend_id = std::string(id);
    c.surface = std::string(id);
    c.side_a = std::move(a);
    c.side_b = std::move(b);
    c.true_a = std::move(true_a);
    c.true_b = std::move(true_b);
    c.a_present = std::count(c.side_a.begin(), c.side_a.end(), c.true_a) > 0;
    c.b_present = std::count(c.side_b.begin(), c.side_b.end(), c.true_b) > 0;
    item.ranking.blend_id = c.blend_id;
    item.ranking.side_a = std::move(rank_a);
    item.ranking.side_b = std::move(rank_b);
    // Every pair, with the true pair moved to position `pair_rank` when it
    // exists.
    std::vector<WordPair> pairs;
    for (const std::string& x : c.side_a) {
      for (const std::string& y : c.side_b) {
        if (x != c.true_a || y != c.true_b) pairs.emplace_back(x, y);
      }
    }
    if (c.a_present && c.b_present) {
      pairs.insert(pairs.begin() + (pair_rank - 1), {c.true_a, c.true_b});
    }
    item.ranking.pairs = std::move(pairs);
    return item;
  };
  const std::vector<std::string> a = {"a1", "a2", "a3"};
  const std::vector<std::string> b = {"b1", "b2"};
  return {
      make("i1", a, b, "a1", "b1", {"a1", "a2", "a3"}, {"b2", "b1"}, 1),
      make("i2", a, b, "a2", "b2", {"a1", "a3", "a2"}, {"b2", "b1"}, 4),
      make("i3", a, b, "zz", "b1", {"a1", "a2", "a3"}, {"b1", "b2"}, 0),
      make("i4", a, b, "a3", "b2", {"a3", "a1", "a2"}, {"b1", "b2"}, 2),
      make("i5", {"a1"}, {}, "a1", "qq", {"a1"}, {}, 0),
  };
}

CandidateSet RandomCandidateSet(std::mt19937_64& rng, int max_a, int max_b) {
  auto side = [&](int max) {
    std::uniform_int_distribution<int> count(1, max);
    std::set<std::string> words;
    for (int target = count(rng); static_cast<int>(words.size()) < target;) {
      words.insert(RandomString(rng, "ab", 1, 6));
    }
    return std::vector<std::string>(words.begin(), words.end());
  };
  CandidateSet set;
  set.blend_id = "x";
  set.surface = "x";
  set.side_a = side(max_a);
  set.side_b = side(max_b);
  set.true_a = set.side_a.front();
  set.true_b = set.side_b.back();
  set.a_present = set.b_present = true;
  return set;
}

}  // namespace unblend::testing
