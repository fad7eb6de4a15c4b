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


#include "unblend/mlm_ranker.h"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace unblend {
namespace {

using Pieces = std::vector<std::string>;

// One ranked item: a word (single side) or a word pair, with the pieces of
// each slot it fills.
struct Item {
  std::vector<std::string> words;
  std::vector<const Pieces*> pieces;
};

// Builds the model input for the given per-slot prefixes.
using InputBuilder = std::function<Pieces(const std::vector<Pieces>&)>;

class TieBreaker {
 public:
  TieBreaker(MlmBackend& backend, const std::vector<Item>& items,
             InputBuilder build)
      : backend_(backend), items_(items), build_(std::move(build)) {}

  absl::StatusOr<std::vector<int>> Run() {
    std::vector<int> all(items_.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    std::vector<int> out;
    if (absl::Status s = Order(all, 0, &out); !s.ok()) return s;
    return out;
  }

 private:
  bool ByWords(int x, int y) const { return items_[x].words < items_[y].words; }

  // Appends the ordering of `group`, whose items share their first `depth`
  // pieces in every slot.
  absl::Status Order(std::vector<int> group, size_t depth,
                     std::vector<int>* out) {
    const size_t slots = items_[group.front()].pieces.size();
    // Items out of pieces go first, by slot order of the slot that ran out.
    for (size_t slot = 0; slot < slots; ++slot) {
      std::vector<int> ended;
      std::vector<int> rest;
      for (int i : group) {
        (items_[i].pieces[slot]->size() == depth ? ended : rest).push_back(i);
      }
      std::sort(ended.begin(), ended.end(),
                [this](int x, int y) { return ByWords(x, y); });
      out->insert(out->end(), ended.begin(), ended.end());
      group = std::move(rest);
    }
    if (group.empty()) return absl::OkStatus();
    if (group.size() == 1) {
      out->push_back(group.front());
      return absl::OkStatus();
    }

    std::vector<Pieces> prefixes(slots);
    std::vector<std::vector<std::string>> candidates(slots);
    for (size_t slot = 0; slot < slots; ++slot) {
      const Pieces& p = *items_[group.front()].pieces[slot];
      prefixes[slot].assign(p.begin(), p.begin() + depth);
      std::set<std::string> next;
      for (int i : group) next.insert((*items_[i].pieces[slot])[depth]);
      candidates[slot].assign(next.begin(), next.end());
    }
    const Pieces input = build_(prefixes);
    absl::StatusOr<std::vector<std::map<std::string, double>>> probs =
        backend_.MaskProbabilities(input, candidates);
    if (!probs.ok()) return probs.status();
    if (probs->size() != slots) {
      return absl::InternalError(absl::StrCat(
          "backend answered ", probs->size(), " masks; expected ", slots));
    }

    std::map<std::vector<std::string>, std::vector<int>> by_pieces;
    for (int i : group) {
      std::vector<std::string> key;
      for (size_t slot = 0; slot < slots; ++slot) {
        key.push_back((*items_[i].pieces[slot])[depth]);
      }
      by_pieces[std::move(key)].push_back(i);
    }
    std::vector<std::pair<double, const std::vector<std::string>*>> ranked;
    for (const auto& [key, members] : by_pieces) {
      double score = 0;
      for (size_t slot = 0; slot < slots; ++slot) {
        auto it = (*probs)[slot].find(key[slot]);
        if (it != (*probs)[slot].end()) score += it->second;
      }
      ranked.emplace_back(score, &key);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& x, const auto& y) {
                       return x.first > y.first;
                     });
    for (const auto& [score, key] : ranked) {
      if (absl::Status s = Order(by_pieces[*key], depth + 1, out); !s.ok()) {
        return s;
      }
    }
    return absl::OkStatus();
  }

  MlmBackend& backend_;
  const std::vector<Item>& items_;
  InputBuilder build_;
};

void Append(Pieces* to, const Pieces& from) {
  to->insert(to->end(), from.begin(), from.end());
}

}  // namespace

absl::StatusOr<MlmVariant> ParseMlmVariant(absl::string_view spec) {
  if (spec == "mlm") return MlmVariant();
  if (!absl::ConsumePrefix(&spec, "mlm:")) {
    return absl::InvalidArgumentError(
        absl::StrCat("not an mlm system: \"", spec, "\""));
  }
  MlmVariant variant;
  bool views = false;
  MlmVariant chosen{false, false, false, false, false};
  for (absl::string_view option : absl::StrSplit(spec, ',')) {
    if (option == "pair") {
      chosen.pair = views = true;
    } else if (option == "single_a") {
      chosen.single_a = views = true;
    } else if (option == "single_b") {
      chosen.single_b = views = true;
    } else if (option == "plus_other_base") {
      variant.plus_other_base = true;
    } else if (option == "minus_context") {
      variant.minus_context = true;
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown mlm option \"", option, "\""));
    }
  }
  if (views) {
    variant.pair = chosen.pair;
    variant.single_a = chosen.single_a;
    variant.single_b = chosen.single_b;
  }
  return variant;
}

absl::StatusOr<Ranking> RankByMlm(const CandidateSet& candidates,
                                  MlmBackend& backend,
                                  const BlendContext& context,
                                  const MlmVariant& variant) {
  const std::string& mask = backend.info().mask;
  Pieces left, right;
  if (!variant.minus_context) {
    absl::StatusOr<Pieces> l = backend.Tokenize(context.left);
    if (!l.ok()) return l.status();
    absl::StatusOr<Pieces> r = backend.Tokenize(context.right);
    if (!r.ok()) return r.status();
    left = *std::move(l);
    right = *std::move(r);
  }

  // Pieces are kept in a map so Item pointers stay valid.
  std::map<std::string, Pieces> pieces;
  auto pieces_of = [&](const std::string& word) -> absl::StatusOr<const Pieces*> {
    if (auto it = pieces.find(word); it != pieces.end()) return &it->second;
    absl::StatusOr<Pieces> p = backend.Tokenize(word);
    if (!p.ok()) return p.status();
    if (p->empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("backend gives no pieces for \"", word, "\""));
    }
    return &(pieces[word] = *std::move(p));
  };
  for (const auto* side : {&candidates.side_a, &candidates.side_b}) {
    for (const std::string& w : *side) {
      if (absl::StatusOr<const Pieces*> p = pieces_of(w); !p.ok()) {
        return p.status();
      }
    }
  }

  Ranking ranking;
  ranking.blend_id = candidates.blend_id;

  if (variant.pair) {
    std::vector<Item> items;
    for (const WordPair& p : AllPairs(candidates)) {
      items.push_back({{p.first, p.second},
                       {&pieces.at(p.first), &pieces.at(p.second)}});
    }
    std::vector<WordPair> ordered;
    if (!items.empty()) {
      TieBreaker breaker(backend, items, [&](const std::vector<Pieces>& pre) {
        Pieces input = left;
        Append(&input, pre[0]);
        input.push_back(mask);
        Append(&input, pre[1]);
        input.push_back(mask);
        Append(&input, right);
        return input;
      });
      absl::StatusOr<std::vector<int>> order = breaker.Run();
      if (!order.ok()) return order.status();
      for (int i : *order) ordered.emplace_back(items[i].words[0], items[i].words[1]);
    }
    ranking.pairs = std::move(ordered);
  }

  for (const bool side_a : {true, false}) {
    if (side_a ? !variant.single_a : !variant.single_b) continue;
    const std::vector<std::string>& list =
        side_a ? candidates.side_a : candidates.side_b;
    Pieces other;
    if (variant.plus_other_base) {
      absl::StatusOr<const Pieces*> p =
          pieces_of(side_a ? candidates.true_b : candidates.true_a);
      if (!p.ok()) return p.status();
      other = **p;
    }
    std::vector<Item> items;
    for (const std::string& w : list) items.push_back({{w}, {&pieces.at(w)}});
    std::vector<std::string> ordered;
    if (!items.empty()) {
      TieBreaker breaker(backend, items, [&](const std::vector<Pieces>& pre) {
        Pieces input = left;
        if (!side_a) Append(&input, other);
        Append(&input, pre[0]);
        input.push_back(mask);
        if (side_a) Append(&input, other);
        Append(&input, right);
        return input;
      });
      absl::StatusOr<std::vector<int>> order = breaker.Run();
      if (!order.ok()) return order.status();
      for (int i : *order) ordered.push_back(items[i].words[0]);
    }
    (side_a ? ranking.side_a : ranking.side_b) = std::move(ordered);
  }
  return ranking;
}

}  // namespace unblend
