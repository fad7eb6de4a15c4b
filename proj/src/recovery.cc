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


#include "unblend/recovery.h"

#include <algorithm>
#include <fstream>
#include <set>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "unblend/porter_stemmer.h"
#include "unblend/utf8.h"

namespace unblend {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string Reversed(absl::string_view word) {
  std::u32string chars = utf8::Decode(word);
  std::reverse(chars.begin(), chars.end());
  return utf8::Encode(chars);
}

// Sorted words of `sorted` that start with `prefix`.
std::vector<std::string> PrefixRange(const std::vector<std::string>& sorted,
                                     absl::string_view prefix) {
  std::vector<std::string> out;
  auto it = std::lower_bound(sorted.begin(), sorted.end(), prefix,
                             [](const std::string& w, absl::string_view p) {
                               return absl::string_view(w) < p;
                             });
  for (; it != sorted.end() && absl::string_view(*it).substr(0, prefix.size()) ==
                                   prefix;
       ++it) {
    out.push_back(*it);
  }
  return out;
}

template <typename T>
absl::StatusOr<std::optional<std::vector<T>>> OptionalList(
    const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::optional<std::vector<T>>();
  try {
    return std::optional<std::vector<T>>(it->get<std::vector<T>>());
  } catch (const json::exception&) {
    return absl::InvalidArgumentError(
        absl::StrCat("field \"", key, "\" has the wrong type"));
  }
}

template <typename T, typename Parse>
absl::StatusOr<std::vector<T>> LoadJsonLines(const std::string& path,
                                             Parse parse) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::vector<T> out;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    absl::StatusOr<T> item = parse(line);
    if (!item.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(
          path, ":", line_number, ": ", item.status().message()));
    }
    out.push_back(*std::move(item));
  }
  return out;
}

// 1-based position of `item`, or size + 1 when absent.
template <typename T>
int RankOf(const std::vector<T>& ranked, const T& item) {
  auto it = std::find(ranked.begin(), ranked.end(), item);
  return static_cast<int>(it - ranked.begin()) + 1;
}

template <typename T>
bool IsPermutation(std::vector<T> a, std::vector<T> b) {
  if (a.size() != b.size()) return false;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace

CandidateVocab::CandidateVocab(absl::Span<const std::string> words) {
  std::set<std::string> unique;
  for (const std::string& w : words) {
    if (!w.empty()) unique.insert(utf8::ToLower(w));
  }
  words_.assign(unique.begin(), unique.end());
  for (const std::string& w : words_) reversed_.push_back(Reversed(w));
  std::sort(reversed_.begin(), reversed_.end());
}

absl::StatusOr<CandidateVocab> CandidateVocab::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::vector<std::string> words;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::vector<absl::string_view> fields =
        absl::StrSplit(line, absl::ByAnyChar(" \t"), absl::SkipEmpty());
    if (fields.empty()) continue;
    if (first && fields.size() == 2) {
      int a, b;
      if (absl::SimpleAtoi(fields[0], &a) && absl::SimpleAtoi(fields[1], &b)) {
        first = false;
        continue;
      }
    }
    first = false;
    words.emplace_back(fields[0]);
  }
  return CandidateVocab(words);
}

bool CandidateVocab::Contains(absl::string_view word) const {
  return std::binary_search(words_.begin(), words_.end(), word,
                            [](absl::string_view a, absl::string_view b) {
                              return a < b;
                            });
}

std::vector<std::string> CandidateVocab::WithPrefix(
    absl::string_view prefix) const {
  return PrefixRange(words_, prefix);
}

std::vector<std::string> CandidateVocab::WithSuffix(
    absl::string_view suffix) const {
  std::vector<std::string> out;
  for (const std::string& r : PrefixRange(reversed_, Reversed(suffix))) {
    out.push_back(Reversed(r));
  }
  std::sort(out.begin(), out.end());
  return out;
}

absl::StatusOr<SideKeys> ExtractSideKeys(const ComplexWordRecord& record) {
  const int num_bases = record.labeling.NumBases();
  if (num_bases < 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        "\"", record.surface, "\" has ", num_bases, " base letters; need 2+"));
  }
  const std::u32string surface = utf8::ToLower(utf8::Decode(record.surface));
  if (surface.size() != record.labeling.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("labeling does not fit \"", record.surface, "\""));
  }
  const std::string& labels = record.labeling.str();
  const int n = static_cast<int>(labels.size());
  const char last = BaseLabel(num_bases - 1);

  int a_end = 0;
  while (a_end < n && labels[a_end] == kPrefixLabel) ++a_end;
  while (a_end < n && (labels[a_end] == kFirstBaseLabel ||
                       labels[a_end] == kSharedLabel)) {
    ++a_end;
  }
  int b_begin = n;
  while (b_begin > 0 && labels[b_begin - 1] == kSuffixLabel) --b_begin;
  while (b_begin > 0 &&
         (labels[b_begin - 1] == last || labels[b_begin - 1] == kSharedLabel)) {
    --b_begin;
  }
  SideKeys keys;
  // Affix runs alone are not side material.
  auto has = [&](int begin, int end, char label) {
    return std::find(labels.begin() + begin, labels.begin() + end, label) !=
           labels.begin() + end;
  };
  if (has(0, a_end, kFirstBaseLabel) || has(0, a_end, kSharedLabel)) {
    keys.a = utf8::Encode(std::u32string_view(surface).substr(0, a_end));
  }
  if (has(b_begin, n, last) || has(b_begin, n, kSharedLabel)) {
    keys.b = utf8::Encode(std::u32string_view(surface).substr(b_begin));
  }
  return keys;
}

absl::StatusOr<CandidateSet> GenerateCandidates(
    const ComplexWordRecord& record, const CandidateVocab& vocab,
    const CandidateOptions& options) {
  if (record.bases.size() < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("\"", record.surface, "\" lists fewer than two bases"));
  }
  absl::StatusOr<SideKeys> keys = ExtractSideKeys(record);
  if (!keys.ok()) return keys.status();

  CandidateSet set;
  set.blend_id = record.id();
  set.surface = utf8::ToLower(record.surface);
  set.true_a = utf8::ToLower(record.bases.front());
  set.true_b = utf8::ToLower(record.bases.back());
  set.a_present = vocab.Contains(set.true_a);
  set.b_present = vocab.Contains(set.true_b);

  auto build = [&](const std::string& key, const std::string& truth,
                   bool present, bool prefix) {
    std::vector<std::string> found;
    if (static_cast<int>(utf8::Length(key)) >= options.min_overlap) {
      found = prefix ? vocab.WithPrefix(key) : vocab.WithSuffix(key);
    }
    const std::string true_stem = PorterStem(truth);
    std::vector<std::string> out;
    for (std::string& w : found) {
      if (w == set.surface) continue;
      if (w != truth && PorterStem(w) == true_stem) continue;
      out.push_back(std::move(w));
    }
    if (present && !std::binary_search(out.begin(), out.end(), truth)) {
      out.insert(std::lower_bound(out.begin(), out.end(), truth), truth);
    }
    return out;
  };
  set.side_a = build(keys->a, set.true_a, set.a_present, /*prefix=*/true);
  set.side_b = build(keys->b, set.true_b, set.b_present, /*prefix=*/false);
  return set;
}

std::string SerializeCandidateSet(const CandidateSet& set) {
  ordered_json out;
  out["id"] = set.blend_id;
  out["surface"] = set.surface;
  out["true_a"] = set.true_a;
  out["true_b"] = set.true_b;
  out["a_present"] = set.a_present;
  out["b_present"] = set.b_present;
  out["side_a"] = set.side_a;
  out["side_b"] = set.side_b;
  return out.dump();
}

absl::StatusOr<CandidateSet> ParseCandidateSet(absl::string_view line) {
  const json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded() || !obj.is_object()) {
    return absl::InvalidArgumentError("candidate set is not a JSON object");
  }
  CandidateSet set;
  try {
    set.blend_id = obj.at("id").get<std::string>();
    set.surface = obj.at("surface").get<std::string>();
    set.true_a = obj.at("true_a").get<std::string>();
    set.true_b = obj.at("true_b").get<std::string>();
    set.side_a = obj.at("side_a").get<std::vector<std::string>>();
    set.side_b = obj.at("side_b").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed candidate set: ", e.what()));
  }
  // Presence follows the lists, whatever the flags say.
  set.a_present = std::find(set.side_a.begin(), set.side_a.end(),
                            set.true_a) != set.side_a.end();
  set.b_present = std::find(set.side_b.begin(), set.side_b.end(),
                            set.true_b) != set.side_b.end();
  for (auto* side : {&set.side_a, &set.side_b}) {
    std::sort(side->begin(), side->end());
    side->erase(std::unique(side->begin(), side->end()), side->end());
  }
  return set;
}

absl::StatusOr<std::vector<CandidateSet>> LoadCandidateSets(
    const std::string& path) {
  return LoadJsonLines<CandidateSet>(path, ParseCandidateSet);
}

std::string SerializeRanking(const Ranking& ranking) {
  ordered_json out;
  out["id"] = ranking.blend_id;
  if (ranking.pairs.has_value()) {
    ordered_json pairs = ordered_json::array();
    for (const auto& [a, b] : *ranking.pairs) pairs.push_back({a, b});
    out["pairs"] = std::move(pairs);
  }
  if (ranking.side_a.has_value()) out["side_a"] = *ranking.side_a;
  if (ranking.side_b.has_value()) out["side_b"] = *ranking.side_b;
  return out.dump();
}

absl::StatusOr<Ranking> ParseRanking(absl::string_view line) {
  const json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded() || !obj.is_object()) {
    return absl::InvalidArgumentError("ranking is not a JSON object");
  }
  Ranking ranking;
  auto id = obj.find("id");
  if (id == obj.end() || !id->is_string()) {
    return absl::InvalidArgumentError("ranking has no string \"id\"");
  }
  ranking.blend_id = id->get<std::string>();
  absl::StatusOr<std::optional<std::vector<WordPair>>> pairs =
      OptionalList<WordPair>(obj, "pairs");
  if (!pairs.ok()) return pairs.status();
  ranking.pairs = *std::move(pairs);
  for (auto [key, field] : {std::pair{"side_a", &ranking.side_a},
                            std::pair{"side_b", &ranking.side_b}}) {
    absl::StatusOr<std::optional<std::vector<std::string>>> side =
        OptionalList<std::string>(obj, key);
    if (!side.ok()) return side.status();
    *field = *std::move(side);
  }
  return ranking;
}

absl::StatusOr<std::vector<Ranking>> LoadRankings(const std::string& path) {
  return LoadJsonLines<Ranking>(path, ParseRanking);
}

std::vector<WordPair> AllPairs(const CandidateSet& candidates) {
  std::vector<WordPair> pairs;
  pairs.reserve(candidates.side_a.size() * candidates.side_b.size());
  for (const std::string& a : candidates.side_a) {
    for (const std::string& b : candidates.side_b) pairs.emplace_back(a, b);
  }
  return pairs;
}

absl::StatusOr<RecoveryScore> ScoreRanking(const CandidateSet& candidates,
                                           const Ranking& ranking) {
  RecoveryScore score;
  auto not_permutation = [&](absl::string_view what) {
    return absl::InvalidArgumentError(
        absl::StrCat("ranking of ", what, " for \"", candidates.blend_id,
                     "\" is not a permutation of its candidates"));
  };
  if (ranking.side_a.has_value()) {
    if (!IsPermutation(*ranking.side_a, candidates.side_a)) {
      return not_permutation("side A");
    }
    score.rank_a = RankOf(*ranking.side_a, candidates.true_a);
  }
  if (ranking.side_b.has_value()) {
    if (!IsPermutation(*ranking.side_b, candidates.side_b)) {
      return not_permutation("side B");
    }
    score.rank_b = RankOf(*ranking.side_b, candidates.true_b);
  }
  if (ranking.pairs.has_value()) {
    if (!IsPermutation(*ranking.pairs, AllPairs(candidates))) {
      return not_permutation("pairs");
    }
    score.rank_pair =
        ranking.pairs->empty()
            ? 1
            : RankOf(*ranking.pairs,
                     WordPair(candidates.true_a, candidates.true_b));
    score.top1_correct = *score.rank_pair == 1;
  }
  return score;
}

absl::StatusOr<RecoveryMetrics> AggregateRecovery(
    absl::Span<const RecoveryScore> scores) {
  if (scores.empty()) return absl::InvalidArgumentError("no recovery scores");
  RecoveryMetrics metrics;
  metrics.items = static_cast<int>(scores.size());
  auto mean_rr = [&](std::optional<int> RecoveryScore::*field)
      -> std::optional<double> {
    double sum = 0;
    int n = 0;
    for (const RecoveryScore& s : scores) {
      if (!(s.*field).has_value()) continue;
      sum += 1.0 / *(s.*field);
      ++n;
    }
    if (n == 0) return std::nullopt;
    return sum / n;
  };
  metrics.mrr_a = mean_rr(&RecoveryScore::rank_a);
  metrics.mrr_b = mean_rr(&RecoveryScore::rank_b);
  metrics.mrr_pair = mean_rr(&RecoveryScore::rank_pair);
  int correct = 0;
  int n = 0;
  for (const RecoveryScore& s : scores) {
    if (!s.top1_correct.has_value()) continue;
    correct += *s.top1_correct;
    ++n;
  }
  if (n > 0) metrics.p_at_1 = static_cast<double>(correct) / n;
  return metrics;
}

Ranking LowerBoundRanking(const CandidateSet& candidates) {
  Ranking ranking;
  ranking.blend_id = candidates.blend_id;
  auto last = [](std::vector<std::string> list, const std::string& truth) {
    std::stable_partition(list.begin(), list.end(),
                          [&](const std::string& w) { return w != truth; });
    return list;
  };
  ranking.side_a = last(candidates.side_a, candidates.true_a);
  ranking.side_b = last(candidates.side_b, candidates.true_b);
  std::vector<WordPair> pairs = AllPairs(candidates);
  const WordPair truth(candidates.true_a, candidates.true_b);
  std::stable_partition(pairs.begin(), pairs.end(),
                        [&](const WordPair& p) { return p != truth; });
  ranking.pairs = std::move(pairs);
  return ranking;
}

}  // namespace unblend
