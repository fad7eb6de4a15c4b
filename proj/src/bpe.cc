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

#include "unblend/bpe.h"

#include <cstdint>
#include <fstream>
#include <limits>
#include <queue>

#include "absl/container/flat_hash_set.h"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "unblend/utf8.h"

namespace unblend {
namespace {

std::string RankKey(absl::string_view left, absl::string_view right) {
  return absl::StrCat(left, "\x1f", right);
}

uint64_t PairKey(int left, int right) {
  return (static_cast<uint64_t>(left) << 32) | static_cast<uint32_t>(right);
}
int KeyLeft(uint64_t key) { return static_cast<int>(key >> 32); }
int KeyRight(uint64_t key) { return static_cast<int>(key & 0xffffffffu); }

// Working state for training. Symbols are interned; words are id sequences.
class BpeTrainer {
 public:
  explicit BpeTrainer(const WordCounts& corpus) {
    for (const auto& [word, freq] : corpus) {
      if (freq <= 0 || word.empty()) continue;
      std::vector<int> seq;
      for (const std::string& ch : utf8::SplitChars(word)) {
        seq.push_back(Intern(ch));
      }
      words_.push_back(std::move(seq));
      freqs_.push_back(freq);
    }
    alphabet_size_ = static_cast<int>(symbols_.size());
    for (int w = 0; w < static_cast<int>(words_.size()); ++w) {
      const auto& seq = words_[w];
      for (size_t i = 0; i + 1 < seq.size(); ++i) {
        const uint64_t key = PairKey(seq[i], seq[i + 1]);
        counts_[key] += freqs_[w];
        where_[key].push_back(w);
      }
    }
    for (const auto& [key, count] : counts_) heap_.push({count, key});
  }

  int alphabet_size() const { return alphabet_size_; }
  int vocab_size() const { return static_cast<int>(symbols_.size()); }

  // Applies the next merge. Returns false when no pair is left.
  bool Step(SymbolPair* merged) {
    uint64_t key;
    if (!PopBest(&key)) return false;
    const int left = KeyLeft(key);
    const int right = KeyRight(key);
    *merged = {symbols_[left], symbols_[right]};
    const int joined = Intern(symbols_[left] + symbols_[right]);

    absl::flat_hash_set<uint64_t> touched;
    absl::flat_hash_set<int> done;
    const std::vector<int> candidates = std::move(where_[key]);
    where_.erase(key);
    for (int w : candidates) {
      if (!done.insert(w).second) continue;
      std::vector<int>& seq = words_[w];
      const int64_t freq = freqs_[w];
      bool present = false;
      for (size_t i = 0; i + 1 < seq.size(); ++i) {
        if (seq[i] == left && seq[i + 1] == right) {
          present = true;
          break;
        }
      }
      if (!present) continue;
      for (size_t i = 0; i + 1 < seq.size(); ++i) {
        const uint64_t k = PairKey(seq[i], seq[i + 1]);
        counts_[k] -= freq;
        touched.insert(k);
      }
      std::vector<int> next;
      next.reserve(seq.size());
      for (size_t i = 0; i < seq.size();) {
        if (i + 1 < seq.size() && seq[i] == left && seq[i + 1] == right) {
          next.push_back(joined);
          i += 2;
        } else {
          next.push_back(seq[i]);
          ++i;
        }
      }
      seq = std::move(next);
      for (size_t i = 0; i + 1 < seq.size(); ++i) {
        const uint64_t k = PairKey(seq[i], seq[i + 1]);
        counts_[k] += freq;
        touched.insert(k);
        if (k != key) where_[k].push_back(w);
      }
    }
    counts_.erase(key);
    for (uint64_t k : touched) {
      auto it = counts_.find(k);
      if (it == counts_.end()) continue;
      if (it->second <= 0) {
        counts_.erase(it);
      } else {
        heap_.push({it->second, k});
      }
    }
    return true;
  }

 private:
  struct Entry {
    int64_t count;
    uint64_t key;
  };

  // Max-heap on count; among equal counts the lexicographically smaller
  // (left, right) pair wins.
  struct Worse {
    const std::vector<std::string>* symbols;
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.count != b.count) return a.count < b.count;
      const auto& s = *symbols;
      const std::string& al = s[KeyLeft(a.key)];
      const std::string& bl = s[KeyLeft(b.key)];
      if (al != bl) return al > bl;
      return s[KeyRight(a.key)] > s[KeyRight(b.key)];
    }
  };

  int Intern(const std::string& symbol) {
    auto [it, inserted] =
        ids_.emplace(symbol, static_cast<int>(symbols_.size()));
    if (inserted) symbols_.push_back(symbol);
    return it->second;
  }

  // Pops stale entries until the top reflects a live count.
  bool PopBest(uint64_t* key) {
    while (!heap_.empty()) {
      const Entry top = heap_.top();
      heap_.pop();
      auto it = counts_.find(top.key);
      if (it == counts_.end() || it->second != top.count) continue;
      *key = top.key;
      return true;
    }
    return false;
  }

  std::vector<std::string> symbols_;
  absl::flat_hash_map<std::string, int> ids_;
  std::vector<std::vector<int>> words_;
  std::vector<int64_t> freqs_;
  int alphabet_size_ = 0;
  absl::flat_hash_map<uint64_t, int64_t> counts_;
  absl::flat_hash_map<uint64_t, std::vector<int>> where_;
  std::priority_queue<Entry, std::vector<Entry>, Worse> heap_{
      Worse{&symbols_}};
};

}  // namespace

BpeModel::BpeModel(std::vector<SymbolPair> merges, std::set<std::string> vocab)
    : merges_(std::move(merges)), vocab_(std::move(vocab)) {
  for (int r = 0; r < static_cast<int>(merges_.size()); ++r) {
    rank_.try_emplace(RankKey(merges_[r].first, merges_[r].second), r);
  }
}

absl::StatusOr<BpeModel> BpeModel::Train(const WordCounts& corpus,
                                         int vocab_size) {
  BpeTrainer trainer(corpus);
  if (trainer.alphabet_size() == 0) {
    return absl::InvalidArgumentError("empty training corpus");
  }
  if (vocab_size < trainer.alphabet_size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("vocabulary size ", vocab_size,
                     " is smaller than the alphabet (",
                     trainer.alphabet_size(), " characters)"));
  }
  std::set<std::string> vocab;
  for (const auto& [word, freq] : corpus) {
    for (std::string& ch : utf8::SplitChars(word)) vocab.insert(std::move(ch));
  }
  std::vector<SymbolPair> merges;
  SymbolPair merged;
  while (static_cast<int>(vocab.size()) < vocab_size && trainer.Step(&merged)) {
    vocab.insert(merged.first + merged.second);
    merges.push_back(std::move(merged));
  }
  return BpeModel(std::move(merges), std::move(vocab));
}

absl::StatusOr<BpeModel> BpeModel::FromMerges(std::vector<SymbolPair> merges) {
  std::set<std::string> vocab;
  for (const auto& [left, right] : merges) {
    if (left.empty() || right.empty()) {
      return absl::InvalidArgumentError("merge with an empty symbol");
    }
    for (const std::string* side : {&left, &right}) {
      for (std::string& ch : utf8::SplitChars(*side)) {
        vocab.insert(std::move(ch));
      }
    }
    vocab.insert(left + right);
  }
  return BpeModel(std::move(merges), std::move(vocab));
}

absl::StatusOr<BpeModel> BpeModel::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::vector<SymbolPair> merges;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    absl::string_view text = absl::StripTrailingAsciiWhitespace(line);
    if (text.empty()) continue;
    std::vector<std::string> parts = absl::StrSplit(text, ' ');
    if (parts.size() != 2 || parts[0].empty() || parts[1].empty()) {
      return absl::InvalidArgumentError(absl::StrCat(
          path, ":", line_number, ": expected \"left right\""));
    }
    merges.emplace_back(std::move(parts[0]), std::move(parts[1]));
  }
  return FromMerges(std::move(merges));
}

absl::Status BpeModel::Save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  for (const auto& [left, right] : merges_) out << left << ' ' << right << '\n';
  out.close();
  if (!out) return absl::DataLossError(absl::StrCat("failed writing ", path));
  return absl::OkStatus();
}

std::vector<std::string> BpeModel::Encode(absl::string_view word) const {
  std::vector<std::string> symbols = utf8::SplitChars(word);
  while (symbols.size() > 1) {
    int best_rank = std::numeric_limits<int>::max();
    size_t best = 0;
    for (size_t i = 0; i + 1 < symbols.size(); ++i) {
      auto it = rank_.find(RankKey(symbols[i], symbols[i + 1]));
      if (it != rank_.end() && it->second < best_rank) {
        best_rank = it->second;
        best = i;
      }
    }
    if (best_rank == std::numeric_limits<int>::max()) break;
    const std::string left = symbols[best];
    const std::string right = symbols[best + 1];
    std::vector<std::string> next;
    next.reserve(symbols.size());
    for (size_t i = 0; i < symbols.size();) {
      if (i + 1 < symbols.size() && symbols[i] == left &&
          symbols[i + 1] == right) {
        next.push_back(left + right);
        i += 2;
      } else {
        next.push_back(std::move(symbols[i]));
        ++i;
      }
    }
    symbols = std::move(next);
  }
  return symbols;
}

}  // namespace unblend
