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

#ifndef UNBLEND_BPE_H_
#define UNBLEND_BPE_H_

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "unblend/subword.h"

namespace unblend {

using SymbolPair = std::pair<std::string, std::string>;

// Byte-pair encoding over Unicode characters, without word-boundary markers.
class BpeModel {
 public:
  // Merges the most frequent adjacent pair until the vocabulary (alphabet
  // plus merged symbols) reaches `vocab_size` or no pair is left. Equal
  // counts go to the lexicographically smaller (left, right) pair.
  static absl::StatusOr<BpeModel> Train(const WordCounts& corpus,
                                        int vocab_size);

  static absl::StatusOr<BpeModel> FromMerges(std::vector<SymbolPair> merges);

  // "left right" per line, in merge order.
  static absl::StatusOr<BpeModel> Load(const std::string& path);
  absl::Status Save(const std::string& path) const;

  // Repeatedly merges the adjacent pair with the earliest merge rank.
  std::vector<std::string> Encode(absl::string_view word) const;

  const std::vector<SymbolPair>& merges() const { return merges_; }
  const std::set<std::string>& vocab() const { return vocab_; }

 private:
  BpeModel(std::vector<SymbolPair> merges, std::set<std::string> vocab);

  std::vector<SymbolPair> merges_;
  std::set<std::string> vocab_;
  absl::flat_hash_map<std::string, int> rank_;  // "left\x1fright" -> rank
};

}  // namespace unblend

#endif  // UNBLEND_BPE_H_
