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

#ifndef UNBLEND_WORDPIECE_H_
#define UNBLEND_WORDPIECE_H_

#include <optional>
#include <string>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace unblend {

// Inference-only WordPiece over a fixed vocabulary. Word-noninitial entries
// carry the "##" continuation marker.
class WordPieceVocab {
 public:
  static constexpr absl::string_view kDefaultUnknown = "[UNK]";
  static constexpr int kMaxInputChars = 100;

  // Entry ids are positions in `entries`. When `unknown` is set and present
  // in the entries, words that cannot be covered encode to that piece alone.
  static absl::StatusOr<WordPieceVocab> FromEntries(
      std::vector<std::string> entries,
      std::optional<std::string> unknown = std::string(kDefaultUnknown));

  // One piece per line; line index is the id.
  static absl::StatusOr<WordPieceVocab> Load(
      const std::string& path,
      std::optional<std::string> unknown = std::string(kDefaultUnknown));

  // Greedy longest-match-first, left to right. With `continuation`, the
  // first piece is also matched as a "##" piece. Fails with NotFound when
  // some position has no match and no unknown piece is configured.
  absl::StatusOr<std::vector<std::string>> Encode(
      absl::string_view word, bool continuation = false) const;

  bool Contains(absl::string_view piece) const;
  std::optional<int> Id(absl::string_view piece) const;
  size_t size() const { return entries_.size(); }
  const std::optional<std::string>& unknown() const { return unknown_; }

 private:
  WordPieceVocab() = default;

  std::vector<std::string> entries_;
  absl::flat_hash_map<std::string, int> ids_;
  std::optional<std::string> unknown_;
};

}  // namespace unblend

#endif  // UNBLEND_WORDPIECE_H_
