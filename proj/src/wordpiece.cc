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

#include "unblend/wordpiece.h"

#include <fstream>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/strip.h"
#include "unblend/subword.h"
#include "unblend/utf8.h"

namespace unblend {

absl::StatusOr<WordPieceVocab> WordPieceVocab::FromEntries(
    std::vector<std::string> entries, std::optional<std::string> unknown) {
  WordPieceVocab vocab;
  for (int i = 0; i < static_cast<int>(entries.size()); ++i) {
    if (entries[i].empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("empty vocabulary entry at line ", i + 1));
    }
    // First occurrence keeps its id, as in the reference loaders.
    vocab.ids_.try_emplace(entries[i], i);
  }
  vocab.entries_ = std::move(entries);
  if (unknown.has_value() && vocab.ids_.contains(*unknown)) {
    vocab.unknown_ = std::move(unknown);
  }
  return vocab;
}

absl::StatusOr<WordPieceVocab> WordPieceVocab::Load(
    const std::string& path, std::optional<std::string> unknown) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::vector<std::string> entries;
  std::string line;
  while (std::getline(in, line)) {
    entries.emplace_back(absl::StripTrailingAsciiWhitespace(line));
  }
  while (!entries.empty() && entries.back().empty()) entries.pop_back();
  return FromEntries(std::move(entries), std::move(unknown));
}

absl::StatusOr<std::vector<std::string>> WordPieceVocab::Encode(
    absl::string_view word, bool continuation) const {
  const std::vector<std::string> chars = utf8::SplitChars(word);
  auto fail = [&](absl::string_view why) -> absl::StatusOr<std::vector<std::string>> {
    if (unknown_.has_value()) return std::vector<std::string>{*unknown_};
    return absl::NotFoundError(absl::StrCat("cannot encode \"", word,
                                            "\": ", why));
  };
  if (chars.empty()) return absl::InvalidArgumentError("empty word");
  if (static_cast<int>(chars.size()) > kMaxInputChars) {
    return fail("word too long");
  }

  std::vector<std::string> pieces;
  size_t start = 0;
  while (start < chars.size()) {
    const bool marked = start > 0 || continuation;
    size_t end = chars.size();
    std::string match;
    while (end > start) {
      std::string candidate = marked ? std::string(kContinuationMarker) : "";
      for (size_t i = start; i < end; ++i) candidate += chars[i];
      if (ids_.contains(candidate)) {
        match = std::move(candidate);
        break;
      }
      --end;
    }
    if (match.empty()) {
      std::string rest;
      for (size_t i = start; i < chars.size(); ++i) rest += chars[i];
      return fail(absl::StrCat("no piece matches \"", rest, "\""));
    }
    pieces.push_back(std::move(match));
    start = end;
  }
  return pieces;
}

bool WordPieceVocab::Contains(absl::string_view piece) const {
  return ids_.contains(piece);
}

std::optional<int> WordPieceVocab::Id(absl::string_view piece) const {
  auto it = ids_.find(piece);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

}  // namespace unblend
