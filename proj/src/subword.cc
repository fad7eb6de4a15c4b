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

#include "unblend/subword.h"

#include "absl/status/status.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "unblend/utf8.h"

namespace unblend {

WordCounts CountWords(std::istream& in, bool lowercase) {
  WordCounts counts;
  std::string token;
  while (in >> token) {
    if (lowercase) token = utf8::ToLower(token);
    ++counts[token];
  }
  return counts;
}

WordCounts CountWords(absl::Span<const std::string> tokens) {
  WordCounts counts;
  for (const std::string& t : tokens) {
    if (!t.empty()) ++counts[t];
  }
  return counts;
}

absl::StatusOr<Segmentation> PiecesToSegmentation(
    absl::string_view word, absl::Span<const std::string> pieces) {
  std::string spelled;
  std::vector<int> cuts;
  int position = 0;
  for (size_t i = 0; i < pieces.size(); ++i) {
    absl::string_view piece = pieces[i];
    if (i > 0 && absl::StartsWith(piece, kContinuationMarker) &&
        piece.size() > kContinuationMarker.size()) {
      piece.remove_prefix(kContinuationMarker.size());
    }
    if (i > 0) cuts.push_back(position);
    position += static_cast<int>(utf8::Length(piece));
    spelled.append(piece.data(), piece.size());
  }
  if (spelled != word) {
    return absl::InvalidArgumentError(
        absl::StrCat("pieces [", absl::StrJoin(pieces, ", "),
                     "] do not spell \"", word, "\""));
  }
  return Segmentation::Create(std::move(cuts), position);
}

}  // namespace unblend
