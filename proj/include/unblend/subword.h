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

#ifndef UNBLEND_SUBWORD_H_
#define UNBLEND_SUBWORD_H_

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "absl/types/span.h"
#include "unblend/paxobs.h"

namespace unblend {

// Word type -> frequency. Ordered so training is reproducible.
using WordCounts = std::map<std::string, int64_t>;

// Counts whitespace-separated tokens, optionally lowercased.
WordCounts CountWords(std::istream& in, bool lowercase);
WordCounts CountWords(absl::Span<const std::string> tokens);

// Vocabulary size used by the pretrained WordPiece model the domain
// tokenizers are compared against.
inline constexpr int kDefaultVocabSize = 30522;

inline constexpr absl::string_view kContinuationMarker = "##";

// Cuts at the cumulative piece lengths. A leading continuation marker on a
// non-initial piece is ignored. Fails when the pieces do not spell `word`.
absl::StatusOr<Segmentation> PiecesToSegmentation(
    absl::string_view word, absl::Span<const std::string> pieces);

}  // namespace unblend

#endif  // UNBLEND_SUBWORD_H_
