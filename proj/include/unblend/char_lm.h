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


// Character n-gram language model with additive smoothing, used to score
// base candidates as continuations of a blend's left (or right) context.

#ifndef UNBLEND_CHAR_LM_H_
#define UNBLEND_CHAR_LM_H_

#include <istream>
#include <map>
#include <string>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace unblend {

enum class LmDirection { kForward, kBackward };

struct CharLmOptions {
  int order = 5;
  double smoothing = 0.01;
  LmDirection direction = LmDirection::kForward;
};

class CharNgramLm {
 public:
  // Reserved symbols. They are control characters and never appear in
  // lowercased text we score.
  static constexpr char32_t kUnknown = 0x01;
  static constexpr char32_t kBoundary = 0x02;  // history padding
  static constexpr char32_t kEnd = 0x03;

  // Each non-empty line is a sequence, lowercased. Backward models read
  // lines reversed.
  static absl::StatusOr<CharNgramLm> Train(std::istream& text,
                                           const CharLmOptions& options);
  static absl::StatusOr<CharNgramLm> Train(
      const std::vector<std::string>& lines, const CharLmOptions& options);

  // No counts at all: every symbol is equally likely.
  static absl::StatusOr<CharNgramLm> Uniform(absl::string_view alphabet,
                                             const CharLmOptions& options);

  // log P(c | history) with add-k smoothing at full order. History shorter
  // than order - 1 is padded with the boundary symbol; characters outside
  // the alphabet map to the unknown symbol.
  double LogProb(std::u32string_view history, char32_t c) const;

  // Mean log-probability of the characters of `candidate` continuing
  // `context`. For backward models, `context` is the text to the right of
  // the slot in reading order; both are reversed before scoring.
  double ContinuationScore(absl::string_view context,
                           absl::string_view candidate) const;

  std::string ToJson() const;
  static absl::StatusOr<CharNgramLm> FromJson(absl::string_view text);
  absl::Status Save(const std::string& path) const;
  static absl::StatusOr<CharNgramLm> Load(const std::string& path);

  const CharLmOptions& options() const { return options_; }
  // Alphabet plus the unknown and end symbols.
  int vocab_size() const { return static_cast<int>(alphabet_.size()) + 2; }

 private:
  CharNgramLm() = default;

  char32_t Map(char32_t c) const;
  void Count(std::u32string_view line);

  CharLmOptions options_;
  std::u32string alphabet_;  // sorted
  // history (order - 1 symbols) -> next symbol -> count
  absl::flat_hash_map<std::u32string, std::map<char32_t, double>> counts_;
  absl::flat_hash_map<std::u32string, double> totals_;
};

}  // namespace unblend

#endif  // UNBLEND_CHAR_LM_H_
