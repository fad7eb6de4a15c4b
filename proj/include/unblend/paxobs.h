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

// Character-level PAXOBS labels for complex words.
//
// Every character of a blend or compound carries one label:
//   P  prefix material
//   S  suffix material
//   X  shared by more than one base
//   O  contributed by no base
//   A, B, C, ...  exclusive to the first, second, third... base
//
// Base letters are assigned in order of first exclusive material: the base
// whose exclusive characters appear earliest in the word is A. Letters run
// from A to N so they never collide with O, P, S or X.

#ifndef UNBLEND_PAXOBS_H_
#define UNBLEND_PAXOBS_H_

#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace unblend {

inline constexpr char kPrefixLabel = 'P';
inline constexpr char kSuffixLabel = 'S';
inline constexpr char kSharedLabel = 'X';
inline constexpr char kOrphanLabel = 'O';
inline constexpr char kFirstBaseLabel = 'A';
inline constexpr char kLastBaseLabel = 'N';
inline constexpr int kMaxBases = kLastBaseLabel - kFirstBaseLabel + 1;

inline bool IsBaseLabel(char c) {
  return c >= kFirstBaseLabel && c <= kLastBaseLabel;
}
inline bool IsAffixLabel(char c) {
  return c == kPrefixLabel || c == kSuffixLabel;
}
inline bool IsPaxobsLabel(char c) {
  return IsBaseLabel(c) || IsAffixLabel(c) || c == kSharedLabel ||
         c == kOrphanLabel;
}
// 0 for A, 1 for B, ...
inline int BaseIndex(char c) { return c - kFirstBaseLabel; }
inline char BaseLabel(int index) {
  return static_cast<char>(kFirstBaseLabel + index);
}

// One label per character. The type only guarantees that every label is in
// the alphabet; structural checks live in ValidateLabeling.
class PaxobsLabeling {
 public:
  PaxobsLabeling() = default;

  // Rejects characters outside the alphabet.
  static absl::StatusOr<PaxobsLabeling> Parse(absl::string_view labels);

  const std::string& str() const { return labels_; }
  size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  char operator[](size_t i) const { return labels_[i]; }

  // Number of distinct base letters present.
  int NumBases() const;

  // Indices [begin, end) of the characters that are not P or S.
  std::pair<int, int> BodyRange() const;

  friend bool operator==(const PaxobsLabeling&,
                         const PaxobsLabeling&) = default;

 private:
  explicit PaxobsLabeling(std::string labels) : labels_(std::move(labels)) {}

  std::string labels_;
};

// A strictly increasing set of cut indices in (0, length). Cut i separates
// character i-1 from character i.
class Segmentation {
 public:
  Segmentation() = default;

  // Sorts the cuts. Fails on duplicates or indices outside (0, length).
  static absl::StatusOr<Segmentation> Create(std::vector<int> cuts,
                                             int length);
  static Segmentation NoCuts(int length);

  const std::vector<int>& cuts() const { return cuts_; }
  int length() const { return length_; }

  // Half-open [begin, end) character ranges, left to right.
  std::vector<std::pair<int, int>> Segments() const;

  // Joins the pieces of `word` with `separator`, e.g. "sh;op;tic;s".
  std::string Render(absl::string_view word, absl::string_view separator) const;

  friend bool operator==(const Segmentation&, const Segmentation&) = default;

 private:
  Segmentation(std::vector<int> cuts, int length)
      : cuts_(std::move(cuts)), length_(length) {}

  std::vector<int> cuts_;
  int length_ = 0;
};

enum class Violation {
  kLengthMismatch,
  kEmpty,
  kNonContiguousBaseLetters,
  kPrefixPosition,
  kSuffixPosition,
  kBaseOrdering,
  kBaseCount,
  kBaseMaterial,
};

struct ValidationIssue {
  Violation kind;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const { return issues.empty(); }
  bool Has(Violation kind) const;
  std::string ToString() const;
};

// Structural checks that need only the labels.
ValidationReport ValidateLabeling(const PaxobsLabeling& labeling);

// Structural checks plus one label per scalar value of `word`.
ValidationReport ValidateLabeling(absl::string_view word,
                                  const PaxobsLabeling& labeling);

// A labeling is linear when it has no O and its body reads
// A* X* B* X* C* ... in base order. For two bases this is exactly "no A
// preceded by B or X, no B followed by A or X".
absl::StatusOr<bool> IsLinear(const PaxobsLabeling& labeling);

// Cuts at every label change.
Segmentation GoldSegmentation(const PaxobsLabeling& labeling);

// Cuts at label changes inside the body only, so prefix and suffix runs
// stay attached to the neighbouring body segment: shoptics/AAXXBBBS gives
// sh|op|tics.
Segmentation BodySegmentation(const PaxobsLabeling& labeling);

}  // namespace unblend

#endif  // UNBLEND_PAXOBS_H_
