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

// Complex-word records and the line-delimited JSON corpus format:
//
//   {"surface": "shoptics", "class": "blend", "bases": ["shop", "optics"],
//    "paxobs": "AAXXBBBS", "relation": "loc-part-whole",
//    "context": "...", "source_id": null}

#ifndef UNBLEND_CORPUS_H_
#define UNBLEND_CORPUS_H_

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "absl/types/span.h"
#include "unblend/paxobs.h"

namespace unblend {

enum class WordClass { kBlend, kTransparentCompound, kOpaqueCompound };

absl::string_view WordClassName(WordClass c);
absl::StatusOr<WordClass> ParseWordClass(absl::string_view name);

struct ComplexWordRecord {
  std::string surface;
  WordClass word_class = WordClass::kBlend;
  std::vector<std::string> bases;
  PaxobsLabeling labeling;
  std::optional<std::string> relation;
  std::string context;
  std::optional<std::string> source_id;

  // source_id when present, otherwise the surface form.
  std::string id() const { return source_id.value_or(surface); }
};

// Labeling checks plus the record-level invariants: one distinct base letter
// per listed base (or a single base labeled only with A), and each base's
// letters together with X reading as a subsequence of that base.
ValidationReport ValidateRecord(const ComplexWordRecord& record);

// Parses one JSON line. Schema errors fail; invariant checks are left to
// ValidateRecord.
absl::StatusOr<ComplexWordRecord> ParseRecord(absl::string_view line);

// Single-line JSON with the fixed field order of the corpus format.
std::string SerializeRecord(const ComplexWordRecord& record);

struct CorpusIssue {
  int line = 0;
  std::string message;
};

// Reads records, skipping blank lines. Malformed or invalid lines are
// reported in `issues` and left out of the result.
std::vector<ComplexWordRecord> ReadCorpus(std::istream& in,
                                          std::vector<CorpusIssue>* issues);

// Loads a corpus file and fails, naming every offending line, unless all
// records parse and validate.
absl::StatusOr<std::vector<ComplexWordRecord>> LoadCorpus(
    const std::string& path);

struct TokenSpan {
  size_t begin = 0;  // byte offsets into the searched text
  size_t end = 0;
};

// First case-insensitive whole-token occurrence of `word` in `text`.
std::optional<TokenSpan> FindToken(absl::string_view text,
                                   absl::string_view word);

struct CorpusStats {
  int records = 0;
  std::map<WordClass, int> class_counts;
  int blends = 0;
  int linear_blends = 0;
  double linear_fraction = 0;  // over blends
  double mean_bases = 0;       // over all records
  // Over blends: contexts containing at least one base, and all bases, as
  // case-insensitive whole tokens.
  double context_any_base_fraction = 0;
  double context_all_bases_fraction = 0;
};

absl::StatusOr<CorpusStats> ComputeCorpusStats(
    absl::Span<const ComplexWordRecord> records);

// Fraction of base characters lost in forming the word:
// (sum of base lengths - characters drawn from bases) / sum of base lengths,
// where each X character counts once for each of two bases and O characters
// come from no base. Clamped at zero.
double DeletionRate(const ComplexWordRecord& record);

}  // namespace unblend

#endif  // UNBLEND_CORPUS_H_
