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

// Supervised character-level PAXOBS tagger: an averaged structured
// perceptron over character n-grams in a window around each position, with
// first-order label transitions and Viterbi decoding.

#ifndef UNBLEND_TAGGER_H_
#define UNBLEND_TAGGER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "absl/types/span.h"
#include "unblend/paxobs.h"

namespace unblend {

// Decoding prefers earlier labels in this order when scores tie.
inline constexpr absl::string_view kCanonicalLabelOrder = "PAXOBCDEFGHIJKLMNS";

struct TaggedWord {
  std::string word;
  PaxobsLabeling labeling;
};

struct TaggerOptions {
  int epochs = 30;
  uint64_t seed = 13;
  int window = 3;     // characters on each side
  int max_ngram = 3;  // longest n-gram feature
};

class TaggerModel {
 public:
  // `epoch_errors`, when given, receives the number of mislabeled
  // characters seen during each training pass.
  static absl::StatusOr<TaggerModel> Train(
      absl::Span<const TaggedWord> examples, const TaggerOptions& options,
      std::vector<long>* epoch_errors = nullptr);

  // All weights zero; every word decodes to the first label.
  static absl::StatusOr<TaggerModel> Zero(absl::string_view labels,
                                          int window = 3, int max_ngram = 3);

  // One label per character of `word`. The result need not be a valid
  // PAXOBS annotation.
  PaxobsLabeling Tag(absl::string_view word) const;

  std::string ToJson() const;
  static absl::StatusOr<TaggerModel> FromJson(absl::string_view text);
  absl::Status Save(const std::string& path) const;
  static absl::StatusOr<TaggerModel> Load(const std::string& path);

  const std::string& labels() const { return labels_; }
  int window() const { return window_; }
  int max_ngram() const { return max_ngram_; }

 private:
  TaggerModel() = default;

  int num_labels() const { return static_cast<int>(labels_.size()); }
  std::vector<int> Decode(absl::Span<const std::vector<int>> features) const;
  std::vector<std::vector<int>> LookupFeatures(absl::string_view word) const;

  std::string labels_;
  int window_ = 3;
  int max_ngram_ = 3;
  absl::flat_hash_map<std::string, int> feature_ids_;
  std::vector<std::string> feature_names_;
  // emission_[feature * num_labels + label]
  std::vector<double> emission_;
  // transition_[prev * num_labels + label]; prev == num_labels is the start.
  std::vector<double> transition_;

  friend class TaggerTrainer;
};

// Window n-gram feature strings for each character position.
std::vector<std::vector<std::string>> ExtractFeatures(absl::string_view word,
                                                      int window,
                                                      int max_ngram);

// Fraction of characters labeled as in the reference.
double CharacterAccuracy(const TaggerModel& model,
                         absl::Span<const TaggedWord> examples);

// Every character its own segment.
Segmentation AllCharsSegmentation(absl::string_view word);

}  // namespace unblend

#endif  // UNBLEND_TAGGER_H_
