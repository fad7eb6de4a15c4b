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


// Contextual similarity between a complex word and its bases: the word is
// encoded in its context sentence, then the sentence is re-encoded with the
// word replaced by its space-separated bases, and the two representations
// are compared layer by layer.

#ifndef UNBLEND_PROBE_H_
#define UNBLEND_PROBE_H_

#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "unblend/corpus.h"
#include "unblend/mlm.h"

namespace unblend {

enum class ProbeTokenization {
  kDefault,
  // The word enters the model pre-split at its PAXOBS label changes (affixes
  // stay with their neighbours), non-initial segments marked as
  // continuations: shoptics -> sh ##op ##tics.
  kPaxobsInformed,
};

// Longest piece sequence sent to the backend; the context is trimmed around
// the target to fit.
inline constexpr int kMaxProbePieces = 510;

struct SimilarityProfile {
  std::string word_id;
  std::string group;  // class name, or "smoothie"
  std::optional<std::string> relation;
  std::vector<double> cosines;  // one per layer
  int word_pieces = 0;
};

// The word's vector at a layer is the mean over its pieces; the bases'
// vector is the mean of each base's piece mean.
absl::StatusOr<SimilarityProfile> ComputeSimilarityProfile(
    const ComplexWordRecord& record, MlmBackend& backend,
    ProbeTokenization tokenization);

double Cosine(const std::vector<double>& u, const std::vector<double>& v);

enum class ProfileGrouping { kClass, kRelation };

struct GroupSummary {
  std::string group;
  int n = 0;
  std::vector<double> mean;  // per layer
  std::vector<double> sem;   // sample standard deviation / sqrt(n)
};

// Per-group, per-layer means and standard errors, groups in name order.
// Profiles without a relation are left out of relation grouping. Groups of
// `min_count` or fewer profiles are dropped.
absl::StatusOr<std::vector<GroupSummary>> AggregateProfiles(
    absl::Span<const SimilarityProfile> profiles, ProfileGrouping grouping,
    int min_count = 0);

}  // namespace unblend

#endif  // UNBLEND_PROBE_H_
