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


// Masked-LM ranking of base candidates. The blend is replaced by mask slots
// in its context; candidates are ordered by the probabilities of their first
// pieces, and candidates sharing those pieces are re-ranked by inserting the
// shared pieces and predicting the next ones, until no ties remain.

#ifndef UNBLEND_MLM_RANKER_H_
#define UNBLEND_MLM_RANKER_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "unblend/mlm.h"
#include "unblend/rankers.h"
#include "unblend/recovery.h"

namespace unblend {

struct MlmVariant {
  bool pair = true;
  bool single_a = true;
  bool single_b = true;
  // Single-side inputs place the other side's true base next to the mask:
  // "[MASK] b" for side A, "a [MASK]" for side B.
  bool plus_other_base = false;
  // Only the masks (and whatever the backend adds around them).
  bool minus_context = false;
};

// "mlm" or "mlm:" followed by comma-separated options among pair, single_a,
// single_b, plus_other_base, minus_context. Naming any of the first three
// restricts the output to those views.
absl::StatusOr<MlmVariant> ParseMlmVariant(absl::string_view spec);

absl::StatusOr<Ranking> RankByMlm(const CandidateSet& candidates,
                                  MlmBackend& backend,
                                  const BlendContext& context,
                                  const MlmVariant& variant);

}  // namespace unblend

#endif  // UNBLEND_MLM_RANKER_H_
