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

// Scoring predicted segmentations against PAXOBS labels.
//
// Cuts touching prefix or suffix material are free. Any other cut between
// two characters with the same label is a false positive; the remaining cuts
// are true positives. After clipping away affixes, each predicted segment is
// leniently sound when it holds exclusive material of at most one base, and
// strictly sound when it is also free of O and does not mix X with base
// material. Recall is the fraction of sound segments among scored segments.

#ifndef UNBLEND_SEGEVAL_H_
#define UNBLEND_SEGEVAL_H_

#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "unblend/paxobs.h"

namespace unblend {

struct SegScore {
  int tp_cuts = 0;
  int fp_cuts = 0;
  int sound_lenient = 0;
  int sound_strict = 0;
  int scored_segments = 0;
  bool exact_match_lenient = false;
  bool exact_match_strict = false;
};

absl::StatusOr<SegScore> ScoreSegmentation(const PaxobsLabeling& labeling,
                                           const Segmentation& predicted);

// Summed counts. Adding totals is associative and commutative, so per-worker
// partial sums can be merged in any order.
struct SegTotals {
  long items = 0;
  long tp_cuts = 0;
  long fp_cuts = 0;
  long sound_lenient = 0;
  long sound_strict = 0;
  long scored_segments = 0;
  long exact_lenient = 0;
  long exact_strict = 0;

  void Add(const SegScore& score);
  SegTotals& operator+=(const SegTotals& other);
  friend bool operator==(const SegTotals&, const SegTotals&) = default;
};

struct SegMetrics {
  long items = 0;
  double precision = 0;
  double lenient_recall = 0;
  double strict_recall = 0;
  double lenient_f1 = 0;
  double strict_f1 = 0;
  double lenient_em_rate = 0;
  double strict_em_rate = 0;
  double mean_segments = 0;
};

// Micro-averaged metrics. Precision is 1 when no non-free cut was predicted;
// recall is 1 when nothing was scored.
absl::StatusOr<SegMetrics> Finalize(const SegTotals& totals);
absl::StatusOr<SegMetrics> Aggregate(absl::Span<const SegScore> scores);

inline constexpr int kOracleMaxLength = 16;

// Every segmentation of the labeled word that is a lenient exact match, in
// order of the bitmask over cut positions. Enumerates all 2^(n-1) cut sets.
absl::StatusOr<std::vector<Segmentation>> OracleBestMatch(
    const PaxobsLabeling& labeling);

}  // namespace unblend

#endif  // UNBLEND_SEGEVAL_H_
