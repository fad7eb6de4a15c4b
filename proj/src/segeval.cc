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

#include "unblend/segeval.h"

#include <algorithm>
#include <bitset>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace unblend {
namespace {

double Harmonic(double p, double r) {
  return p + r > 0 ? 2 * p * r / (p + r) : 0.0;
}

}  // namespace

absl::StatusOr<SegScore> ScoreSegmentation(const PaxobsLabeling& labeling,
                                           const Segmentation& predicted) {
  const int n = static_cast<int>(labeling.size());
  if (predicted.length() != n) {
    return absl::InvalidArgumentError(absl::StrCat(
        "segmentation over ", predicted.length(), " characters for ", n,
        " labels"));
  }
  for (int cut : predicted.cuts()) {
    if (cut <= 0 || cut >= n) {
      return absl::OutOfRangeError(
          absl::StrCat("cut ", cut, " outside (0, ", n, ")"));
    }
  }

  const auto [body_begin, body_end] = labeling.BodyRange();
  SegScore score;
  for (int cut : predicted.cuts()) {
    if (cut <= body_begin || cut >= body_end) continue;
    if (labeling[cut - 1] == labeling[cut]) {
      ++score.fp_cuts;
    } else {
      ++score.tp_cuts;
    }
  }

  bool all_lenient = true;
  bool all_strict = true;
  for (auto [begin, end] : predicted.Segments()) {
    begin = std::max(begin, body_begin);
    end = std::min(end, body_end);
    if (begin >= end) continue;
    ++score.scored_segments;
    std::bitset<kMaxBases> bases;
    bool shared = false;
    bool orphan = false;
    for (int i = begin; i < end; ++i) {
      const char c = labeling[i];
      if (IsBaseLabel(c)) bases.set(BaseIndex(c));
      shared |= c == kSharedLabel;
      orphan |= c == kOrphanLabel;
    }
    const bool lenient = bases.count() <= 1;
    // Shared or orphan material only spoils a segment that also holds base
    // material; on their own they are sound, so all-chars is fully sound.
    const bool strict = lenient && !((shared || orphan) && bases.any());
    score.sound_lenient += lenient;
    score.sound_strict += strict;
    all_lenient &= lenient;
    all_strict &= strict;
  }
  score.exact_match_lenient = score.fp_cuts == 0 && all_lenient;
  score.exact_match_strict = score.fp_cuts == 0 && all_strict;
  return score;
}

void SegTotals::Add(const SegScore& score) {
  ++items;
  tp_cuts += score.tp_cuts;
  fp_cuts += score.fp_cuts;
  sound_lenient += score.sound_lenient;
  sound_strict += score.sound_strict;
  scored_segments += score.scored_segments;
  exact_lenient += score.exact_match_lenient;
  exact_strict += score.exact_match_strict;
}

SegTotals& SegTotals::operator+=(const SegTotals& other) {
  items += other.items;
  tp_cuts += other.tp_cuts;
  fp_cuts += other.fp_cuts;
  sound_lenient += other.sound_lenient;
  sound_strict += other.sound_strict;
  scored_segments += other.scored_segments;
  exact_lenient += other.exact_lenient;
  exact_strict += other.exact_strict;
  return *this;
}

absl::StatusOr<SegMetrics> Finalize(const SegTotals& totals) {
  if (totals.items == 0) {
    return absl::InvalidArgumentError("no segmentation scores to aggregate");
  }
  SegMetrics m;
  m.items = totals.items;
  const long predicted = totals.tp_cuts + totals.fp_cuts;
  m.precision = predicted == 0 ? 1.0
                               : static_cast<double>(totals.tp_cuts) / predicted;
  if (totals.scored_segments == 0) {
    m.lenient_recall = m.strict_recall = 1.0;
  } else {
    m.lenient_recall =
        static_cast<double>(totals.sound_lenient) / totals.scored_segments;
    m.strict_recall =
        static_cast<double>(totals.sound_strict) / totals.scored_segments;
  }
  m.lenient_f1 = Harmonic(m.precision, m.lenient_recall);
  m.strict_f1 = Harmonic(m.precision, m.strict_recall);
  m.lenient_em_rate = static_cast<double>(totals.exact_lenient) / totals.items;
  m.strict_em_rate = static_cast<double>(totals.exact_strict) / totals.items;
  m.mean_segments =
      static_cast<double>(totals.scored_segments) / totals.items;
  return m;
}

absl::StatusOr<SegMetrics> Aggregate(absl::Span<const SegScore> scores) {
  SegTotals totals;
  for (const SegScore& s : scores) totals.Add(s);
  return Finalize(totals);
}

absl::StatusOr<std::vector<Segmentation>> OracleBestMatch(
    const PaxobsLabeling& labeling) {
  const int n = static_cast<int>(labeling.size());
  if (n == 0 || n > kOracleMaxLength) {
    return absl::OutOfRangeError(absl::StrCat(
        "oracle enumeration needs 1 to ", kOracleMaxLength,
        " characters, got ", n));
  }
  std::vector<Segmentation> matches;
  const unsigned limit = 1u << (n - 1);
  for (unsigned mask = 0; mask < limit; ++mask) {
    std::vector<int> cuts;
    for (int i = 1; i < n; ++i) {
      if (mask & (1u << (i - 1))) cuts.push_back(i);
    }
    absl::StatusOr<Segmentation> seg = Segmentation::Create(std::move(cuts), n);
    if (!seg.ok()) return seg.status();
    absl::StatusOr<SegScore> score = ScoreSegmentation(labeling, *seg);
    if (!score.ok()) return score.status();
    if (score->exact_match_lenient) matches.push_back(*std::move(seg));
  }
  return matches;
}

}  // namespace unblend
