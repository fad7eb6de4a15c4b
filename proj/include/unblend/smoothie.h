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


// "Smoothies": mock blends made from two bases by deleting characters at the
// seam (the end of the first base and the start of the second), used as a
// form-level control for compounds.

#ifndef UNBLEND_SMOOTHIE_H_
#define UNBLEND_SMOOTHIE_H_

#include <random>
#include <string>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "absl/types/span.h"
#include "unblend/corpus.h"
#include "unblend/paxobs.h"

namespace unblend {

struct Smoothie {
  std::string surface;
  PaxobsLabeling labeling;  // A...AB...B
  int deleted = 0;
};

// Draws k ~ Binomial(|a| + |b|, rate), capped so each base keeps at least
// one character, and deletes k seam characters split uniformly over the
// feasible (from the end of a, from the start of b) divisions. Fails when a
// base is empty, rate is outside [0, 1), or the expected deletion
// rate * (|a| + |b|) exceeds what the bases can lose.
absl::StatusOr<Smoothie> SynthesizeSmoothie(absl::string_view base_a,
                                            absl::string_view base_b,
                                            double rate, std::mt19937_64& rng);

// A compound turned into a smoothie record: surface, labeling and the first
// occurrence in the context replaced; grouped as "smoothie" by the probe.
// The compound must have exactly two bases.
absl::StatusOr<ComplexWordRecord> SmoothieRecord(
    const ComplexWordRecord& compound, double rate, std::mt19937_64& rng);

// Micro-averaged deletion rate over the linear blends of a corpus. Zero when
// there are none.
double LinearBlendDeletionRate(absl::Span<const ComplexWordRecord> records);

}  // namespace unblend

#endif  // UNBLEND_SMOOTHIE_H_
