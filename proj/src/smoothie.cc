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


#include "unblend/smoothie.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "unblend/utf8.h"

namespace unblend {

absl::StatusOr<Smoothie> SynthesizeSmoothie(absl::string_view base_a,
                                            absl::string_view base_b,
                                            double rate, std::mt19937_64& rng) {
  const std::u32string a = utf8::Decode(base_a);
  const std::u32string b = utf8::Decode(base_b);
  if (a.empty() || b.empty()) {
    return absl::InvalidArgumentError("smoothie bases must be non-empty");
  }
  if (!(rate >= 0 && rate < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("deletion rate ", rate, " is outside [0, 1)"));
  }
  const int la = static_cast<int>(a.size());
  const int lb = static_cast<int>(b.size());
  const int capacity = (la - 1) + (lb - 1);
  if (rate * (la + lb) > capacity) {
    return absl::InvalidArgumentError(absl::StrCat(
        "deleting ", rate * (la + lb), " characters on average from \"",
        base_a, "\" + \"", base_b, "\" would empty a base"));
  }
  int k = 0;
  if (rate > 0) {
    std::binomial_distribution<int> draw(la + lb, rate);
    k = std::min(draw(rng), capacity);
  }
  const int lo = std::max(0, k - (lb - 1));
  const int hi = std::min(k, la - 1);
  const int from_a = std::uniform_int_distribution<int>(lo, hi)(rng);
  const int from_b = k - from_a;

  std::u32string surface = a.substr(0, la - from_a);
  surface += b.substr(from_b);
  Smoothie smoothie;
  smoothie.surface = utf8::Encode(surface);
  smoothie.labeling = *PaxobsLabeling::Parse(
      std::string(la - from_a, kFirstBaseLabel) +
      std::string(lb - from_b, BaseLabel(1)));
  smoothie.deleted = k;
  return smoothie;
}

absl::StatusOr<ComplexWordRecord> SmoothieRecord(
    const ComplexWordRecord& compound, double rate, std::mt19937_64& rng) {
  if (compound.bases.size() != 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        "\"", compound.surface, "\" needs exactly two bases for a smoothie"));
  }
  const std::optional<TokenSpan> span =
      FindToken(compound.context, compound.surface);
  if (!span.has_value()) {
    return absl::NotFoundError(absl::StrCat(
        "\"", compound.surface, "\" does not occur in its context"));
  }
  absl::StatusOr<Smoothie> smoothie = SynthesizeSmoothie(
      utf8::ToLower(compound.bases[0]), utf8::ToLower(compound.bases[1]), rate,
      rng);
  if (!smoothie.ok()) return smoothie.status();
  ComplexWordRecord record = compound;
  record.surface = smoothie->surface;
  record.labeling = smoothie->labeling;
  record.context = absl::StrCat(compound.context.substr(0, span->begin),
                                smoothie->surface,
                                compound.context.substr(span->end));
  record.source_id = absl::StrCat(compound.id(), "~smoothie");
  return record;
}

double LinearBlendDeletionRate(absl::Span<const ComplexWordRecord> records) {
  double deleted = 0;
  int total = 0;
  for (const ComplexWordRecord& r : records) {
    if (r.word_class != WordClass::kBlend) continue;
    absl::StatusOr<bool> linear = IsLinear(r.labeling);
    if (!linear.ok() || !*linear) continue;
    int chars = 0;
    for (const std::string& base : r.bases) {
      chars += static_cast<int>(utf8::Length(base));
    }
    deleted += std::round(DeletionRate(r) * chars);
    total += chars;
  }
  return total == 0 ? 0 : deleted / total;
}

}  // namespace unblend
