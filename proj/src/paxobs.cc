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

#include "unblend/paxobs.h"

#include <algorithm>
#include <array>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "unblend/utf8.h"

namespace unblend {

absl::StatusOr<PaxobsLabeling> PaxobsLabeling::Parse(absl::string_view labels) {
  for (size_t i = 0; i < labels.size(); ++i) {
    if (!IsPaxobsLabel(labels[i])) {
      return absl::InvalidArgumentError(
          absl::StrCat("invalid PAXOBS label '", labels.substr(i, 1),
                       "' at position ", i));
    }
  }
  return PaxobsLabeling(std::string(labels));
}

int PaxobsLabeling::NumBases() const {
  std::array<bool, kMaxBases> seen{};
  for (char c : labels_) {
    if (IsBaseLabel(c)) seen[BaseIndex(c)] = true;
  }
  return static_cast<int>(std::count(seen.begin(), seen.end(), true));
}

std::pair<int, int> PaxobsLabeling::BodyRange() const {
  const int n = static_cast<int>(labels_.size());
  int begin = 0;
  while (begin < n && labels_[begin] == kPrefixLabel) ++begin;
  int end = n;
  while (end > begin && labels_[end - 1] == kSuffixLabel) --end;
  return {begin, end};
}

absl::StatusOr<Segmentation> Segmentation::Create(std::vector<int> cuts,
                                                  int length) {
  std::sort(cuts.begin(), cuts.end());
  for (size_t i = 0; i < cuts.size(); ++i) {
    if (cuts[i] <= 0 || cuts[i] >= length) {
      return absl::OutOfRangeError(absl::StrCat(
          "cut ", cuts[i], " outside (0, ", length, ")"));
    }
    if (i > 0 && cuts[i] == cuts[i - 1]) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate cut ", cuts[i]));
    }
  }
  return Segmentation(std::move(cuts), length);
}

Segmentation Segmentation::NoCuts(int length) { return Segmentation({}, length); }

std::vector<std::pair<int, int>> Segmentation::Segments() const {
  std::vector<std::pair<int, int>> out;
  int begin = 0;
  for (int cut : cuts_) {
    out.emplace_back(begin, cut);
    begin = cut;
  }
  if (length_ > 0) out.emplace_back(begin, length_);
  return out;
}

std::string Segmentation::Render(absl::string_view word,
                                 absl::string_view separator) const {
  const std::vector<std::string> chars = utf8::SplitChars(word);
  std::vector<std::string> parts;
  for (const auto& [begin, end] : Segments()) {
    std::string part;
    for (int i = begin; i < end && i < static_cast<int>(chars.size()); ++i) {
      part += chars[i];
    }
    parts.push_back(std::move(part));
  }
  return absl::StrJoin(parts, separator);
}

bool ValidationReport::Has(Violation kind) const {
  return std::any_of(issues.begin(), issues.end(),
                     [kind](const ValidationIssue& i) { return i.kind == kind; });
}

std::string ValidationReport::ToString() const {
  if (ok()) return "ok";
  std::vector<std::string> messages;
  for (const auto& issue : issues) messages.push_back(issue.message);
  return absl::StrJoin(messages, "; ");
}

ValidationReport ValidateLabeling(const PaxobsLabeling& labeling) {
  ValidationReport report;
  const std::string& labels = labeling.str();
  if (labels.empty()) {
    report.issues.push_back({Violation::kEmpty, "empty labeling"});
    return report;
  }

  std::array<int, kMaxBases> first_seen;
  first_seen.fill(-1);
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
    if (IsBaseLabel(labels[i]) && first_seen[BaseIndex(labels[i])] < 0) {
      first_seen[BaseIndex(labels[i])] = i;
    }
  }
  int used = 0;
  while (used < kMaxBases && first_seen[used] >= 0) ++used;
  const bool contiguous =
      used > 0 && std::all_of(first_seen.begin() + used, first_seen.end(),
                              [](int f) { return f < 0; });
  if (!contiguous) {
    report.issues.push_back(
        {Violation::kNonContiguousBaseLetters,
         used == 0 ? "no base letters"
                   : "base letters do not form a contiguous run from A"});
  }

  const size_t first_non_p = labels.find_first_not_of(kPrefixLabel);
  if (first_non_p != std::string::npos &&
      labels.find(kPrefixLabel, first_non_p) != std::string::npos) {
    report.issues.push_back(
        {Violation::kPrefixPosition, "P label after non-prefix material"});
  }
  const size_t last_non_s = labels.find_last_not_of(kSuffixLabel);
  if (last_non_s != std::string::npos) {
    const size_t first_s = labels.find(kSuffixLabel);
    if (first_s != std::string::npos && first_s < last_non_s) {
      report.issues.push_back(
          {Violation::kSuffixPosition, "S label before non-suffix material"});
    }
  }

  if (contiguous) {
    for (int b = 1; b < used; ++b) {
      if (first_seen[b] < first_seen[b - 1]) {
        report.issues.push_back(
            {Violation::kBaseOrdering,
             absl::StrCat("base ", std::string(1, BaseLabel(b)),
                          " has exclusive material before base ",
                          std::string(1, BaseLabel(b - 1)))});
        break;
      }
    }
  }
  return report;
}

ValidationReport ValidateLabeling(absl::string_view word,
                                  const PaxobsLabeling& labeling) {
  ValidationReport report = ValidateLabeling(labeling);
  const size_t chars = utf8::Length(word);
  if (chars != labeling.size()) {
    report.issues.insert(
        report.issues.begin(),
        {Violation::kLengthMismatch,
         absl::StrCat(labeling.size(), " labels for ", chars, " characters")});
  }
  return report;
}

absl::StatusOr<bool> IsLinear(const PaxobsLabeling& labeling) {
  const ValidationReport report = ValidateLabeling(labeling);
  if (!report.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid labeling ", labeling.str(), ": ",
                     report.ToString()));
  }
  const int bases = labeling.NumBases();
  const auto [begin, end] = labeling.BodyRange();
  // Walks the body against A* X* B* X* ... in base order.
  int stage = 0;
  bool seen_stage_base = false;
  bool in_shared = false;
  for (int i = begin; i < end; ++i) {
    const char c = labeling[i];
    if (c == kOrphanLabel) return false;
    if (c == kSharedLabel) {
      if (stage == bases - 1 && seen_stage_base) return false;
      in_shared = true;
      continue;
    }
    const int base = BaseIndex(c);
    if (base < stage) return false;
    if (base == stage) {
      if (in_shared) return false;
    } else {
      stage = base;
      in_shared = false;
    }
    seen_stage_base = true;
  }
  return true;
}

Segmentation GoldSegmentation(const PaxobsLabeling& labeling) {
  std::vector<int> cuts;
  for (size_t i = 1; i < labeling.size(); ++i) {
    if (labeling[i] != labeling[i - 1]) cuts.push_back(static_cast<int>(i));
  }
  return *Segmentation::Create(std::move(cuts),
                               static_cast<int>(labeling.size()));
}

Segmentation BodySegmentation(const PaxobsLabeling& labeling) {
  const auto [begin, end] = labeling.BodyRange();
  std::vector<int> cuts;
  for (int i = begin + 1; i < end; ++i) {
    if (labeling[i] != labeling[i - 1]) cuts.push_back(i);
  }
  return *Segmentation::Create(std::move(cuts),
                               static_cast<int>(labeling.size()));
}

}  // namespace unblend
