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

#include "unblend/corpus.h"

#include <algorithm>
#include <fstream>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/strip.h"
#include "json.hpp"
#include "unblend/utf8.h"

namespace unblend {
namespace {

using json = nlohmann::json;

constexpr int kMaxRecordBases = 3;

bool IsSubsequence(std::u32string_view needle, std::u32string_view haystack) {
  size_t j = 0;
  for (char32_t c : haystack) {
    if (j < needle.size() && needle[j] == c) ++j;
  }
  return j == needle.size();
}

absl::StatusOr<std::string> RequiredString(const json& obj,
                                           absl::string_view key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    return absl::InvalidArgumentError(absl::StrCat("missing field \"", key, "\""));
  }
  if (!it->is_string()) {
    return absl::InvalidArgumentError(
        absl::StrCat("field \"", key, "\" must be a string"));
  }
  return it->get<std::string>();
}

absl::StatusOr<std::optional<std::string>> OptionalString(
    const json& obj, absl::string_view key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::optional<std::string>();
  if (!it->is_string()) {
    return absl::InvalidArgumentError(
        absl::StrCat("field \"", key, "\" must be a string or null"));
  }
  return std::optional<std::string>(it->get<std::string>());
}

}  // namespace

absl::string_view WordClassName(WordClass c) {
  switch (c) {
    case WordClass::kBlend:
      return "blend";
    case WordClass::kTransparentCompound:
      return "transparent_compound";
    case WordClass::kOpaqueCompound:
      return "opaque_compound";
  }
  return "blend";
}

absl::StatusOr<WordClass> ParseWordClass(absl::string_view name) {
  for (WordClass c : {WordClass::kBlend, WordClass::kTransparentCompound,
                      WordClass::kOpaqueCompound}) {
    if (WordClassName(c) == name) return c;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown word class \"", name, "\""));
}

ValidationReport ValidateRecord(const ComplexWordRecord& record) {
  ValidationReport report = ValidateLabeling(record.surface, record.labeling);
  const int num_bases = static_cast<int>(record.bases.size());
  if (num_bases < 1 || num_bases > kMaxRecordBases) {
    report.issues.push_back(
        {Violation::kBaseCount,
         absl::StrCat(num_bases, " bases listed; expected 1 to ",
                      kMaxRecordBases)});
    return report;
  }
  if (record.labeling.NumBases() != num_bases) {
    report.issues.push_back(
        {Violation::kBaseCount,
         absl::StrCat(record.labeling.NumBases(), " base letters for ",
                      num_bases, " listed bases")});
    return report;
  }
  if (report.Has(Violation::kLengthMismatch)) return report;

  const std::u32string surface = utf8::ToLower(utf8::Decode(record.surface));
  for (int b = 0; b < num_bases; ++b) {
    std::u32string material;
    for (size_t i = 0; i < record.labeling.size(); ++i) {
      const char label = record.labeling[i];
      if (label == BaseLabel(b) || label == kSharedLabel) {
        material.push_back(surface[i]);
      }
    }
    const std::u32string base = utf8::ToLower(utf8::Decode(record.bases[b]));
    if (!IsSubsequence(material, base)) {
      report.issues.push_back(
          {Violation::kBaseMaterial,
           absl::StrCat("material \"", utf8::Encode(material),
                        "\" labeled ", std::string(1, BaseLabel(b)),
                        "/X is not a subsequence of base \"",
                        record.bases[b], "\"")});
    }
  }
  return report;
}

absl::StatusOr<ComplexWordRecord> ParseRecord(absl::string_view line) {
  json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded()) {
    return absl::InvalidArgumentError("malformed JSON");
  }
  if (!obj.is_object()) {
    return absl::InvalidArgumentError("record is not a JSON object");
  }
  ComplexWordRecord record;
  absl::StatusOr<std::string> s = RequiredString(obj, "surface");
  if (!s.ok()) return s.status();
  record.surface = *std::move(s);

  s = RequiredString(obj, "class");
  if (!s.ok()) return s.status();
  absl::StatusOr<WordClass> word_class = ParseWordClass(*s);
  if (!word_class.ok()) return word_class.status();
  record.word_class = *word_class;

  auto bases = obj.find("bases");
  if (bases == obj.end() || !bases->is_array()) {
    return absl::InvalidArgumentError("field \"bases\" must be an array");
  }
  for (const json& base : *bases) {
    if (!base.is_string() || base.get<std::string>().empty()) {
      return absl::InvalidArgumentError(
          "field \"bases\" must hold non-empty strings");
    }
    record.bases.push_back(base.get<std::string>());
  }

  s = RequiredString(obj, "paxobs");
  if (!s.ok()) return s.status();
  absl::StatusOr<PaxobsLabeling> labeling = PaxobsLabeling::Parse(*s);
  if (!labeling.ok()) return labeling.status();
  record.labeling = *std::move(labeling);

  absl::StatusOr<std::optional<std::string>> opt =
      OptionalString(obj, "relation");
  if (!opt.ok()) return opt.status();
  record.relation = *std::move(opt);

  s = RequiredString(obj, "context");
  if (!s.ok()) return s.status();
  record.context = *std::move(s);

  opt = OptionalString(obj, "source_id");
  if (!opt.ok()) return opt.status();
  record.source_id = *std::move(opt);
  return record;
}

std::string SerializeRecord(const ComplexWordRecord& record) {
  // ordered_json keeps the documented field order in the output.
  nlohmann::ordered_json obj;
  obj["surface"] = record.surface;
  obj["class"] = WordClassName(record.word_class);
  obj["bases"] = record.bases;
  obj["paxobs"] = record.labeling.str();
  obj["relation"] = record.relation ? json(*record.relation) : json(nullptr);
  obj["context"] = record.context;
  obj["source_id"] =
      record.source_id ? json(*record.source_id) : json(nullptr);
  return obj.dump();
}

std::vector<ComplexWordRecord> ReadCorpus(std::istream& in,
                                          std::vector<CorpusIssue>* issues) {
  std::vector<ComplexWordRecord> records;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    absl::string_view trimmed = absl::StripAsciiWhitespace(line);
    if (trimmed.empty()) continue;
    absl::StatusOr<ComplexWordRecord> record = ParseRecord(trimmed);
    if (!record.ok()) {
      if (issues != nullptr) {
        issues->push_back({line_number, std::string(record.status().message())});
      }
      continue;
    }
    const ValidationReport report = ValidateRecord(*record);
    if (!report.ok()) {
      if (issues != nullptr) {
        issues->push_back(
            {line_number, absl::StrCat(record->surface, ": ", report.ToString())});
      }
      continue;
    }
    records.push_back(*std::move(record));
  }
  return records;
}

absl::StatusOr<std::vector<ComplexWordRecord>> LoadCorpus(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::vector<CorpusIssue> issues;
  std::vector<ComplexWordRecord> records = ReadCorpus(in, &issues);
  if (!issues.empty()) {
    std::vector<std::string> lines;
    for (const CorpusIssue& issue : issues) {
      lines.push_back(absl::StrCat(path, ":", issue.line, ": ", issue.message));
    }
    return absl::InvalidArgumentError(absl::StrJoin(lines, "\n"));
  }
  return records;
}

std::optional<TokenSpan> FindToken(absl::string_view text,
                                   absl::string_view word) {
  const std::u32string needle = utf8::ToLower(utf8::Decode(word));
  if (needle.empty()) return std::nullopt;

  // Scalar values of `text` with the byte offset where each starts.
  std::u32string chars;
  std::vector<size_t> offsets;
  size_t offset = 0;
  for (const std::string& ch : utf8::SplitChars(text)) {
    chars.push_back(utf8::ToLower(utf8::Decode(ch)[0]));
    offsets.push_back(offset);
    offset += ch.size();
  }
  offsets.push_back(text.size());

  if (chars.size() < needle.size()) return std::nullopt;
  for (size_t i = 0; i + needle.size() <= chars.size(); ++i) {
    if (i > 0 && utf8::IsWordChar(chars[i - 1])) continue;
    const size_t end = i + needle.size();
    if (end < chars.size() && utf8::IsWordChar(chars[end])) continue;
    if (std::u32string_view(chars).substr(i, needle.size()) == needle) {
      return TokenSpan{offsets[i], offsets[end]};
    }
  }
  return std::nullopt;
}

absl::StatusOr<CorpusStats> ComputeCorpusStats(
    absl::Span<const ComplexWordRecord> records) {
  if (records.empty()) return absl::InvalidArgumentError("empty corpus");
  CorpusStats stats;
  stats.records = static_cast<int>(records.size());
  int total_bases = 0;
  int any_base = 0;
  int all_bases = 0;
  for (const ComplexWordRecord& record : records) {
    ++stats.class_counts[record.word_class];
    total_bases += static_cast<int>(record.bases.size());
    if (record.word_class != WordClass::kBlend) continue;
    ++stats.blends;
    absl::StatusOr<bool> linear = IsLinear(record.labeling);
    if (!linear.ok()) return linear.status();
    if (*linear) ++stats.linear_blends;
    int found = 0;
    for (const std::string& base : record.bases) {
      if (FindToken(record.context, base).has_value()) ++found;
    }
    if (found > 0) ++any_base;
    if (found == static_cast<int>(record.bases.size())) ++all_bases;
  }
  stats.mean_bases = static_cast<double>(total_bases) / stats.records;
  if (stats.blends > 0) {
    stats.linear_fraction =
        static_cast<double>(stats.linear_blends) / stats.blends;
    stats.context_any_base_fraction =
        static_cast<double>(any_base) / stats.blends;
    stats.context_all_bases_fraction =
        static_cast<double>(all_bases) / stats.blends;
  }
  return stats;
}

double DeletionRate(const ComplexWordRecord& record) {
  int base_chars = 0;
  for (const std::string& base : record.bases) {
    base_chars += static_cast<int>(utf8::Length(base));
  }
  if (base_chars == 0) return 0;
  const std::string& labels = record.labeling.str();
  const int shared = static_cast<int>(std::count(labels.begin(), labels.end(),
                                                 kSharedLabel));
  const int orphan = static_cast<int>(std::count(labels.begin(), labels.end(),
                                                 kOrphanLabel));
  const int drawn = static_cast<int>(labels.size()) - orphan + shared;
  return std::max(0, base_chars - drawn) / static_cast<double>(base_chars);
}

}  // namespace unblend
