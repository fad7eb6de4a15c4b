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


#include "unblend/char_lm.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "unblend/utf8.h"

namespace unblend {
namespace {

using json = nlohmann::json;

bool IsReserved(char32_t c) {
  return c == CharNgramLm::kUnknown || c == CharNgramLm::kBoundary ||
         c == CharNgramLm::kEnd;
}

absl::Status CheckOptions(const CharLmOptions& options) {
  if (options.order < 1 || !(options.smoothing > 0) ||
      !std::isfinite(options.smoothing)) {
    return absl::InvalidArgumentError(
        "character LM needs order >= 1 and positive smoothing");
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<CharNgramLm> CharNgramLm::Train(std::istream& text,
                                               const CharLmOptions& options) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(text, line)) lines.push_back(line);
  return Train(lines, options);
}

absl::StatusOr<CharNgramLm> CharNgramLm::Train(
    const std::vector<std::string>& lines, const CharLmOptions& options) {
  if (absl::Status s = CheckOptions(options); !s.ok()) return s;
  std::vector<std::u32string> sequences;
  std::set<char32_t> alphabet;
  for (const std::string& raw : lines) {
    std::u32string line = utf8::ToLower(utf8::Decode(
        absl::StripAsciiWhitespace(raw)));
    line.erase(std::remove_if(line.begin(), line.end(), IsReserved),
               line.end());
    if (line.empty()) continue;
    if (options.direction == LmDirection::kBackward) {
      std::reverse(line.begin(), line.end());
    }
    alphabet.insert(line.begin(), line.end());
    sequences.push_back(std::move(line));
  }
  if (alphabet.empty()) {
    return absl::InvalidArgumentError("character LM training text is empty");
  }
  CharNgramLm lm;
  lm.options_ = options;
  lm.alphabet_.assign(alphabet.begin(), alphabet.end());
  for (const std::u32string& line : sequences) lm.Count(line);
  return lm;
}

absl::StatusOr<CharNgramLm> CharNgramLm::Uniform(
    absl::string_view alphabet, const CharLmOptions& options) {
  if (absl::Status s = CheckOptions(options); !s.ok()) return s;
  std::set<char32_t> chars;
  for (char32_t c : utf8::ToLower(utf8::Decode(alphabet))) {
    if (!IsReserved(c)) chars.insert(c);
  }
  if (chars.empty()) return absl::InvalidArgumentError("empty alphabet");
  CharNgramLm lm;
  lm.options_ = options;
  lm.alphabet_.assign(chars.begin(), chars.end());
  return lm;
}

void CharNgramLm::Count(std::u32string_view line) {
  const int h = options_.order - 1;
  std::u32string padded(h, kBoundary);
  padded += line;
  padded += kEnd;
  for (size_t i = h; i < padded.size(); ++i) {
    std::u32string history = padded.substr(i - h, h);
    counts_[history][padded[i]] += 1;
    totals_[history] += 1;
  }
}

char32_t CharNgramLm::Map(char32_t c) const {
  if (c == kBoundary || c == kEnd) return c;
  return std::binary_search(alphabet_.begin(), alphabet_.end(), c) ? c
                                                                   : kUnknown;
}

double CharNgramLm::LogProb(std::u32string_view history, char32_t c) const {
  const int h = options_.order - 1;
  std::u32string key;
  if (static_cast<int>(history.size()) >= h) {
    history = history.substr(history.size() - h);
  } else {
    key.assign(h - history.size(), kBoundary);
  }
  for (char32_t x : history) key.push_back(Map(x));
  const double k = options_.smoothing;
  double count = 0;
  double total = 0;
  if (auto it = totals_.find(key); it != totals_.end()) {
    total = it->second;
    const auto& next = counts_.at(key);
    if (auto n = next.find(Map(c)); n != next.end()) count = n->second;
  }
  return std::log((count + k) / (total + k * vocab_size()));
}

double CharNgramLm::ContinuationScore(absl::string_view context,
                                      absl::string_view candidate) const {
  std::u32string history = utf8::ToLower(utf8::Decode(context));
  std::u32string chars = utf8::ToLower(utf8::Decode(candidate));
  if (options_.direction == LmDirection::kBackward) {
    std::reverse(history.begin(), history.end());
    std::reverse(chars.begin(), chars.end());
  }
  if (chars.empty()) return 0;
  double sum = 0;
  for (char32_t c : chars) {
    sum += LogProb(history, c);
    history.push_back(c);
  }
  return sum / static_cast<double>(chars.size());
}

std::string CharNgramLm::ToJson() const {
  nlohmann::ordered_json out;
  out["order"] = options_.order;
  out["smoothing"] = options_.smoothing;
  out["direction"] =
      options_.direction == LmDirection::kForward ? "forward" : "backward";
  out["alphabet"] = utf8::Encode(alphabet_);
  std::vector<std::tuple<std::string, std::string, double>> rows;
  for (const auto& [history, next] : counts_) {
    for (const auto& [c, count] : next) {
      rows.emplace_back(utf8::Encode(history), utf8::Encode(c), count);
    }
  }
  std::sort(rows.begin(), rows.end());
  nlohmann::ordered_json counts = nlohmann::ordered_json::array();
  for (const auto& [history, c, count] : rows) {
    counts.push_back({history, c, count});
  }
  out["counts"] = std::move(counts);
  return out.dump();
}

absl::StatusOr<CharNgramLm> CharNgramLm::FromJson(absl::string_view text) {
  const json in = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (in.is_discarded() || !in.is_object()) {
    return absl::InvalidArgumentError("character LM is not a JSON object");
  }
  try {
    CharLmOptions options;
    options.order = in.at("order").get<int>();
    options.smoothing = in.at("smoothing").get<double>();
    const std::string direction = in.at("direction").get<std::string>();
    if (direction != "forward" && direction != "backward") {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown direction \"", direction, "\""));
    }
    options.direction = direction == "forward" ? LmDirection::kForward
                                               : LmDirection::kBackward;
    absl::StatusOr<CharNgramLm> lm =
        Uniform(in.at("alphabet").get<std::string>(), options);
    if (!lm.ok()) return lm.status();
    const int h = options.order - 1;
    for (const auto& row : in.at("counts")) {
      const std::u32string history =
          utf8::Decode(row.at(0).get<std::string>());
      const std::u32string c = utf8::Decode(row.at(1).get<std::string>());
      const double count = row.at(2).get<double>();
      if (static_cast<int>(history.size()) != h || c.size() != 1 ||
          !(count > 0)) {
        return absl::InvalidArgumentError("malformed count row");
      }
      lm->counts_[history][c[0]] += count;
      lm->totals_[history] += count;
    }
    return lm;
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed character LM: ", e.what()));
  }
}

absl::Status CharNgramLm::Save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out << ToJson() << '\n';
  out.close();
  if (!out) return absl::DataLossError(absl::StrCat("failed writing ", path));
  return absl::OkStatus();
}

absl::StatusOr<CharNgramLm> CharNgramLm::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return FromJson(buffer.str());
}

}  // namespace unblend
