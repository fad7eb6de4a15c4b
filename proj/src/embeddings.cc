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


#include "unblend/embeddings.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"

namespace unblend {
namespace {

bool AllZero(const std::vector<float>& v) {
  for (float x : v) {
    if (x != 0) return false;
  }
  return true;
}

}  // namespace

absl::StatusOr<EmbeddingTable> EmbeddingTable::Load(
    const std::string& path, const absl::flat_hash_set<std::string>* keep) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  EmbeddingTable table;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<absl::string_view> fields =
        absl::StrSplit(line, ' ', absl::SkipEmpty());
    if (fields.empty()) continue;
    if (line_number == 1 && fields.size() == 2) {
      int count, dim;
      if (absl::SimpleAtoi(fields[0], &count) &&
          absl::SimpleAtoi(fields[1], &dim)) {
        continue;
      }
    }
    std::string word(fields[0]);
    if (keep != nullptr && !keep->contains(word)) continue;
    if (table.vectors_.contains(word)) continue;
    std::vector<float> vector;
    vector.reserve(fields.size() - 1);
    for (size_t i = 1; i < fields.size(); ++i) {
      float x;
      if (!absl::SimpleAtof(fields[i], &x) || !std::isfinite(x)) {
        return absl::InvalidArgumentError(absl::StrCat(
            path, ":", line_number, ": bad number \"", fields[i], "\""));
      }
      vector.push_back(x);
    }
    if (table.dim_ == 0) table.dim_ = static_cast<int>(vector.size());
    if (static_cast<int>(vector.size()) != table.dim_ || vector.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ":", line_number, ": expected ", table.dim_,
                       " components, found ", vector.size()));
    }
    table.vectors_.emplace(std::move(word), std::move(vector));
  }
  return table;
}

absl::StatusOr<EmbeddingTable> EmbeddingTable::FromVectors(
    absl::flat_hash_map<std::string, std::vector<float>> vectors) {
  EmbeddingTable table;
  for (const auto& [word, v] : vectors) {
    if (table.dim_ == 0) table.dim_ = static_cast<int>(v.size());
    if (static_cast<int>(v.size()) != table.dim_ || v.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("vector for \"", word, "\" has ", v.size(),
                       " components; expected ", table.dim_));
    }
  }
  table.vectors_ = std::move(vectors);
  return table;
}

const std::vector<float>* EmbeddingTable::Find(absl::string_view word) const {
  auto it = vectors_.find(word);
  if (it == vectors_.end() || AllZero(it->second)) return nullptr;
  return &it->second;
}

std::optional<double> EmbeddingTable::Cosine(absl::string_view a,
                                             absl::string_view b) const {
  const std::vector<float>* u = Find(a);
  const std::vector<float>* v = Find(b);
  if (u == nullptr || v == nullptr) return std::nullopt;
  double dot = 0, nu = 0, nv = 0;
  for (int i = 0; i < dim_; ++i) {
    dot += static_cast<double>((*u)[i]) * (*v)[i];
    nu += static_cast<double>((*u)[i]) * (*u)[i];
    nv += static_cast<double>((*v)[i]) * (*v)[i];
  }
  return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

}  // namespace unblend
