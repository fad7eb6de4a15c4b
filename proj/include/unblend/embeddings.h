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


#ifndef UNBLEND_EMBEDDINGS_H_
#define UNBLEND_EMBEDDINGS_H_

#include <optional>
#include <string>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/container/flat_hash_set.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace unblend {

// Static word vectors, looked up by exact string.
class EmbeddingTable {
 public:
  // Text format, one "word v1 ... vd" line per word. A leading "count dim"
  // line (fastText) is skipped. When `keep` is given, other words are not
  // stored. Later duplicates are ignored.
  static absl::StatusOr<EmbeddingTable> Load(
      const std::string& path,
      const absl::flat_hash_set<std::string>* keep = nullptr);

  static absl::StatusOr<EmbeddingTable> FromVectors(
      absl::flat_hash_map<std::string, std::vector<float>> vectors);

  // Null when missing or all zero.
  const std::vector<float>* Find(absl::string_view word) const;

  // Cosine of two words' vectors; nullopt if either is missing.
  std::optional<double> Cosine(absl::string_view a, absl::string_view b) const;

  int dim() const { return dim_; }
  size_t size() const { return vectors_.size(); }

 private:
  EmbeddingTable() = default;

  int dim_ = 0;
  absl::flat_hash_map<std::string, std::vector<float>> vectors_;
};

}  // namespace unblend

#endif  // UNBLEND_EMBEDDINGS_H_
