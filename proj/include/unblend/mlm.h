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


// Masked-language-model backends. Requests other than Tokenize carry piece
// sequences exactly as the model should see them, without the sequence
// boundary tokens, which backends add themselves.

#ifndef UNBLEND_MLM_H_
#define UNBLEND_MLM_H_

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace unblend {

struct MlmInfo {
  int layers = 0;  // hidden-state layers returned, embeddings included
  int dim = 0;
  std::string mask = "[MASK]";
  std::string cont_marker = "##";
};

using PieceProbs = std::vector<std::pair<std::string, double>>;
// [layer][position][component]
using LayerVectors = std::vector<std::vector<std::vector<float>>>;

// Implementations must accept concurrent calls.
class MlmBackend {
 public:
  virtual ~MlmBackend() = default;

  virtual const MlmInfo& info() const = 0;

  // Model pieces for running text; non-initial pieces carry the marker.
  virtual absl::StatusOr<std::vector<std::string>> Tokenize(
      absl::string_view text) = 0;

  // For each mask in `pieces`, the k most probable pieces, most probable
  // first.
  virtual absl::StatusOr<std::vector<PieceProbs>> MaskTopK(
      const std::vector<std::string>& pieces, int k) = 0;

  // For each mask in `pieces`, the probability of each listed candidate
  // piece under the full output distribution. `candidates` has one list per
  // mask.
  virtual absl::StatusOr<std::vector<std::map<std::string, double>>>
  MaskProbabilities(const std::vector<std::string>& pieces,
                    const std::vector<std::vector<std::string>>& candidates) = 0;

  // Hidden states of every layer for `pieces`.
  virtual absl::StatusOr<LayerVectors> EncodeLayers(
      const std::vector<std::string>& pieces) = 0;
};

// Deterministic backend driven by a JSON fixture:
//
//   {"layers": 2, "dim": 3, "mask": "[MASK]", "cont_marker": "##",
//    "tokenize": {"thrupple": ["thr", "##up", "##ple"]},
//    "masks": {"default": [{"three": 0.6}, {"couple": 0.3}],
//              "the [MASK] [MASK] sat": [{...}, {...}]},
//    "vectors": {"three": [[1, 0, 0], [0, 1, 0]]}}
//
// Tokenize splits text on whitespace and maps each word through
// "tokenize", keeping unlisted words whole. A mask's distribution comes
// from the "masks" entry keyed by the space-joined input pieces, else from
// "default" by mask ordinal; unlisted pieces have probability 0. Vectors of
// unlisted pieces are derived from a hash of the piece.
class FixtureBackend : public MlmBackend {
 public:
  static absl::StatusOr<std::unique_ptr<FixtureBackend>> FromJson(
      absl::string_view text);
  static absl::StatusOr<std::unique_ptr<FixtureBackend>> Load(
      const std::string& path);

  const MlmInfo& info() const override { return info_; }
  absl::StatusOr<std::vector<std::string>> Tokenize(
      absl::string_view text) override;
  absl::StatusOr<std::vector<PieceProbs>> MaskTopK(
      const std::vector<std::string>& pieces, int k) override;
  absl::StatusOr<std::vector<std::map<std::string, double>>> MaskProbabilities(
      const std::vector<std::string>& pieces,
      const std::vector<std::vector<std::string>>& candidates) override;
  absl::StatusOr<LayerVectors> EncodeLayers(
      const std::vector<std::string>& pieces) override;

 private:
  FixtureBackend() = default;

  absl::StatusOr<std::vector<const std::map<std::string, double>*>>
  Distributions(const std::vector<std::string>& pieces) const;
  std::vector<std::vector<float>> VectorsFor(const std::string& piece) const;

  MlmInfo info_;
  absl::flat_hash_map<std::string, std::vector<std::string>> tokenize_;
  absl::flat_hash_map<std::string, std::vector<std::map<std::string, double>>>
      masks_;
  std::vector<std::map<std::string, double>> default_masks_;
  absl::flat_hash_map<std::string, std::vector<std::vector<float>>> vectors_;
};

// Number of mask tokens in `pieces`.
int CountMasks(const std::vector<std::string>& pieces, absl::string_view mask);

}  // namespace unblend

#endif  // UNBLEND_MLM_H_
