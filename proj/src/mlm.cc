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


#include "unblend/mlm.h"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "json.hpp"

namespace unblend {
namespace {

using json = nlohmann::json;

const std::map<std::string, double>& Empty() {
  static const auto* empty = new std::map<std::string, double>();
  return *empty;
}

uint64_t Fnv1a(absl::string_view s, uint64_t salt) {
  uint64_t h = 1469598103934665603ull ^ salt;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

absl::StatusOr<std::map<std::string, double>> ParseDistribution(
    const json& obj) {
  std::map<std::string, double> out;
  for (const auto& [piece, p] : obj.items()) {
    const double prob = p.get<double>();
    if (!(prob >= 0 && prob <= 1)) {
      return absl::InvalidArgumentError(
          absl::StrCat("probability of \"", piece, "\" outside [0, 1]"));
    }
    out[piece] = prob;
  }
  return out;
}

}  // namespace

int CountMasks(const std::vector<std::string>& pieces, absl::string_view mask) {
  return static_cast<int>(std::count(pieces.begin(), pieces.end(), mask));
}

absl::StatusOr<std::unique_ptr<FixtureBackend>> FixtureBackend::FromJson(
    absl::string_view text) {
  const json in = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (in.is_discarded() || !in.is_object()) {
    return absl::InvalidArgumentError("backend fixture is not a JSON object");
  }
  std::unique_ptr<FixtureBackend> backend(new FixtureBackend());
  try {
    backend->info_.layers = in.at("layers").get<int>();
    backend->info_.dim = in.at("dim").get<int>();
    backend->info_.mask = in.value("mask", "[MASK]");
    backend->info_.cont_marker = in.value("cont_marker", "##");
    if (backend->info_.layers < 1 || backend->info_.dim < 1) {
      return absl::InvalidArgumentError("fixture needs layers, dim >= 1");
    }
    if (in.contains("tokenize")) {
      for (const auto& [word, pieces] : in.at("tokenize").items()) {
        backend->tokenize_[word] = pieces.get<std::vector<std::string>>();
      }
    }
    if (in.contains("masks")) {
      for (const auto& [key, list] : in.at("masks").items()) {
        std::vector<std::map<std::string, double>> dists;
        for (const json& d : list) {
          absl::StatusOr<std::map<std::string, double>> dist =
              ParseDistribution(d);
          if (!dist.ok()) return dist.status();
          dists.push_back(*std::move(dist));
        }
        if (key == "default") {
          backend->default_masks_ = std::move(dists);
        } else {
          backend->masks_[key] = std::move(dists);
        }
      }
    }
    if (in.contains("vectors")) {
      for (const auto& [piece, layers] : in.at("vectors").items()) {
        auto v = layers.get<std::vector<std::vector<float>>>();
        if (static_cast<int>(v.size()) != backend->info_.layers) {
          return absl::InvalidArgumentError(
              absl::StrCat("vectors for \"", piece, "\" need ",
                           backend->info_.layers, " layers"));
        }
        for (const auto& row : v) {
          if (static_cast<int>(row.size()) != backend->info_.dim) {
            return absl::InvalidArgumentError(absl::StrCat(
                "vectors for \"", piece, "\" need ", backend->info_.dim,
                " components"));
          }
        }
        backend->vectors_[piece] = std::move(v);
      }
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed backend fixture: ", e.what()));
  }
  return backend;
}

absl::StatusOr<std::unique_ptr<FixtureBackend>> FixtureBackend::Load(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return FromJson(buffer.str());
}

absl::StatusOr<std::vector<std::string>> FixtureBackend::Tokenize(
    absl::string_view text) {
  std::vector<std::string> out;
  for (absl::string_view word :
       absl::StrSplit(text, absl::ByAnyChar(" \t\n"), absl::SkipEmpty())) {
    auto it = tokenize_.find(word);
    if (it == tokenize_.end()) {
      out.emplace_back(word);
    } else {
      out.insert(out.end(), it->second.begin(), it->second.end());
    }
  }
  return out;
}

absl::StatusOr<std::vector<const std::map<std::string, double>*>>
FixtureBackend::Distributions(const std::vector<std::string>& pieces) const {
  const int masks = CountMasks(pieces, info_.mask);
  if (masks == 0) return absl::InvalidArgumentError("input has no mask");
  const std::vector<std::map<std::string, double>>* table = &default_masks_;
  if (auto it = masks_.find(absl::StrJoin(pieces, " ")); it != masks_.end()) {
    table = &it->second;
  }
  std::vector<const std::map<std::string, double>*> out;
  for (int i = 0; i < masks; ++i) {
    out.push_back(i < static_cast<int>(table->size()) ? &(*table)[i]
                                                       : &Empty());
  }
  return out;
}

absl::StatusOr<std::vector<PieceProbs>> FixtureBackend::MaskTopK(
    const std::vector<std::string>& pieces, int k) {
  absl::StatusOr<std::vector<const std::map<std::string, double>*>> dists =
      Distributions(pieces);
  if (!dists.ok()) return dists.status();
  std::vector<PieceProbs> out;
  for (const auto* dist : *dists) {
    PieceProbs probs(dist->begin(), dist->end());
    std::stable_sort(probs.begin(), probs.end(),
                     [](const auto& a, const auto& b) {
                       return a.second > b.second;
                     });
    if (static_cast<int>(probs.size()) > k) probs.resize(std::max(k, 0));
    out.push_back(std::move(probs));
  }
  return out;
}

absl::StatusOr<std::vector<std::map<std::string, double>>>
FixtureBackend::MaskProbabilities(
    const std::vector<std::string>& pieces,
    const std::vector<std::vector<std::string>>& candidates) {
  absl::StatusOr<std::vector<const std::map<std::string, double>*>> dists =
      Distributions(pieces);
  if (!dists.ok()) return dists.status();
  if (candidates.size() != dists->size()) {
    return absl::InvalidArgumentError(
        absl::StrCat(candidates.size(), " candidate lists for ",
                     dists->size(), " masks"));
  }
  std::vector<std::map<std::string, double>> out(dists->size());
  for (size_t i = 0; i < dists->size(); ++i) {
    for (const std::string& piece : candidates[i]) {
      auto it = (*dists)[i]->find(piece);
      out[i][piece] = it == (*dists)[i]->end() ? 0.0 : it->second;
    }
  }
  return out;
}

std::vector<std::vector<float>> FixtureBackend::VectorsFor(
    const std::string& piece) const {
  if (auto it = vectors_.find(piece); it != vectors_.end()) return it->second;
  std::vector<std::vector<float>> out(info_.layers,
                                      std::vector<float>(info_.dim));
  for (int l = 0; l < info_.layers; ++l) {
    for (int d = 0; d < info_.dim; ++d) {
      const uint64_t h = Fnv1a(piece, static_cast<uint64_t>(l) * 7919 + d);
      out[l][d] = static_cast<float>(h % 2001) / 1000.0f - 1.0f;
    }
  }
  return out;
}

absl::StatusOr<LayerVectors> FixtureBackend::EncodeLayers(
    const std::vector<std::string>& pieces) {
  LayerVectors out(info_.layers);
  for (const std::string& piece : pieces) {
    std::vector<std::vector<float>> v = VectorsFor(piece);
    for (int l = 0; l < info_.layers; ++l) out[l].push_back(std::move(v[l]));
  }
  return out;
}

}  // namespace unblend
