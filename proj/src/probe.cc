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


#include "unblend/probe.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "unblend/paxobs.h"
#include "unblend/utf8.h"

namespace unblend {
namespace {

using Pieces = std::vector<std::string>;

// A piece sequence with the target pieces at [begin, end).
struct Input {
  Pieces pieces;
  std::vector<std::pair<int, int>> targets;
};

// Keeps `middle` and as much context on both sides as fits in `limit`,
// favouring balance.
Input Assemble(const Pieces& left, const std::vector<Pieces>& middle,
               const Pieces& right, int limit) {
  int target = 0;
  for (const Pieces& m : middle) target += static_cast<int>(m.size());
  const int budget = std::max(0, limit - target);
  const int l = static_cast<int>(left.size());
  const int r = static_cast<int>(right.size());
  int keep_left = std::min(l, budget / 2);
  int keep_right = std::min(r, budget - keep_left);
  keep_left = std::min(l, budget - keep_right);

  Input input;
  input.pieces.assign(left.end() - keep_left, left.end());
  for (const Pieces& m : middle) {
    const int begin = static_cast<int>(input.pieces.size());
    input.pieces.insert(input.pieces.end(), m.begin(), m.end());
    input.targets.emplace_back(begin, static_cast<int>(input.pieces.size()));
  }
  input.pieces.insert(input.pieces.end(), right.begin(),
                      right.begin() + keep_right);
  return input;
}

std::vector<double> MeanVector(const std::vector<std::vector<float>>& layer,
                               std::pair<int, int> range) {
  std::vector<double> mean(layer.empty() ? 0 : layer[0].size(), 0.0);
  for (int i = range.first; i < range.second; ++i) {
    for (size_t d = 0; d < mean.size(); ++d) mean[d] += layer[i][d];
  }
  const double n = range.second - range.first;
  for (double& x : mean) x /= n;
  return mean;
}

absl::StatusOr<Pieces> TokenizeNonEmpty(MlmBackend& backend,
                                        absl::string_view text) {
  absl::StatusOr<Pieces> pieces = backend.Tokenize(text);
  if (!pieces.ok()) return pieces.status();
  if (pieces->empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("backend gives no pieces for \"", text, "\""));
  }
  return pieces;
}

absl::StatusOr<LayerVectors> Encode(MlmBackend& backend, const Input& input,
                                    int layers) {
  absl::StatusOr<LayerVectors> out = backend.EncodeLayers(input.pieces);
  if (!out.ok()) return out.status();
  if (static_cast<int>(out->size()) != layers) {
    return absl::UnavailableError(absl::StrCat(
        "backend returned ", out->size(), " layers; expected ", layers));
  }
  for (const auto& layer : *out) {
    if (layer.size() != input.pieces.size()) {
      return absl::UnavailableError("backend returned wrong token count");
    }
  }
  return out;
}

}  // namespace

double Cosine(const std::vector<double>& u, const std::vector<double>& v) {
  double dot = 0, nu = 0, nv = 0;
  for (size_t i = 0; i < u.size() && i < v.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0 || nv == 0) return 0;
  return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

absl::StatusOr<SimilarityProfile> ComputeSimilarityProfile(
    const ComplexWordRecord& record, MlmBackend& backend,
    ProbeTokenization tokenization) {
  const std::string context = utf8::ToLower(record.context);
  const std::string surface = utf8::ToLower(record.surface);
  std::optional<TokenSpan> span = FindToken(context, surface);
  if (!span.has_value()) {
    return absl::NotFoundError(absl::StrCat(
        "\"", record.surface, "\" does not occur in its context"));
  }
  absl::StatusOr<Pieces> left =
      backend.Tokenize(absl::string_view(context).substr(0, span->begin));
  if (!left.ok()) return left.status();
  absl::StatusOr<Pieces> right =
      backend.Tokenize(absl::string_view(context).substr(span->end));
  if (!right.ok()) return right.status();

  Pieces word;
  if (tokenization == ProbeTokenization::kPaxobsInformed) {
    const std::vector<std::string> chars = utf8::SplitChars(surface);
    for (const auto& [begin, end] :
         BodySegmentation(record.labeling).Segments()) {
      std::string piece = word.empty() ? "" : backend.info().cont_marker;
      for (int i = begin; i < end; ++i) piece += chars[i];
      word.push_back(std::move(piece));
    }
  } else {
    absl::StatusOr<Pieces> p = TokenizeNonEmpty(backend, surface);
    if (!p.ok()) return p.status();
    word = *std::move(p);
  }
  std::vector<Pieces> bases;
  for (const std::string& base : record.bases) {
    absl::StatusOr<Pieces> p = TokenizeNonEmpty(backend, utf8::ToLower(base));
    if (!p.ok()) return p.status();
    bases.push_back(*std::move(p));
  }

  const int layers = backend.info().layers;
  const Input with_word = Assemble(*left, {word}, *right, kMaxProbePieces);
  const Input with_bases = Assemble(*left, bases, *right, kMaxProbePieces);
  absl::StatusOr<LayerVectors> s = Encode(backend, with_word, layers);
  if (!s.ok()) return s.status();
  absl::StatusOr<LayerVectors> s_prime = Encode(backend, with_bases, layers);
  if (!s_prime.ok()) return s_prime.status();

  SimilarityProfile profile;
  profile.word_id = record.id();
  profile.group = std::string(WordClassName(record.word_class));
  profile.relation = record.relation;
  profile.word_pieces = static_cast<int>(word.size());
  for (int l = 0; l < layers; ++l) {
    const std::vector<double> w = MeanVector((*s)[l], with_word.targets[0]);
    std::vector<double> b;
    for (const auto& range : with_bases.targets) {
      const std::vector<double> v = MeanVector((*s_prime)[l], range);
      if (b.empty()) b.assign(v.size(), 0.0);
      for (size_t d = 0; d < v.size(); ++d) b[d] += v[d] / bases.size();
    }
    profile.cosines.push_back(Cosine(w, b));
  }
  return profile;
}

absl::StatusOr<std::vector<GroupSummary>> AggregateProfiles(
    absl::Span<const SimilarityProfile> profiles, ProfileGrouping grouping,
    int min_count) {
  if (profiles.empty()) return absl::InvalidArgumentError("no profiles");
  std::map<std::string, std::vector<const SimilarityProfile*>> groups;
  for (const SimilarityProfile& p : profiles) {
    if (grouping == ProfileGrouping::kClass) {
      groups[p.group].push_back(&p);
    } else if (p.relation.has_value()) {
      groups[*p.relation].push_back(&p);
    }
  }
  std::vector<GroupSummary> out;
  for (const auto& [name, members] : groups) {
    const int n = static_cast<int>(members.size());
    if (n <= min_count) continue;
    const size_t layers = members[0]->cosines.size();
    GroupSummary summary{name, n, std::vector<double>(layers, 0.0),
                         std::vector<double>(layers, 0.0)};
    for (const SimilarityProfile* p : members) {
      if (p->cosines.size() != layers) {
        return absl::InvalidArgumentError(absl::StrCat(
            "profile ", p->word_id, " has ", p->cosines.size(),
            " layers; expected ", layers));
      }
      for (size_t l = 0; l < layers; ++l) summary.mean[l] += p->cosines[l] / n;
    }
    for (size_t l = 0; l < layers; ++l) {
      // Identical values: report them exactly rather than a rounded mean.
      const double first = members[0]->cosines[l];
      if (std::all_of(members.begin(), members.end(),
                      [&](const SimilarityProfile* p) {
                        return p->cosines[l] == first;
                      })) {
        summary.mean[l] = first;
        continue;
      }
      double ss = 0;
      for (const SimilarityProfile* p : members) {
        const double d = p->cosines[l] - summary.mean[l];
        ss += d * d;
      }
      summary.sem[l] = std::sqrt(ss / (n - 1)) / std::sqrt(n);
    }
    out.push_back(std::move(summary));
  }
  return out;
}

}  // namespace unblend
