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

#include "unblend/unigram.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/strip.h"
#include "unblend/utf8.h"

namespace unblend {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Unlisted characters score this far below the least likely piece.
constexpr double kUnknownPenalty = 10.0;
// Multi-character pieces whose expected count falls below this are dropped
// after an EM step.
constexpr double kMinExpectedCount = 0.5;
// Expected-count floor for single characters, which are never dropped.
constexpr double kCharFloor = 1e-3;

double LogSumExp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

using PieceTable = absl::flat_hash_map<std::u32string, double>;

// Sums values in key order so totals do not depend on hash iteration order.
double OrderedSum(const PieceTable& table) {
  std::vector<std::pair<std::u32string_view, double>> entries(table.begin(),
                                                              table.end());
  std::sort(entries.begin(), entries.end());
  double total = 0;
  for (const auto& [piece, value] : entries) total += value;
  return total;
}

struct TrainingWord {
  std::u32string text;
  double freq;
};

// Highest-scoring segmentation of `word` over `table`. When `excluded` is
// set, the piece spanning the whole word is not allowed.
std::vector<std::u32string> ViterbiPieces(const std::u32string& word,
                                          const PieceTable& table,
                                          int max_length, bool excluded,
                                          double* score) {
  const int n = static_cast<int>(word.size());
  std::vector<double> best(n + 1, kNegInf);
  std::vector<int> from(n + 1, -1);
  best[0] = 0;
  for (int end = 1; end <= n; ++end) {
    for (int len = 1; len <= std::min(max_length, end); ++len) {
      const int start = end - len;
      if (best[start] == kNegInf) continue;
      if (excluded && start == 0 && end == n) continue;
      auto it = table.find(word.substr(start, len));
      if (it == table.end()) continue;
      const double candidate = best[start] + it->second;
      if (candidate > best[end]) {
        best[end] = candidate;
        from[end] = start;
      }
    }
  }
  std::vector<std::u32string> pieces;
  if (score != nullptr) *score = best[n];
  if (best[n] == kNegInf) return pieces;
  for (int end = n; end > 0; end = from[end]) {
    pieces.push_back(word.substr(from[end], end - from[end]));
  }
  std::reverse(pieces.begin(), pieces.end());
  return pieces;
}

class UnigramTrainer {
 public:
  UnigramTrainer(const WordCounts& corpus, const UnigramTrainerOptions& options)
      : options_(options) {
    for (const auto& [word, freq] : corpus) {
      if (freq <= 0 || word.empty()) continue;
      words_.push_back({utf8::Decode(word), static_cast<double>(freq)});
    }
  }

  size_t alphabet_size() const { return chars_.size(); }

  void Seed() {
    absl::flat_hash_map<std::u32string, double> counts;
    for (const TrainingWord& w : words_) {
      const int n = static_cast<int>(w.text.size());
      for (int i = 0; i < n; ++i) {
        for (int len = 1; len <= options_.max_piece_length && i + len <= n;
             ++len) {
          counts[w.text.substr(i, len)] += w.freq;
        }
      }
    }
    std::vector<std::pair<double, std::u32string>> seeds;
    for (auto& [piece, count] : counts) {
      if (piece.size() == 1) {
        chars_.insert(piece[0]);
        table_[piece] = count;
      } else if (count >= static_cast<double>(options_.min_seed_frequency)) {
        seeds.emplace_back(count * piece.size(), piece);
      }
    }
    std::sort(seeds.begin(), seeds.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    if (static_cast<int>(seeds.size()) > options_.max_seed_pieces) {
      seeds.resize(options_.max_seed_pieces);
    }
    for (auto& [score, piece] : seeds) table_[piece] = score;
    const double total = OrderedSum(table_);
    for (auto& [piece, value] : table_) value = std::log(value / total);
  }

  // One EM iteration: expected piece counts by forward-backward, then
  // renormalization. Rare multi-character pieces are dropped.
  void EmStep() {
    absl::flat_hash_map<std::u32string, double> expected;
    for (const TrainingWord& w : words_) {
      const int n = static_cast<int>(w.text.size());
      std::vector<double> alpha(n + 1, kNegInf), beta(n + 1, kNegInf);
      alpha[0] = 0;
      for (int end = 1; end <= n; ++end) {
        for (int len = 1; len <= std::min(options_.max_piece_length, end);
             ++len) {
          auto it = table_.find(w.text.substr(end - len, len));
          if (it == table_.end()) continue;
          alpha[end] = LogSumExp(alpha[end], alpha[end - len] + it->second);
        }
      }
      beta[n] = 0;
      for (int start = n - 1; start >= 0; --start) {
        for (int len = 1;
             len <= std::min(options_.max_piece_length, n - start); ++len) {
          auto it = table_.find(w.text.substr(start, len));
          if (it == table_.end()) continue;
          beta[start] =
              LogSumExp(beta[start], it->second + beta[start + len]);
        }
      }
      const double z = alpha[n];
      if (z == kNegInf) continue;
      for (int start = 0; start < n; ++start) {
        for (int len = 1;
             len <= std::min(options_.max_piece_length, n - start); ++len) {
          std::u32string piece = w.text.substr(start, len);
          auto it = table_.find(piece);
          if (it == table_.end()) continue;
          const double posterior =
              std::exp(alpha[start] + it->second + beta[start + len] - z);
          expected[std::move(piece)] += w.freq * posterior;
        }
      }
    }
    PieceTable next;
    for (const auto& [piece, logp] : table_) {
      double count = 0;
      if (auto it = expected.find(piece); it != expected.end()) {
        count = it->second;
      }
      if (piece.size() == 1) {
        count = std::max(count, kCharFloor);
      } else if (count < kMinExpectedCount) {
        continue;
      }
      next[piece] = count;
    }
    const double total = OrderedSum(next);
    for (auto& [piece, value] : next) value = std::log(value / total);
    table_ = std::move(next);
  }

  // Keeps the multi-character pieces whose removal would lose the most
  // likelihood, shrinking the table to max(vocab_size, shrink * size).
  void Prune() {
    absl::flat_hash_map<std::u32string, double> freq;
    double sum = 0;
    for (const TrainingWord& w : words_) {
      for (std::u32string& piece : ViterbiPieces(
               w.text, table_, options_.max_piece_length, false, nullptr)) {
        freq[std::move(piece)] += w.freq;
        sum += w.freq;
      }
    }
    struct Scored {
      double loss;
      double logp;
      std::u32string piece;
    };
    std::vector<Scored> scored;
    for (const auto& [piece, logp] : table_) {
      if (piece.size() == 1) continue;
      double loss = 0;
      auto it = freq.find(piece);
      if (it != freq.end() && it->second > 0 && sum > 0) {
        const double f = it->second;
        const std::vector<std::u32string> alternatives = ViterbiPieces(
            piece, table_, options_.max_piece_length, true, nullptr);
        const double alt_sum =
            sum + f * (static_cast<double>(alternatives.size()) - 1);
        const double logprob_piece = std::log(f) - std::log(sum);
        double logprob_alt = 0;
        for (const std::u32string& alt : alternatives) {
          double alt_freq = 0;
          if (auto a = freq.find(alt); a != freq.end()) alt_freq = a->second;
          logprob_alt += std::log(alt_freq + f) - std::log(alt_sum);
        }
        loss = f * (logprob_piece - logprob_alt);
      }
      scored.push_back({loss, logp, piece});
    }
    std::sort(scored.begin(), scored.end(),
              [](const Scored& a, const Scored& b) {
                if (a.loss != b.loss) return a.loss > b.loss;
                if (a.logp != b.logp) return a.logp > b.logp;
                return a.piece < b.piece;
              });
    const size_t current = table_.size();
    const size_t desired = std::max<size_t>(
        options_.vocab_size,
        static_cast<size_t>(std::floor(current * options_.shrink_factor)));
    const size_t keep_multi = desired - chars_.size();
    for (size_t i = keep_multi; i < scored.size(); ++i) {
      table_.erase(scored[i].piece);
    }
  }

  size_t size() const { return table_.size(); }

  std::map<std::string, double> Export() const {
    std::map<std::string, double> out;
    for (const auto& [piece, logp] : table_) out[utf8::Encode(piece)] = logp;
    return out;
  }

 private:
  UnigramTrainerOptions options_;
  std::vector<TrainingWord> words_;
  std::set<char32_t> chars_;
  PieceTable table_;
};

}  // namespace

UnigramModel::UnigramModel(std::map<std::string, double> pieces)
    : pieces_(std::move(pieces)) {
  double min_logp = 0;
  for (const auto& [piece, logp] : pieces_) {
    std::u32string key = utf8::Decode(piece);
    max_length_ = std::max(max_length_, static_cast<int>(key.size()));
    lookup_[std::move(key)] = logp;
    min_logp = std::min(min_logp, logp);
  }
  unknown_logprob_ = min_logp - kUnknownPenalty;
}

absl::StatusOr<UnigramModel> UnigramModel::Train(
    const WordCounts& corpus, const UnigramTrainerOptions& options) {
  if (options.max_piece_length < 1 || options.shrink_factor <= 0 ||
      options.shrink_factor >= 1 || options.em_iterations < 1) {
    return absl::InvalidArgumentError("invalid unigram trainer options");
  }
  UnigramTrainer trainer(corpus, options);
  trainer.Seed();
  if (trainer.alphabet_size() == 0) {
    return absl::InvalidArgumentError("empty training corpus");
  }
  if (options.vocab_size < static_cast<int>(trainer.alphabet_size())) {
    return absl::InvalidArgumentError(
        absl::StrCat("vocabulary size ", options.vocab_size,
                     " is smaller than the alphabet (",
                     trainer.alphabet_size(), " characters)"));
  }
  while (true) {
    for (int i = 0; i < options.em_iterations; ++i) trainer.EmStep();
    if (static_cast<int>(trainer.size()) <= options.vocab_size) break;
    trainer.Prune();
  }
  return UnigramModel(trainer.Export());
}

absl::StatusOr<UnigramModel> UnigramModel::FromPieces(
    std::map<std::string, double> pieces) {
  for (const auto& [piece, logp] : pieces) {
    if (piece.empty()) return absl::InvalidArgumentError("empty piece");
    if (!std::isfinite(logp) || logp > 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("piece \"", piece, "\" has log probability ", logp));
    }
  }
  return UnigramModel(std::move(pieces));
}

absl::StatusOr<UnigramModel> UnigramModel::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::map<std::string, double> pieces;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    const size_t tab = line.rfind('\t');
    double logp;
    if (tab == std::string::npos || tab == 0 ||
        !absl::SimpleAtod(line.substr(tab + 1), &logp)) {
      return absl::InvalidArgumentError(absl::StrCat(
          path, ":", line_number, ": expected \"piece<TAB>logprob\""));
    }
    pieces[line.substr(0, tab)] = logp;
  }
  return FromPieces(std::move(pieces));
}

absl::Status UnigramModel::Save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  // Most probable first, like the usual vocabulary listings.
  std::vector<std::pair<std::string, double>> sorted(pieces_.begin(),
                                                     pieces_.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  out << std::setprecision(17);
  for (const auto& [piece, logp] : sorted) out << piece << '\t' << logp << '\n';
  out.close();
  if (!out) return absl::DataLossError(absl::StrCat("failed writing ", path));
  return absl::OkStatus();
}

UnigramModel::Best UnigramModel::Viterbi(absl::string_view word) const {
  const std::u32string text = utf8::Decode(word);
  const int n = static_cast<int>(text.size());
  std::vector<double> best(n + 1, kNegInf);
  std::vector<int> from(n + 1, -1);
  best[0] = 0;
  for (int end = 1; end <= n; ++end) {
    for (int len = 1; len <= std::min(max_length_, end); ++len) {
      const int start = end - len;
      double logp;
      auto it = lookup_.find(text.substr(start, len));
      if (it != lookup_.end()) {
        logp = it->second;
      } else if (len == 1) {
        logp = unknown_logprob_;
      } else {
        continue;
      }
      if (best[start] + logp > best[end]) {
        best[end] = best[start] + logp;
        from[end] = start;
      }
    }
  }
  Best result{n == 0 ? 0.0 : best[n], {}};
  for (int end = n; end > 0; end = from[end]) {
    result.pieces.push_back(utf8::Encode(
        std::u32string_view(text).substr(from[end], end - from[end])));
  }
  std::reverse(result.pieces.begin(), result.pieces.end());
  return result;
}

std::vector<std::string> UnigramModel::Encode(absl::string_view word) const {
  return Viterbi(word).pieces;
}

double UnigramModel::ViterbiScore(absl::string_view word) const {
  return Viterbi(word).score;
}

absl::StatusOr<double> UnigramModel::PieceLogProb(absl::string_view piece) const {
  const std::u32string key = utf8::Decode(piece);
  if (auto it = lookup_.find(key); it != lookup_.end()) return it->second;
  if (key.size() == 1) return unknown_logprob_;
  return absl::NotFoundError(absl::StrCat("no piece \"", piece, "\""));
}

}  // namespace unblend
