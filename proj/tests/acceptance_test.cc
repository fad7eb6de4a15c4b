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


// Acceptance gate. Prints one PASS, FAIL or SKIP line per criterion and
// exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "support.h"
#include "unblend/bpe.h"
#include "unblend/corpus.h"
#include "unblend/edit_distance.h"
#include "unblend/mlm_ranker.h"
#include "unblend/paxobs.h"
#include "unblend/recovery.h"
#include "unblend/segeval.h"
#include "unblend/segmenters.h"
#include "unblend/subword.h"
#include "unblend/tagger.h"
#include "unblend/unigram.h"
#include "unblend/utf8.h"
#include "unblend/wordpiece.h"

namespace unblend {
namespace {

// Collects the first few failed expectations of one criterion.
class Checker {
 public:
  bool Expect(bool ok, const std::string& what) {
    if (!ok) {
      ++failures_;
      if (failures_ <= 3) messages_.push_back(what);
    }
    return ok;
  }
  bool ok() const { return failures_ == 0; }
  std::string Summary() const {
    std::string s = absl::StrJoin(messages_, "; ");
    if (failures_ > 3) absl::StrAppend(&s, "; ... ", failures_, " in all");
    return s;
  }
  void Skip(std::string why) { skipped_ = std::move(why); }
  const std::string& skipped() const { return skipped_; }

 private:
  int failures_ = 0;
  std::vector<std::string> messages_;
  std::string skipped_;
};

struct Criterion {
  std::string name;
  double seconds;  // time limit
  std::function<void(Checker&)> run;
};

void PaxobsSuite(Checker& c) {
  absl::StatusOr<std::vector<ComplexWordRecord>> rows =
      LoadCorpus(testing::TestDataPath("annotated.jsonl"));
  if (!c.Expect(rows.ok(), "annotated examples do not load")) return;
  const std::map<std::string, bool> linear = {{"hatriotism", true},
                                              {"shoptics", true},
                                              {"innoventor", false},
                                              {"thrupple", false}};
  c.Expect(rows->size() == 4, "expected four rows");
  for (const ComplexWordRecord& r : *rows) {
    c.Expect(ValidateRecord(r).ok(), r.surface + " does not validate");
    absl::StatusOr<bool> is_linear = IsLinear(r.labeling);
    c.Expect(is_linear.ok() && *is_linear == linear.at(r.surface),
             r.surface + " has the wrong linearity");
  }
  const PaxobsLabeling shoptics = *PaxobsLabeling::Parse("AAXXBBBS");
  c.Expect(GoldSegmentation(shoptics).Render("shoptics", ";") == "sh;op;tic;s",
           "shoptics gold segmentation");
}

void SegmentationOracle(Checker& c) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const PaxobsLabeling labels = testing::RandomLabeling(rng, 10);
    const int n = static_cast<int>(labels.size());
    for (const std::vector<int>& cuts : testing::AllCutSets(n)) {
      const SegScore got =
          *ScoreSegmentation(labels, *Segmentation::Create(cuts, n));
      const SegScore want = testing::OracleScore(labels.str(), cuts);
      c.Expect(got.tp_cuts == want.tp_cuts && got.fp_cuts == want.fp_cuts &&
                   got.sound_lenient == want.sound_lenient &&
                   got.sound_strict == want.sound_strict &&
                   got.scored_segments == want.scored_segments &&
                   got.exact_match_lenient == want.exact_match_lenient &&
                   got.exact_match_strict == want.exact_match_strict,
               absl::StrCat("oracle disagrees on ", labels.str(), " cuts ",
                            absl::StrJoin(cuts, ",")));
    }
    const SegScore gold = *ScoreSegmentation(labels, GoldSegmentation(labels));
    c.Expect(gold.fp_cuts == 0 && gold.sound_strict == gold.scored_segments,
             "gold segmentation of " + labels.str());
    const std::string word(n, 'w');
    const SegScore chars =
        *ScoreSegmentation(labels, AllCharsSegmentation(word));
    c.Expect(chars.sound_lenient == chars.scored_segments &&
                 chars.sound_strict == chars.scored_segments,
             "all-chars recall on " + labels.str());
  }
}

void Tokenizers(Checker& c) {
  absl::StatusOr<BpeModel> bpe =
      BpeModel::Train(CountWords({"low", "low", "lower"}), 7);
  const std::vector<SymbolPair> merges = {{"l", "o"}, {"lo", "w"}};
  c.Expect(bpe.ok() && bpe->merges() == merges, "BPE toy merges");

  std::mt19937_64 rng(5);
  std::map<std::string, double> pieces;
  std::uniform_real_distribution<double> logp(-8.0, -0.5);
  for (int i = 0; i < 40; ++i) {
    pieces[testing::RandomString(rng, "abc", 1, 4)] = logp(rng);
  }
  absl::StatusOr<UnigramModel> unigram = UnigramModel::FromPieces(pieces);
  if (!c.Expect(unigram.ok(), "unigram model")) return;
  for (int trial = 0; trial < 100; ++trial) {
    const std::string word = testing::RandomString(rng, "abcd", 1, 10);
    c.Expect(std::abs(unigram->ViterbiScore(word) -
                      testing::OracleUnigramScore(*unigram, word)) < 1e-9,
             "unigram Viterbi on " + word);
  }

  absl::StatusOr<WordPieceVocab> vocab =
      WordPieceVocab::FromEntries({"[UNK]", "segment", "##ing"});
  const std::vector<std::string> want = {"segment", "##ing"};
  c.Expect(vocab.ok() && *vocab->Encode("segmenting") == want,
           "WordPiece segmenting");
}

void EditDistanceCriterion(Checker& c) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 500; ++i) {
    const std::string a = testing::RandomString(rng, "abc", 0, 6);
    const std::string b = testing::RandomString(rng, "abc", 0, 6);
    c.Expect(EditDistance(a, b) == testing::OracleEditDistance(
                                       utf8::Decode(a), utf8::Decode(b)),
             a + " vs " + b);
  }
  for (int i = 0; i < 1000; ++i) {
    const std::string x = testing::RandomString(rng, "abcd", 0, 7);
    const std::string y = testing::RandomString(rng, "abcd", 0, 7);
    const std::string z = testing::RandomString(rng, "abcd", 0, 7);
    c.Expect((EditDistance(x, y) == 0) == (x == y) &&
                 EditDistance(x, y) == EditDistance(y, x) &&
                 EditDistance(x, z) <= EditDistance(x, y) + EditDistance(y, z),
             "axioms on " + x + "," + y + "," + z);
  }
}

void RecoveryMetricsCriterion(Checker& c) {
  const std::vector<testing::RankedItem> items = testing::HandRankedItems();
  // Item 3 lacks its true A, so pairs rank past the end (6 pairs -> 7);
  // item 5 has no B candidates, so its empty pair list ranks 1.
  const std::vector<int> a = {1, 3, 4, 1, 1};
  const std::vector<int> b = {2, 1, 1, 2, 1};
  const std::vector<int> pair = {1, 4, 7, 2, 1};
  std::vector<RecoveryScore> scores;
  for (size_t i = 0; i < items.size(); ++i) {
    absl::StatusOr<RecoveryScore> s =
        ScoreRanking(items[i].candidates, items[i].ranking);
    if (!c.Expect(s.ok(), "item " + items[i].candidates.blend_id)) return;
    c.Expect(s->rank_a == a[i] && s->rank_b == b[i] &&
                 s->rank_pair == pair[i],
             "ranks of " + items[i].candidates.blend_id);
    scores.push_back(*s);
  }
  absl::StatusOr<RecoveryMetrics> m = AggregateRecovery(scores);
  if (!c.Expect(m.ok(), "aggregate")) return;
  auto near = [](std::optional<double> x, double y) {
    return x.has_value() && std::abs(*x - y) < 1e-12;
  };
  c.Expect(near(m->mrr_a, (1 + 1.0 / 3 + 1.0 / 4 + 1 + 1) / 5), "MRR-A");
  c.Expect(near(m->mrr_b, (0.5 + 1 + 1 + 0.5 + 1) / 5), "MRR-B");
  c.Expect(near(m->mrr_pair, (1 + 1.0 / 4 + 1.0 / 7 + 0.5 + 1) / 5),
           "MRR-pair");
  c.Expect(near(m->p_at_1, 2.0 / 5), "P@1");
}

void MlmRankerCriterion(Checker& c) {
  std::mt19937_64 rng(29);
  const std::vector<std::string> variants = {
      "mlm", "mlm:plus_other_base", "mlm:minus_context",
      "mlm:single_b,plus_other_base,minus_context"};
  for (int trial = 0; trial < 200; ++trial) {
    const CandidateSet set = testing::RandomCandidateSet(rng, 5, 4);
    const MlmVariant variant = *ParseMlmVariant(variants[trial % 4]);
    testing::HashBackend backend(trial % 2 == 0 ? 2 : 4);
    const BlendContext context{"ab ba ", " b"};
    absl::StatusOr<Ranking> got = RankByMlm(set, backend, context, variant);
    absl::StatusOr<Ranking> want =
        testing::OracleMlmRanking(set, backend, context, variant);
    const std::string what =
        absl::StrCat(absl::StrJoin(set.side_a, ","), " / ",
                     absl::StrJoin(set.side_b, ","));
    if (!c.Expect(got.ok() && want.ok(), "ranking failed for " + what)) {
      continue;
    }
    c.Expect(got->pairs == want->pairs && got->side_a == want->side_a &&
                 got->side_b == want->side_b,
             "order differs for " + what);
  }
}

void TaggerCriterion(Checker& c) {
  std::vector<TaggedWord> train;
  for (const auto& [word, labels] :
       std::vector<std::pair<std::string, std::string>>{
           {"brunch", "AABBBB"},     {"smog", "AAXB"},
           {"motel", "AXXBB"},       {"spork", "AAXBB"},
           {"glamping", "AAXXBBBB"}, {"frenemy", "AAXXBBB"},
           {"sitcom", "AAABBB"},     {"netizen", "AAXBBBB"},
           {"shoptics", "AAXXBBBS"}, {"hatriotism", "AXXBBBBSSS"}}) {
    train.push_back({word, *PaxobsLabeling::Parse(labels)});
  }
  TaggerOptions options;
  options.epochs = 30;
  absl::StatusOr<TaggerModel> model = TaggerModel::Train(train, options);
  if (!c.Expect(model.ok(), "training failed")) return;
  const double accuracy = CharacterAccuracy(*model, train);
  c.Expect(accuracy >= 0.9, absl::StrCat("training accuracy ", accuracy));
  std::mt19937_64 rng(21);
  for (int i = 0; i < 1000; ++i) {
    const std::string word =
        testing::RandomString(rng, "abcdefghijklmnopqrstuvwxyz", 0, 15);
    c.Expect(model->Tag(word).size() == word.size(), "length of " + word);
  }
}

void DatasetCriterion(Checker& c) {
  const char* dataset = std::getenv("UNBLEND_DATASET");
  const char* vocab_path = std::getenv("UNBLEND_WP_VOCAB");
  const char* candidates = std::getenv("UNBLEND_CANDIDATES");
  if (dataset == nullptr || vocab_path == nullptr || candidates == nullptr) {
    c.Skip(
        "set UNBLEND_DATASET, UNBLEND_WP_VOCAB and UNBLEND_CANDIDATES to run");
    return;
  }
  absl::StatusOr<std::vector<ComplexWordRecord>> records =
      LoadCorpus(dataset);
  if (!c.Expect(records.ok(), "cannot load dataset")) return;
  absl::StatusOr<WordPieceVocab> vocab = WordPieceVocab::Load(vocab_path);
  if (!c.Expect(vocab.ok(), "cannot load vocabulary")) return;
  const std::unique_ptr<Segmenter> wordpiece =
      MakeWordPieceSegmenter(*std::move(vocab));
  std::vector<SegScore> scores;
  for (const ComplexWordRecord& r : *records) {
    if (r.word_class != WordClass::kBlend) continue;
    absl::StatusOr<Segmentation> seg =
        wordpiece->Segment(utf8::ToLower(r.surface));
    if (!c.Expect(seg.ok(), "cannot segment " + r.surface)) return;
    absl::StatusOr<SegScore> s = ScoreSegmentation(r.labeling, *seg);
    if (!c.Expect(s.ok(), "cannot score " + r.surface)) return;
    scores.push_back(*s);
  }
  absl::StatusOr<SegMetrics> seg = Aggregate(scores);
  if (!c.Expect(seg.ok(), "no blends in dataset")) return;
  c.Expect(std::abs(seg->lenient_f1 - 0.562) <= 0.03,
           absl::StrCat("lenient F1 ", seg->lenient_f1));
  c.Expect(std::abs(seg->lenient_em_rate - 0.22) <= 0.04,
           absl::StrCat("lenient EM ", seg->lenient_em_rate));

  absl::StatusOr<std::vector<CandidateSet>> sets =
      LoadCandidateSets(candidates);
  if (!c.Expect(sets.ok(), "cannot load candidates")) return;
  std::vector<RecoveryScore> recovery;
  for (const CandidateSet& set : *sets) {
    absl::StatusOr<RecoveryScore> s =
        ScoreRanking(set, LowerBoundRanking(set));
    if (!c.Expect(s.ok(), "lower bound for " + set.blend_id)) return;
    recovery.push_back(*s);
  }
  absl::StatusOr<RecoveryMetrics> m = AggregateRecovery(recovery);
  if (!c.Expect(m.ok() && m->mrr_pair.has_value(), "no candidate sets")) {
    return;
  }
  c.Expect(std::abs(*m->mrr_pair - 0.036) <= 0.01,
           absl::StrCat("lower-bound MRR-pair ", *m->mrr_pair));
}

int Main() {
  const std::vector<Criterion> criteria = {
      {"PAXOBS suite", 1, PaxobsSuite},
      {"Segmentation metric oracle", 30, SegmentationOracle},
      {"Tokenizers", 30, Tokenizers},
      {"Edit distance", 10, EditDistanceCriterion},
      {"Recovery metrics", 1, RecoveryMetricsCriterion},
      {"MLM pair ranker", 10, MlmRankerCriterion},
      {"Tagger", 60, TaggerCriterion},
      {"Dataset reproduction (optional)", 600, DatasetCriterion},
  };
  int failed = 0;
  for (const Criterion& criterion : criteria) {
    Checker checker;
    const auto start = std::chrono::steady_clock::now();
    criterion.run(checker);
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    checker.Expect(seconds < criterion.seconds,
                   absl::StrCat("took ", seconds, "s; limit ",
                                criterion.seconds, "s"));
    std::string line;
    if (!checker.skipped().empty()) {
      line = absl::StrCat("SKIP ", criterion.name, ": ", checker.skipped());
    } else if (checker.ok()) {
      line = absl::StrFormat("PASS %s (%.2fs)", criterion.name, seconds);
    } else {
      ++failed;
      line = absl::StrCat("FAIL ", criterion.name, ": ", checker.Summary());
    }
    std::cout << line << std::endl;
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace unblend

int main() { return unblend::Main(); }
