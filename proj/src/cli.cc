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


#include "unblend/cli.h"

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/container/flat_hash_set.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "json.hpp"
#include "unblend/bpe.h"
#include "unblend/bridge.h"
#include "unblend/char_lm.h"
#include "unblend/corpus.h"
#include "unblend/embeddings.h"
#include "unblend/mlm.h"
#include "unblend/mlm_ranker.h"
#include "unblend/parallel.h"
#include "unblend/paxobs.h"
#include "unblend/probe.h"
#include "unblend/rankers.h"
#include "unblend/recovery.h"
#include "unblend/segeval.h"
#include "unblend/segmenters.h"
#include "unblend/smoothie.h"
#include "unblend/subword.h"
#include "unblend/tagger.h"
#include "unblend/unigram.h"
#include "unblend/utf8.h"
#include "unblend/wordpiece.h"

namespace unblend {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr uint64_t kDefaultSeed = 13;

// Bad flag combinations found after parsing. Reported with the usage exit
// code.
absl::Status UsageError(absl::string_view message) {
  return absl::FailedPreconditionError(message);
}

int ExitCode(const absl::Status& status) {
  if (status.ok()) return kExitOk;
  if (status.code() == absl::StatusCode::kFailedPrecondition) return kExitUsage;
  if (status.code() == absl::StatusCode::kUnavailable) return kExitBackend;
  return kExitData;
}

// Writes to a temporary sibling and renames it into place on Commit, so a
// failed run leaves no partial file behind.
class OutputFile {
 public:
  explicit OutputFile(std::string path)
      : path_(std::move(path)),
        temp_(absl::StrCat(path_, ".tmp.", getpid())),
        stream_(temp_) {}

  ~OutputFile() {
    if (!committed_) {
      stream_.close();
      std::remove(temp_.c_str());
    }
  }

  std::ostream& stream() { return stream_; }

  absl::Status Commit() {
    stream_.close();
    if (!stream_) {
      return absl::DataLossError(absl::StrCat("failed writing ", path_));
    }
    if (std::rename(temp_.c_str(), path_.c_str()) != 0) {
      return absl::DataLossError(absl::StrCat("cannot move output to ", path_));
    }
    committed_ = true;
    return absl::OkStatus();
  }

  bool ok() const { return static_cast<bool>(stream_); }

 private:
  std::string path_;
  std::string temp_;
  std::ofstream stream_;
  bool committed_ = false;
};

absl::StatusOr<std::unique_ptr<OutputFile>> OpenOutput(const std::string& path) {
  auto file = std::make_unique<OutputFile>(path);
  if (!file->ok()) {
    return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  }
  return file;
}

// Writes `text` to `path`, or to `out` when `path` is empty.
absl::Status Emit(const std::string& path, const std::string& text,
                  std::ostream& out) {
  if (path.empty()) {
    out << text;
    return absl::OkStatus();
  }
  absl::StatusOr<std::unique_ptr<OutputFile>> file = OpenOutput(path);
  if (!file.ok()) return file.status();
  (*file)->stream() << text;
  return (*file)->Commit();
}

// Models are written through a temporary file as well.
template <typename Model>
absl::Status SaveModel(const Model& model, const std::string& path) {
  const std::string temp = absl::StrCat(path, ".tmp.", getpid());
  absl::Status status = model.Save(temp);
  if (status.ok() && std::rename(temp.c_str(), path.c_str()) != 0) {
    status = absl::DataLossError(absl::StrCat("cannot move output to ", path));
  }
  if (!status.ok()) std::remove(temp.c_str());
  return status;
}

// A table printed as TSV and optionally saved as PREFIX.tsv and
// PREFIX.json (an array of row objects).
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<ordered_json>> rows;

  static std::string Cell(const ordered_json& v) {
    if (v.is_null()) return "-";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return absl::StrFormat("%.3f", v.get<double>());
    return v.dump();
  }

  std::string ToTsv() const {
    std::string out = absl::StrCat(absl::StrJoin(columns, "\t"), "\n");
    for (const auto& row : rows) {
      std::vector<std::string> cells;
      for (const ordered_json& v : row) cells.push_back(Cell(v));
      absl::StrAppend(&out, absl::StrJoin(cells, "\t"), "\n");
    }
    return out;
  }

  std::string ToJson() const {
    ordered_json out = ordered_json::array();
    for (const auto& row : rows) {
      ordered_json obj;
      for (size_t i = 0; i < columns.size(); ++i) obj[columns[i]] = row[i];
      out.push_back(std::move(obj));
    }
    return out.dump(2) + "\n";
  }
};

absl::Status WriteTable(const Table& table, const std::string& prefix,
                        std::ostream& out) {
  out << table.ToTsv();
  if (prefix.empty()) return absl::OkStatus();
  if (absl::Status s = Emit(prefix + ".tsv", table.ToTsv(), out); !s.ok()) {
    return s;
  }
  return Emit(prefix + ".json", table.ToJson(), out);
}

ordered_json Optional(const std::optional<double>& v) {
  return v.has_value() ? ordered_json(*v) : ordered_json();
}

std::string Stem(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

absl::StatusOr<std::vector<ComplexWordRecord>> Blends(
    const std::vector<ComplexWordRecord>& records) {
  std::vector<ComplexWordRecord> blends;
  for (const ComplexWordRecord& r : records) {
    if (r.word_class == WordClass::kBlend) blends.push_back(r);
  }
  return blends;
}

// First failure among per-item statuses, in item order.
absl::Status FirstError(const std::vector<absl::Status>& statuses) {
  for (const absl::Status& s : statuses) {
    if (!s.ok()) return s;
  }
  return absl::OkStatus();
}

absl::StatusOr<uint64_t> ParseSeed(const std::string& text) {
  uint64_t seed;
  if (!absl::SimpleAtoi(text, &seed)) {
    return UsageError(absl::StrCat("bad seed \"", text, "\""));
  }
  return seed;
}

std::mt19937_64 SeededRng(uint64_t seed, std::initializer_list<uint64_t> salt) {
  std::vector<uint32_t> words = {static_cast<uint32_t>(seed),
                                 static_cast<uint32_t>(seed >> 32)};
  for (uint64_t s : salt) {
    words.push_back(static_cast<uint32_t>(s));
    words.push_back(static_cast<uint32_t>(s >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

// ---------------------------------------------------------------------------
// validate, stats

absl::Status RunValidate(const std::string& path, std::ostream& out,
                         std::ostream& err) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::vector<CorpusIssue> issues;
  const std::vector<ComplexWordRecord> records = ReadCorpus(in, &issues);
  for (const CorpusIssue& issue : issues) {
    err << path << ":" << issue.line << ": " << issue.message << "\n";
  }
  out << records.size() << " valid records, " << issues.size()
      << " invalid\n";
  if (!issues.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": ", issues.size(), " invalid records"));
  }
  return absl::OkStatus();
}

absl::Status RunStats(const std::string& path, const std::string& prefix,
                      std::ostream& out) {
  absl::StatusOr<std::vector<ComplexWordRecord>> records = LoadCorpus(path);
  if (!records.ok()) return records.status();
  absl::StatusOr<CorpusStats> stats = ComputeCorpusStats(*records);
  if (!stats.ok()) return stats.status();
  Table table{{"statistic", "value"}, {}};
  auto add = [&](const std::string& name, ordered_json value) {
    table.rows.push_back({name, std::move(value)});
  };
  add("records", stats->records);
  for (const auto& [c, n] : stats->class_counts) {
    add(std::string(WordClassName(c)), n);
  }
  add("linear_blends", stats->linear_blends);
  add("linear_fraction", stats->linear_fraction);
  add("mean_bases", stats->mean_bases);
  add("context_any_base_fraction", stats->context_any_base_fraction);
  add("context_all_bases_fraction", stats->context_all_bases_fraction);
  add("linear_blend_deletion_rate", LinearBlendDeletionRate(*records));
  return WriteTable(table, prefix, out);
}

// ---------------------------------------------------------------------------
// segment, eval-seg

struct SegmenterFlags {
  std::vector<std::string> systems;
  std::string tagger_model;
  std::string wordpiece_vocab;
  std::string bpe_model;
  std::string unigram_model;
};

void AddSegmenterFlags(CLI::App* cmd, SegmenterFlags* flags) {
  cmd->add_option("--tagger-model", flags->tagger_model,
                  "tagger model JSON (system tagger)");
  cmd->add_option("--vocab", flags->wordpiece_vocab,
                  "WordPiece vocabulary, one piece per line (system wordpiece)");
  cmd->add_option("--bpe-model", flags->bpe_model,
                  "BPE merges file (system bpe)");
  cmd->add_option("--unigram-model", flags->unigram_model,
                  "Unigram pieces file (system unigram)");
}

absl::StatusOr<std::unique_ptr<Segmenter>> BuildSegmenter(
    const std::string& system, const SegmenterFlags& flags) {
  auto need = [&](const std::string& value,
                  absl::string_view flag) -> absl::Status {
    if (value.empty()) {
      return UsageError(absl::StrCat("system ", system, " needs ", flag));
    }
    return absl::OkStatus();
  };
  if (system == "allchars") return MakeAllCharsSegmenter();
  if (system == "tagger") {
    if (absl::Status s = need(flags.tagger_model, "--tagger-model"); !s.ok()) {
      return s;
    }
    absl::StatusOr<TaggerModel> model = TaggerModel::Load(flags.tagger_model);
    if (!model.ok()) return model.status();
    return MakeTaggerSegmenter(*std::move(model));
  }
  if (system == "wordpiece") {
    if (absl::Status s = need(flags.wordpiece_vocab, "--vocab"); !s.ok()) {
      return s;
    }
    absl::StatusOr<WordPieceVocab> vocab =
        WordPieceVocab::Load(flags.wordpiece_vocab);
    if (!vocab.ok()) return vocab.status();
    return MakeWordPieceSegmenter(*std::move(vocab));
  }
  if (system == "bpe") {
    if (absl::Status s = need(flags.bpe_model, "--bpe-model"); !s.ok()) {
      return s;
    }
    absl::StatusOr<BpeModel> model = BpeModel::Load(flags.bpe_model);
    if (!model.ok()) return model.status();
    return MakeBpeSegmenter(*std::move(model));
  }
  if (system == "unigram") {
    if (absl::Status s = need(flags.unigram_model, "--unigram-model");
        !s.ok()) {
      return s;
    }
    absl::StatusOr<UnigramModel> model = UnigramModel::Load(flags.unigram_model);
    if (!model.ok()) return model.status();
    return MakeUnigramSegmenter(*std::move(model));
  }
  return UsageError(absl::StrCat("unknown segmentation system \"", system,
                                 "\"; expected allchars, tagger, wordpiece, "
                                 "bpe or unigram"));
}

absl::StatusOr<std::vector<Segmentation>> SegmentAll(
    const Segmenter& segmenter, const std::vector<ComplexWordRecord>& records,
    int jobs) {
  std::vector<Segmentation> out(records.size());
  std::vector<absl::Status> statuses(records.size());
  ParallelFor(static_cast<int>(records.size()), jobs, [&](int i) {
    absl::StatusOr<Segmentation> s = segmenter.Segment(records[i].surface);
    if (s.ok()) {
      out[i] = *std::move(s);
    } else {
      statuses[i] = absl::Status(
          s.status().code(),
          absl::StrCat(records[i].id(), ": ", s.status().message()));
    }
  });
  if (absl::Status s = FirstError(statuses); !s.ok()) return s;
  return out;
}

std::string PredictionsTsv(const std::vector<ComplexWordRecord>& records,
                           const std::vector<Segmentation>& segmentations) {
  std::string out = "id\tsurface\tcuts\tsegments\n";
  for (size_t i = 0; i < records.size(); ++i) {
    absl::StrAppend(&out, records[i].id(), "\t", records[i].surface, "\t",
                    absl::StrJoin(segmentations[i].cuts(), ","), "\t",
                    segmentations[i].Render(records[i].surface, ";"), "\n");
  }
  return out;
}

// Reads "id<TAB>surface<TAB>cuts[<TAB>...]" lines written by `segment`.
absl::StatusOr<std::map<std::string, std::vector<int>>> ReadPredictions(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::map<std::string, std::vector<int>> out;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line_number == 1 && absl::StartsWith(line, "id\t")) continue;
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    std::vector<std::string> fields = absl::StrSplit(line, '\t');
    if (fields.size() < 3) {
      return absl::InvalidArgumentError(absl::StrCat(
          path, ":", line_number, ": expected id, surface and cuts"));
    }
    std::vector<int> cuts;
    for (absl::string_view c : absl::StrSplit(fields[2], ',', absl::SkipEmpty())) {
      int cut;
      if (!absl::SimpleAtoi(c, &cut)) {
        return absl::InvalidArgumentError(
            absl::StrCat(path, ":", line_number, ": bad cut \"", c, "\""));
      }
      cuts.push_back(cut);
    }
    out[fields[0]] = std::move(cuts);
  }
  return out;
}

absl::Status RunSegment(const std::string& corpus, const SegmenterFlags& flags,
                        const std::string& output, int jobs,
                        std::ostream& out) {
  if (flags.systems.size() != 1) {
    return UsageError("segment takes exactly one --system");
  }
  absl::StatusOr<std::vector<ComplexWordRecord>> records = LoadCorpus(corpus);
  if (!records.ok()) return records.status();
  absl::StatusOr<std::unique_ptr<Segmenter>> segmenter =
      BuildSegmenter(flags.systems[0], flags);
  if (!segmenter.ok()) return segmenter.status();
  absl::StatusOr<std::vector<Segmentation>> segs =
      SegmentAll(**segmenter, *records, jobs);
  if (!segs.ok()) return segs.status();
  return Emit(output, PredictionsTsv(*records, *segs), out);
}

absl::StatusOr<SegMetrics> ScoreAll(
    const std::vector<ComplexWordRecord>& blends,
    const std::vector<Segmentation>& predictions) {
  std::vector<SegScore> scores;
  for (size_t i = 0; i < blends.size(); ++i) {
    absl::StatusOr<SegScore> score =
        ScoreSegmentation(blends[i].labeling, predictions[i]);
    if (!score.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat(blends[i].id(), ": ", score.status().message()));
    }
    scores.push_back(*score);
  }
  return Aggregate(scores);
}

absl::Status RunEvalSeg(const std::string& corpus, const SegmenterFlags& flags,
                        const std::vector<std::string>& prediction_files,
                        const std::string& prefix, int jobs,
                        std::ostream& out) {
  if (flags.systems.empty() && prediction_files.empty()) {
    return UsageError("eval-seg needs --system or --predictions");
  }
  absl::StatusOr<std::vector<ComplexWordRecord>> records = LoadCorpus(corpus);
  if (!records.ok()) return records.status();
  absl::StatusOr<std::vector<ComplexWordRecord>> blends = Blends(*records);
  if (!blends.ok()) return blends.status();
  if (blends->empty()) {
    return absl::InvalidArgumentError(absl::StrCat(corpus, " has no blends"));
  }

  Table table{{"System", "N", "#segs", "Prec.", "L Rec.", "S Rec.", "L F1",
               "S F1", "L EM", "S EM"},
              {}};
  auto add_row = [&](const std::string& name, const SegMetrics& m) {
    table.rows.push_back({name, m.items, m.mean_segments, m.precision,
                          m.lenient_recall, m.strict_recall, m.lenient_f1,
                          m.strict_f1, m.lenient_em_rate, m.strict_em_rate});
  };
  for (const std::string& system : flags.systems) {
    absl::StatusOr<std::unique_ptr<Segmenter>> segmenter =
        BuildSegmenter(system, flags);
    if (!segmenter.ok()) return segmenter.status();
    absl::StatusOr<std::vector<Segmentation>> segs =
        SegmentAll(**segmenter, *blends, jobs);
    if (!segs.ok()) return segs.status();
    absl::StatusOr<SegMetrics> metrics = ScoreAll(*blends, *segs);
    if (!metrics.ok()) return metrics.status();
    add_row(system, *metrics);
  }
  for (const std::string& path : prediction_files) {
    absl::StatusOr<std::map<std::string, std::vector<int>>> predictions =
        ReadPredictions(path);
    if (!predictions.ok()) return predictions.status();
    std::vector<Segmentation> segs;
    for (const ComplexWordRecord& blend : *blends) {
      auto it = predictions->find(blend.id());
      if (it == predictions->end()) {
        return absl::InvalidArgumentError(
            absl::StrCat(path, " has no prediction for ", blend.id()));
      }
      absl::StatusOr<Segmentation> seg = Segmentation::Create(
          it->second, static_cast<int>(blend.labeling.size()));
      if (!seg.ok()) {
        return absl::InvalidArgumentError(absl::StrCat(
            path, ": ", blend.id(), ": ", seg.status().message()));
      }
      segs.push_back(*std::move(seg));
    }
    absl::StatusOr<SegMetrics> metrics = ScoreAll(*blends, segs);
    if (!metrics.ok()) return metrics.status();
    add_row(Stem(path), *metrics);
  }
  return WriteTable(table, prefix, out);
}

// ---------------------------------------------------------------------------
// Tokenizer and language-model training

absl::StatusOr<WordCounts> ReadWordCounts(const std::string& path,
                                          bool lowercase) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  return CountWords(in, lowercase);
}

absl::Status RunTrainBpe(const std::string& text, int vocab_size, bool cased,
                         const std::string& output, std::ostream& out) {
  absl::StatusOr<WordCounts> counts = ReadWordCounts(text, !cased);
  if (!counts.ok()) return counts.status();
  absl::StatusOr<BpeModel> model = BpeModel::Train(*counts, vocab_size);
  if (!model.ok()) return model.status();
  if (absl::Status s = SaveModel(*model, output); !s.ok()) return s;
  out << model->merges().size() << " merges, " << model->vocab().size()
      << " symbols\n";
  return absl::OkStatus();
}

absl::Status RunTrainUnigram(const std::string& text,
                             const UnigramTrainerOptions& options, bool cased,
                             const std::string& output, std::ostream& out) {
  absl::StatusOr<WordCounts> counts = ReadWordCounts(text, !cased);
  if (!counts.ok()) return counts.status();
  absl::StatusOr<UnigramModel> model = UnigramModel::Train(*counts, options);
  if (!model.ok()) return model.status();
  if (absl::Status s = SaveModel(*model, output); !s.ok()) return s;
  out << model->pieces().size() << " pieces\n";
  return absl::OkStatus();
}

absl::Status RunTrainCharLm(const std::string& text,
                            const std::string& direction,
                            const CharLmOptions& base_options,
                            const std::string& output, std::ostream& out) {
  CharLmOptions options = base_options;
  if (direction == "forward") {
    options.direction = LmDirection::kForward;
  } else if (direction == "backward") {
    options.direction = LmDirection::kBackward;
  } else {
    return UsageError("--direction must be forward or backward");
  }
  std::ifstream in(text);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", text));
  absl::StatusOr<CharNgramLm> lm = CharNgramLm::Train(in, options);
  if (!lm.ok()) return lm.status();
  if (absl::Status s = SaveModel(*lm, output); !s.ok()) return s;
  out << direction << " order-" << options.order << " model over "
      << lm->vocab_size() << " symbols\n";
  return absl::OkStatus();
}

// ---------------------------------------------------------------------------
// tagger

std::vector<TaggedWord> ToTagged(const std::vector<ComplexWordRecord>& records) {
  std::vector<TaggedWord> out;
  for (const ComplexWordRecord& r : records) {
    out.push_back({utf8::ToLower(r.surface), r.labeling});
  }
  return out;
}

absl::Status RunTaggerTrain(const std::string& corpus, const std::string& dev,
                            const TaggerOptions& options,
                            const std::string& output, std::ostream& out,
                            std::ostream& err) {
  absl::StatusOr<std::vector<ComplexWordRecord>> records = LoadCorpus(corpus);
  if (!records.ok()) return records.status();
  const std::vector<TaggedWord> train = ToTagged(*records);
  std::vector<long> errors;
  absl::StatusOr<TaggerModel> model =
      TaggerModel::Train(train, options, &errors);
  if (!model.ok()) return model.status();
  for (size_t e = 0; e < errors.size(); ++e) {
    err << "epoch " << e + 1 << ": " << errors[e] << " mislabeled characters\n";
  }
  if (absl::Status s = SaveModel(*model, output); !s.ok()) return s;
  out << absl::StrFormat("train accuracy\t%.3f\n",
                         CharacterAccuracy(*model, train));
  if (!dev.empty()) {
    absl::StatusOr<std::vector<ComplexWordRecord>> held = LoadCorpus(dev);
    if (!held.ok()) return held.status();
    out << absl::StrFormat("dev accuracy\t%.3f\n",
                           CharacterAccuracy(*model, ToTagged(*held)));
  }
  return absl::OkStatus();
}

absl::Status RunTaggerTag(const std::string& model_path,
                          const std::string& corpus,
                          const std::vector<std::string>& words,
                          std::ostream& out) {
  absl::StatusOr<TaggerModel> model = TaggerModel::Load(model_path);
  if (!model.ok()) return model.status();
  std::vector<std::string> inputs = words;
  if (!corpus.empty()) {
    absl::StatusOr<std::vector<ComplexWordRecord>> records = LoadCorpus(corpus);
    if (!records.ok()) return records.status();
    for (const ComplexWordRecord& r : *records) inputs.push_back(r.surface);
  }
  if (inputs.empty()) return UsageError("tagger tag needs words or --corpus");
  for (const std::string& word : inputs) {
    const PaxobsLabeling labels = model->Tag(utf8::ToLower(word));
    out << word << "\t" << labels.str() << "\t"
        << GoldSegmentation(labels).Render(word, ";") << "\n";
  }
  return absl::OkStatus();
}

// ---------------------------------------------------------------------------
// Recovery: candidates, ranking, evaluation

// Per-record outputs are written in id order whatever the corpus order.
void SortById(std::vector<ComplexWordRecord>* records) {
  std::stable_sort(records->begin(), records->end(),
                   [](const ComplexWordRecord& a, const ComplexWordRecord& b) {
                     return a.id() < b.id();
                   });
}

absl::Status RunGenCandidates(const std::string& vocab_path,
                              const std::string& corpus,
                              const CandidateOptions& options,
                              const std::string& output, std::ostream& out,
                              std::ostream& err) {
  absl::StatusOr<CandidateVocab> vocab = CandidateVocab::Load(vocab_path);
  if (!vocab.ok()) return vocab.status();
  absl::StatusOr<std::vector<ComplexWordRecord>> records = LoadCorpus(corpus);
  if (!records.ok()) return records.status();
  absl::StatusOr<std::vector<ComplexWordRecord>> blends = Blends(*records);
  if (!blends.ok()) return blends.status();
  SortById(&*blends);
  std::string text;
  int written = 0;
  int a_present = 0;
  int b_present = 0;
  for (const ComplexWordRecord& blend : *blends) {
    absl::StatusOr<CandidateSet> set =
        GenerateCandidates(blend, *vocab, options);
    if (!set.ok()) {
      err << "skipping " << blend.id() << ": " << set.status().message()
          << "\n";
      continue;
    }
    absl::StrAppend(&text, SerializeCandidateSet(*set), "\n");
    ++written;
    a_present += set->a_present;
    b_present += set->b_present;
  }
  if (absl::Status s = Emit(output, text, out); !s.ok()) return s;
  if (!output.empty()) {
    out << written << " candidate sets; true A in vocabulary for " << a_present
        << ", true B for " << b_present << "\n";
  }
  return absl::OkStatus();
}

struct RankFlags {
  std::string system;
  std::string candidates;
  std::string corpus;
  std::string vectors;
  std::string lm_forward;
  std::string lm_backward;
  std::string backend;
  std::string output;
  int jobs = 1;
};

absl::StatusOr<std::map<std::string, BlendContext>> LoadContexts(
    const std::string& corpus, const std::vector<CandidateSet>& sets) {
  if (corpus.empty()) return UsageError("this ranker needs --corpus");
  absl::StatusOr<std::vector<ComplexWordRecord>> records = LoadCorpus(corpus);
  if (!records.ok()) return records.status();
  std::map<std::string, const ComplexWordRecord*> by_id;
  for (const ComplexWordRecord& r : *records) by_id.emplace(r.id(), &r);
  std::map<std::string, BlendContext> out;
  for (const CandidateSet& set : sets) {
    auto it = by_id.find(set.blend_id);
    if (it == by_id.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat(corpus, " has no record ", set.blend_id));
    }
    absl::StatusOr<BlendContext> context =
        SplitContext(it->second->context, it->second->surface);
    if (!context.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat(set.blend_id, ": ", context.status().message()));
    }
    out.emplace(set.blend_id, *std::move(context));
  }
  return out;
}

absl::Status RunRank(const RankFlags& flags, std::ostream& out) {
  absl::StatusOr<std::vector<CandidateSet>> sets =
      LoadCandidateSets(flags.candidates);
  if (!sets.ok()) return sets.status();
  std::stable_sort(sets->begin(), sets->end(),
                   [](const CandidateSet& a, const CandidateSet& b) {
                     return a.blend_id < b.blend_id;
                   });

  std::function<absl::StatusOr<Ranking>(const CandidateSet&)> rank;
  std::optional<EmbeddingTable> table;
  std::optional<CharNgramLm> forward;
  std::optional<CharNgramLm> backward;
  std::unique_ptr<MlmBackend> backend;
  std::map<std::string, BlendContext> contexts;
  MlmVariant variant;

  const std::string& system = flags.system;
  if (system == "ed") {
    rank = [](const CandidateSet& set) -> absl::StatusOr<Ranking> {
      return RankByEditDistance(set);
    };
  } else if (system == "lower") {
    rank = [](const CandidateSet& set) -> absl::StatusOr<Ranking> {
      return LowerBoundRanking(set);
    };
  } else if (system == "embed") {
    if (flags.vectors.empty()) return UsageError("embed needs --vectors");
    absl::flat_hash_set<std::string> keep;
    for (const CandidateSet& set : *sets) {
      keep.insert(set.side_a.begin(), set.side_a.end());
      keep.insert(set.side_b.begin(), set.side_b.end());
    }
    absl::StatusOr<EmbeddingTable> loaded =
        EmbeddingTable::Load(flags.vectors, &keep);
    if (!loaded.ok()) return loaded.status();
    table = *std::move(loaded);
    rank = [&](const CandidateSet& set) -> absl::StatusOr<Ranking> {
      return RankByEmbedding(set, *table);
    };
  } else if (system == "charlm") {
    if (flags.lm_forward.empty() || flags.lm_backward.empty()) {
      return UsageError("charlm needs --lm-forward and --lm-backward");
    }
    absl::StatusOr<CharNgramLm> f = CharNgramLm::Load(flags.lm_forward);
    if (!f.ok()) return f.status();
    absl::StatusOr<CharNgramLm> b = CharNgramLm::Load(flags.lm_backward);
    if (!b.ok()) return b.status();
    forward = *std::move(f);
    backward = *std::move(b);
    absl::StatusOr<std::map<std::string, BlendContext>> loaded =
        LoadContexts(flags.corpus, *sets);
    if (!loaded.ok()) return loaded.status();
    contexts = *std::move(loaded);
    rank = [&](const CandidateSet& set) -> absl::StatusOr<Ranking> {
      return RankByCharLm(set, *forward, *backward, contexts.at(set.blend_id));
    };
  } else if (absl::StartsWith(system, "mlm")) {
    absl::StatusOr<MlmVariant> parsed = ParseMlmVariant(system);
    if (!parsed.ok()) return UsageError(parsed.status().message());
    variant = *parsed;
    if (flags.backend.empty()) return UsageError("mlm needs --backend");
    absl::StatusOr<std::map<std::string, BlendContext>> loaded =
        LoadContexts(flags.corpus, *sets);
    if (!loaded.ok()) return loaded.status();
    contexts = *std::move(loaded);
    absl::StatusOr<std::unique_ptr<MlmBackend>> opened =
        OpenBackend(flags.backend);
    if (!opened.ok()) return opened.status();
    backend = *std::move(opened);
    rank = [&](const CandidateSet& set) -> absl::StatusOr<Ranking> {
      return RankByMlm(set, *backend, contexts.at(set.blend_id), variant);
    };
  } else {
    return UsageError(absl::StrCat("unknown ranker \"", system,
                                   "\"; expected ed, embed, charlm, "
                                   "mlm[:variant] or lower"));
  }

  std::vector<std::string> lines(sets->size());
  std::vector<absl::Status> statuses(sets->size());
  ParallelFor(static_cast<int>(sets->size()), flags.jobs, [&](int i) {
    absl::StatusOr<Ranking> ranking = rank((*sets)[i]);
    if (ranking.ok()) {
      lines[i] = SerializeRanking(*ranking);
    } else {
      statuses[i] = absl::Status(
          ranking.status().code(),
          absl::StrCat((*sets)[i].blend_id, ": ", ranking.status().message()));
    }
  });
  if (absl::Status s = FirstError(statuses); !s.ok()) return s;
  std::string text;
  for (const std::string& line : lines) absl::StrAppend(&text, line, "\n");
  return Emit(flags.output, text, out);
}

absl::StatusOr<RecoveryMetrics> Evaluate(
    const std::vector<CandidateSet>& sets,
    const std::map<std::string, Ranking>& rankings, const std::string& name) {
  std::vector<RecoveryScore> scores;
  for (const CandidateSet& set : sets) {
    auto it = rankings.find(set.blend_id);
    if (it == rankings.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat(name, " has no ranking for ", set.blend_id));
    }
    absl::StatusOr<RecoveryScore> score = ScoreRanking(set, it->second);
    if (!score.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(
          name, ": ", set.blend_id, ": ", score.status().message()));
    }
    scores.push_back(*score);
  }
  return AggregateRecovery(scores);
}

absl::Status RunEvalRecovery(const std::string& candidates,
                             const std::vector<std::string>& ranking_files,
                             const std::string& prefix, std::ostream& out) {
  absl::StatusOr<std::vector<CandidateSet>> sets =
      LoadCandidateSets(candidates);
  if (!sets.ok()) return sets.status();

  Table table{{"System", "N", "A", "B", "ω", "P@1"}, {}};
  auto add_row = [&](const std::string& name, const RecoveryMetrics& m) {
    table.rows.push_back({name, m.items, Optional(m.mrr_a), Optional(m.mrr_b),
                          Optional(m.mrr_pair), Optional(m.p_at_1)});
  };

  std::map<std::string, Ranking> lower;
  for (const CandidateSet& set : *sets) {
    lower.emplace(set.blend_id, LowerBoundRanking(set));
  }
  absl::StatusOr<RecoveryMetrics> lower_metrics =
      Evaluate(*sets, lower, "lower bound");
  if (!lower_metrics.ok()) return lower_metrics.status();
  add_row("Lower bound", *lower_metrics);

  for (const std::string& path : ranking_files) {
    absl::StatusOr<std::vector<Ranking>> loaded = LoadRankings(path);
    if (!loaded.ok()) return loaded.status();
    std::map<std::string, Ranking> rankings;
    for (Ranking& r : *loaded) {
      std::string id = r.blend_id;
      if (!rankings.emplace(id, std::move(r)).second) {
        return absl::InvalidArgumentError(
            absl::StrCat(path, ": duplicate ranking for ", id));
      }
    }
    absl::StatusOr<RecoveryMetrics> metrics = Evaluate(*sets, rankings, path);
    if (!metrics.ok()) return metrics.status();
    add_row(Stem(path), *metrics);
  }
  return WriteTable(table, prefix, out);
}

// ---------------------------------------------------------------------------
// probe, smoothie

struct ProbeFlags {
  std::string corpus;
  std::string backend;
  bool paxobs_tokenization = false;
  std::string smoothies;  // empty, a rate, or "auto"
  int smoothie_draws = 10;
  std::string seed = std::to_string(kDefaultSeed);
  int min_relation_count = 15;
  std::string prefix;
  int jobs = 1;
};

absl::StatusOr<double> ParseRate(const std::string& text,
                                 const std::vector<ComplexWordRecord>& records) {
  if (text == "auto") return LinearBlendDeletionRate(records);
  double rate;
  if (!absl::SimpleAtod(text, &rate) || rate < 0 || rate >= 1) {
    return UsageError(absl::StrCat("bad smoothie rate \"", text,
                                   "\"; expected a number in [0, 1) or auto"));
  }
  return rate;
}

// Smoothies built from each compound record with two bases, `draws` per
// compound. Draws of one compound share an id unless `number_draws`.
absl::StatusOr<std::vector<ComplexWordRecord>> MakeSmoothies(
    const std::vector<ComplexWordRecord>& records, double rate, int draws,
    uint64_t seed, bool number_draws, std::ostream& err) {
  std::vector<ComplexWordRecord> out;
  for (size_t i = 0; i < records.size(); ++i) {
    const ComplexWordRecord& r = records[i];
    if (r.word_class == WordClass::kBlend || r.bases.size() != 2) continue;
    for (int d = 0; d < draws; ++d) {
      // Seeded per compound and draw so --jobs and corpus order don't matter.
      std::mt19937_64 rng = SeededRng(seed, {i, static_cast<uint64_t>(d)});
      absl::StatusOr<ComplexWordRecord> smoothie = SmoothieRecord(r, rate, rng);
      if (!smoothie.ok()) {
        err << "no smoothie for " << r.id() << ": "
            << smoothie.status().message() << "\n";
        break;
      }
      if (number_draws && draws > 1) {
        smoothie->source_id = absl::StrCat(*smoothie->source_id, d + 1);
      }
      out.push_back(*std::move(smoothie));
    }
  }
  return out;
}

// Averages runs of profiles sharing a word id (the draws of one smoothie).
std::vector<SimilarityProfile> MergeDraws(
    std::vector<SimilarityProfile> profiles) {
  std::vector<SimilarityProfile> out;
  std::vector<int> runs;
  for (SimilarityProfile& p : profiles) {
    if (!out.empty() && out.back().word_id == p.word_id &&
        out.back().group == p.group) {
      for (size_t l = 0; l < p.cosines.size(); ++l) {
        out.back().cosines[l] += p.cosines[l];
      }
      ++runs.back();
    } else {
      out.push_back(std::move(p));
      runs.push_back(1);
    }
  }
  for (size_t i = 0; i < out.size(); ++i) {
    for (double& c : out[i].cosines) c /= runs[i];
  }
  return out;
}

Table SummaryTable(const std::vector<GroupSummary>& groups,
                   absl::string_view group_column) {
  Table table{{std::string(group_column), "n", "layer", "mean", "sem"}, {}};
  for (const GroupSummary& g : groups) {
    for (size_t l = 0; l < g.mean.size(); ++l) {
      table.rows.push_back({g.group, g.n, l, g.mean[l], g.sem[l]});
    }
  }
  return table;
}

absl::Status RunProbe(const ProbeFlags& flags, std::ostream& out,
                      std::ostream& err) {
  if (flags.backend.empty()) return UsageError("probe run needs --backend");
  if (flags.smoothie_draws < 1) {
    return UsageError("--smoothie-draws must be positive");
  }
  absl::StatusOr<uint64_t> seed = ParseSeed(flags.seed);
  if (!seed.ok()) return seed.status();
  absl::StatusOr<std::vector<ComplexWordRecord>> records =
      LoadCorpus(flags.corpus);
  if (!records.ok()) return records.status();
  SortById(&*records);

  std::vector<ComplexWordRecord> inputs = *records;
  if (!flags.smoothies.empty()) {
    absl::StatusOr<double> rate = ParseRate(flags.smoothies, *records);
    if (!rate.ok()) return rate.status();
    absl::StatusOr<std::vector<ComplexWordRecord>> smoothies =
        MakeSmoothies(*records, *rate, flags.smoothie_draws, *seed,
                      /*number_draws=*/false, err);
    if (!smoothies.ok()) return smoothies.status();
    err << smoothies->size() << " smoothies at deletion rate "
        << absl::StrFormat("%.3f", *rate) << "\n";
    inputs.insert(inputs.end(), smoothies->begin(), smoothies->end());
  }
  const size_t num_real = records->size();

  absl::StatusOr<std::unique_ptr<MlmBackend>> backend =
      OpenBackend(flags.backend);
  if (!backend.ok()) return backend.status();
  const ProbeTokenization tokenization =
      flags.paxobs_tokenization ? ProbeTokenization::kPaxobsInformed
                                : ProbeTokenization::kDefault;

  std::vector<std::optional<SimilarityProfile>> computed(inputs.size());
  std::vector<absl::Status> statuses(inputs.size());
  ParallelFor(static_cast<int>(inputs.size()), flags.jobs, [&](int i) {
    absl::StatusOr<SimilarityProfile> p =
        ComputeSimilarityProfile(inputs[i], **backend, tokenization);
    if (p.ok()) {
      if (static_cast<size_t>(i) >= num_real) p->group = "smoothie";
      computed[i] = *std::move(p);
    } else {
      statuses[i] = absl::Status(
          p.status().code(),
          absl::StrCat(inputs[i].id(), ": ", p.status().message()));
    }
  });

  std::vector<SimilarityProfile> profiles;
  for (size_t i = 0; i < inputs.size(); ++i) {
    if (computed[i].has_value()) {
      profiles.push_back(*std::move(computed[i]));
    } else if (statuses[i].code() == absl::StatusCode::kNotFound) {
      // Word missing from its own context; nothing to probe.
      err << "skipping " << statuses[i].message() << "\n";
    } else {
      return statuses[i];
    }
  }
  if (profiles.empty()) return absl::InvalidArgumentError("no profiles");
  profiles = MergeDraws(std::move(profiles));

  // Smoothies are linear by construction, so they are set against the
  // linear blends as well as the whole blend class.
  std::vector<SimilarityProfile> class_profiles = profiles;
  if (!flags.smoothies.empty()) {
    std::map<std::string, const ComplexWordRecord*> by_id;
    for (const ComplexWordRecord& r : *records) by_id.emplace(r.id(), &r);
    for (const SimilarityProfile& p : profiles) {
      auto it = by_id.find(p.word_id);
      if (p.group == "smoothie" || it == by_id.end() ||
          it->second->word_class != WordClass::kBlend) {
        continue;
      }
      absl::StatusOr<bool> linear = IsLinear(it->second->labeling);
      if (linear.ok() && *linear) {
        class_profiles.push_back(p);
        class_profiles.back().group = "linear_blend";
      }
    }
  }

  Table long_form{{"word_id", "class", "relation", "layer", "cosine"}, {}};
  for (const SimilarityProfile& p : profiles) {
    for (size_t l = 0; l < p.cosines.size(); ++l) {
      long_form.rows.push_back(
          {p.word_id, p.group,
           p.relation.has_value() ? ordered_json(*p.relation) : ordered_json(),
           l, p.cosines[l]});
    }
  }
  absl::StatusOr<std::vector<GroupSummary>> by_class =
      AggregateProfiles(class_profiles, ProfileGrouping::kClass);
  if (!by_class.ok()) return by_class.status();
  absl::StatusOr<std::vector<GroupSummary>> by_relation = AggregateProfiles(
      profiles, ProfileGrouping::kRelation, flags.min_relation_count);
  if (!by_relation.ok()) return by_relation.status();
  const Table class_table = SummaryTable(*by_class, "class");
  const Table relation_table = SummaryTable(*by_relation, "relation");

  if (flags.prefix.empty()) {
    out << class_table.ToTsv();
    return absl::OkStatus();
  }
  // Profiles are long; only the summary goes to stdout.
  std::ostringstream sink;
  if (absl::Status s =
          Emit(flags.prefix + ".profiles.tsv", long_form.ToTsv(), sink);
      !s.ok()) {
    return s;
  }
  if (absl::Status s = WriteTable(class_table, flags.prefix + ".class", out);
      !s.ok()) {
    return s;
  }
  return WriteTable(relation_table, flags.prefix + ".relation", sink);
}

struct SmoothieFlags {
  std::string a;
  std::string b;
  std::string corpus;
  std::string rate = "auto";
  std::string seed = std::to_string(kDefaultSeed);
  int count = 1;
  std::string output;
};

absl::Status RunSmoothie(const SmoothieFlags& flags, std::ostream& out,
                         std::ostream& err) {
  absl::StatusOr<uint64_t> seed = ParseSeed(flags.seed);
  if (!seed.ok()) return seed.status();
  if (flags.count < 1) return UsageError("--count must be positive");
  if (!flags.corpus.empty()) {
    if (!flags.a.empty() || !flags.b.empty()) {
      return UsageError("give either --corpus or --a and --b");
    }
    absl::StatusOr<std::vector<ComplexWordRecord>> records =
        LoadCorpus(flags.corpus);
    if (!records.ok()) return records.status();
    SortById(&*records);
    absl::StatusOr<double> rate = ParseRate(flags.rate, *records);
    if (!rate.ok()) return rate.status();
    absl::StatusOr<std::vector<ComplexWordRecord>> smoothies =
        MakeSmoothies(*records, *rate, flags.count, *seed,
                      /*number_draws=*/true, err);
    if (!smoothies.ok()) return smoothies.status();
    std::string text;
    for (const ComplexWordRecord& r : *smoothies) {
      absl::StrAppend(&text, SerializeRecord(r), "\n");
    }
    return Emit(flags.output, text, out);
  }
  if (flags.a.empty() || flags.b.empty()) {
    return UsageError("smoothie needs --a and --b, or --corpus");
  }
  if (flags.rate == "auto") return UsageError("--rate auto needs --corpus");
  absl::StatusOr<double> rate = ParseRate(flags.rate, {});
  if (!rate.ok()) return rate.status();
  std::mt19937_64 rng = SeededRng(*seed, {});
  std::string text;
  for (int i = 0; i < flags.count; ++i) {
    absl::StatusOr<Smoothie> s = SynthesizeSmoothie(
        utf8::ToLower(flags.a), utf8::ToLower(flags.b), *rate, rng);
    if (!s.ok()) return s.status();
    absl::StrAppend(&text, s->surface, "\t", s->labeling.str(), "\t",
                    s->deleted, "\n");
  }
  return Emit(flags.output, text, out);
}

absl::Status RunServeMock(const std::string& fixture, std::istream& in,
                          std::ostream& out) {
  absl::StatusOr<std::unique_ptr<FixtureBackend>> backend =
      FixtureBackend::Load(fixture);
  if (!backend.ok()) return backend.status();
  ServeBackend(**backend, in, out);
  return absl::OkStatus();
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Segmentation, recovery and probing tools for lexical blends",
               "unblend"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::function<absl::Status()> action;
  auto bind = [&](CLI::App* cmd, std::function<absl::Status()> fn) {
    cmd->callback([&action, fn = std::move(fn)] { action = fn; });
  };

  std::string corpus;
  std::string output;
  int jobs = 1;
  auto add_jobs = [&](CLI::App* cmd) {
    cmd->add_option("--jobs", jobs, "worker threads")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* validate = app.add_subcommand("validate", "Check a corpus file");
  validate->add_option("--corpus", corpus, "JSONL corpus")->required();
  bind(validate, [&] { return RunValidate(corpus, out, err); });

  CLI::App* stats = app.add_subcommand("stats", "Corpus statistics");
  stats->add_option("--corpus", corpus, "JSONL corpus")->required();
  stats->add_option("--out", output, "write PREFIX.tsv and PREFIX.json");
  bind(stats, [&] { return RunStats(corpus, output, out); });

  SegmenterFlags seg_flags;
  CLI::App* segment =
      app.add_subcommand("segment", "Segment each corpus word");
  segment->add_option("--corpus", corpus, "JSONL corpus")->required();
  segment->add_option("--system", seg_flags.systems,
                      "allchars, tagger, wordpiece, bpe or unigram")
      ->required()
      ->expected(1);
  AddSegmenterFlags(segment, &seg_flags);
  segment->add_option("--out", output, "predictions TSV (default stdout)");
  add_jobs(segment);
  bind(segment,
       [&] { return RunSegment(corpus, seg_flags, output, jobs, out); });

  std::vector<std::string> prediction_files;
  CLI::App* eval_seg =
      app.add_subcommand("eval-seg", "Score segmentations of the blends");
  eval_seg->add_option("--corpus", corpus, "JSONL corpus")->required();
  eval_seg->add_option("--system", seg_flags.systems,
                       "segmenter to run (repeatable)");
  eval_seg->add_option("--predictions", prediction_files,
                       "predictions TSV from segment (repeatable)");
  AddSegmenterFlags(eval_seg, &seg_flags);
  eval_seg->add_option("--out", output, "write PREFIX.tsv and PREFIX.json");
  add_jobs(eval_seg);
  bind(eval_seg, [&] {
    return RunEvalSeg(corpus, seg_flags, prediction_files, output, jobs, out);
  });

  std::string text;
  bool cased = false;
  int vocab_size = kDefaultVocabSize;
  CLI::App* train_bpe = app.add_subcommand("train-bpe", "Train BPE merges");
  train_bpe->add_option("--text", text, "training text")->required();
  train_bpe->add_option("--vocab-size", vocab_size, "target vocabulary size")
      ->check(CLI::PositiveNumber);
  train_bpe->add_flag("--cased", cased, "keep case");
  train_bpe->add_option("--out", output, "merges file")->required();
  bind(train_bpe,
       [&] { return RunTrainBpe(text, vocab_size, cased, output, out); });

  UnigramTrainerOptions unigram_options;
  CLI::App* train_unigram =
      app.add_subcommand("train-unigram", "Train a Unigram model");
  train_unigram->add_option("--text", text, "training text")->required();
  train_unigram
      ->add_option("--vocab-size", unigram_options.vocab_size,
                   "target vocabulary size")
      ->check(CLI::PositiveNumber);
  train_unigram->add_option("--max-piece-length",
                            unigram_options.max_piece_length,
                            "longest seed piece in characters");
  train_unigram->add_flag("--cased", cased, "keep case");
  train_unigram->add_option("--out", output, "pieces file")->required();
  bind(train_unigram, [&] {
    return RunTrainUnigram(text, unigram_options, cased, output, out);
  });

  std::string direction = "forward";
  CharLmOptions lm_options;
  CLI::App* train_charlm =
      app.add_subcommand("train-charlm", "Train a character n-gram model");
  train_charlm->add_option("--text", text, "training text")->required();
  train_charlm->add_option("--direction", direction, "forward or backward");
  train_charlm->add_option("--order", lm_options.order, "n-gram order")
      ->check(CLI::PositiveNumber);
  train_charlm->add_option("--smoothing", lm_options.smoothing,
                           "add-k constant")
      ->check(CLI::PositiveNumber);
  train_charlm->add_option("--out", output, "model JSON")->required();
  bind(train_charlm, [&] {
    return RunTrainCharLm(text, direction, lm_options, output, out);
  });

  CLI::App* tagger = app.add_subcommand("tagger", "PAXOBS tagger");
  tagger->require_subcommand(1);
  TaggerOptions tagger_options;
  std::string seed_text = std::to_string(kDefaultSeed);
  std::string dev;
  CLI::App* tagger_train = tagger->add_subcommand("train", "Train a tagger");
  tagger_train->add_option("--in", corpus, "training corpus")->required();
  tagger_train->add_option("--dev", dev, "held-out corpus");
  tagger_train->add_option("--out", output, "model JSON")->required();
  tagger_train->add_option("--epochs", tagger_options.epochs, "passes")
      ->check(CLI::PositiveNumber);
  tagger_train->add_option("--window", tagger_options.window,
                           "context characters on each side")
      ->check(CLI::NonNegativeNumber);
  tagger_train->add_option("--max-ngram", tagger_options.max_ngram,
                           "longest n-gram feature")
      ->check(CLI::PositiveNumber);
  tagger_train->add_option("--seed", seed_text, "shuffling seed");
  bind(tagger_train, [&]() -> absl::Status {
    absl::StatusOr<uint64_t> seed = ParseSeed(seed_text);
    if (!seed.ok()) return seed.status();
    tagger_options.seed = *seed;
    return RunTaggerTrain(corpus, dev, tagger_options, output, out, err);
  });
  std::string model;
  std::vector<std::string> words;
  CLI::App* tagger_tag = tagger->add_subcommand("tag", "Tag words");
  tagger_tag->add_option("--model", model, "model JSON")->required();
  tagger_tag->add_option("--corpus", corpus, "tag every corpus word");
  tagger_tag->add_option("words", words, "words to tag");
  bind(tagger_tag,
       [&] { return RunTaggerTag(model, corpus, words, out); });

  std::string vocab_path;
  CandidateOptions candidate_options;
  auto add_gen_candidates = [&](CLI::App* parent) {
    CLI::App* cmd = parent->add_subcommand(
        "gen-candidates", "Build candidate base sets for each blend");
    cmd->add_option("--vocab", vocab_path,
                    "word list or embedding text file")
        ->required();
    cmd->add_option("--corpus", corpus, "JSONL corpus")->required();
    cmd->add_option("--min-overlap", candidate_options.min_overlap,
                    "shortest side key used for matching")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", output, "candidates JSONL (default stdout)");
    bind(cmd, [&] {
      return RunGenCandidates(vocab_path, corpus, candidate_options, output,
                              out, err);
    });
  };
  add_gen_candidates(&app);
  CLI::App* recover = app.add_subcommand("recover", "Base recovery");
  recover->require_subcommand(1);
  add_gen_candidates(recover);

  RankFlags rank_flags;
  CLI::App* rank = app.add_subcommand("rank", "Rank candidate bases");
  rank->add_option("--system", rank_flags.system,
                   "ed, embed, charlm, mlm[:variant] or lower")
      ->required();
  rank->add_option("--candidates", rank_flags.candidates, "candidates JSONL")
      ->required();
  rank->add_option("--corpus", rank_flags.corpus,
                   "JSONL corpus, for contexts");
  rank->add_option("--vectors", rank_flags.vectors, "word vectors (embed)");
  rank->add_option("--lm-forward", rank_flags.lm_forward,
                   "forward character model (charlm)");
  rank->add_option("--lm-backward", rank_flags.lm_backward,
                   "backward character model (charlm)");
  rank->add_option("--backend", rank_flags.backend,
                   "MLM backend: mock:FILE, unix:SOCKET or a command (mlm)");
  rank->add_option("--out", rank_flags.output,
                   "rankings JSONL (default stdout)");
  rank->add_option("--jobs", rank_flags.jobs, "worker threads")
      ->check(CLI::PositiveNumber);
  bind(rank, [&] { return RunRank(rank_flags, out); });

  std::string candidates;
  std::vector<std::string> ranking_files;
  CLI::App* eval_recovery =
      app.add_subcommand("eval-recovery", "Score rankings");
  eval_recovery->add_option("--candidates", candidates, "candidates JSONL")
      ->required();
  eval_recovery->add_option("--rankings", ranking_files,
                            "rankings JSONL (repeatable)");
  eval_recovery->add_option("--out", output,
                            "write PREFIX.tsv and PREFIX.json");
  bind(eval_recovery, [&] {
    return RunEvalRecovery(candidates, ranking_files, output, out);
  });

  ProbeFlags probe_flags;
  CLI::App* probe = app.add_subcommand("probe", "Layer similarity probe");
  probe->require_subcommand(1);
  CLI::App* probe_run = probe->add_subcommand("run", "Compute profiles");
  probe_run->add_option("--corpus", probe_flags.corpus, "JSONL corpus")
      ->required();
  probe_run->add_option("--backend", probe_flags.backend,
                        "mock:FILE, unix:SOCKET or a command")
      ->required();
  probe_run->add_flag("--paxobs-tok", probe_flags.paxobs_tokenization,
                      "split words at their gold base boundaries");
  probe_run->add_option("--smoothies", probe_flags.smoothies,
                        "add smoothies at this deletion rate, or auto");
  probe_run->add_option("--smoothie-draws", probe_flags.smoothie_draws,
                        "smoothies per compound");
  probe_run->add_option("--seed", probe_flags.seed, "smoothie seed");
  probe_run->add_option("--min-relation-count",
                        probe_flags.min_relation_count,
                        "report relations with more records than this");
  probe_run->add_option("--out", probe_flags.prefix,
                        "write PREFIX.profiles.tsv and summary tables");
  probe_run->add_option("--jobs", probe_flags.jobs, "worker threads")
      ->check(CLI::PositiveNumber);
  bind(probe_run, [&] { return RunProbe(probe_flags, out, err); });

  SmoothieFlags smoothie_flags;
  CLI::App* smoothie =
      app.add_subcommand("smoothie", "Synthesize seam-deletion blends");
  smoothie->add_option("--a", smoothie_flags.a, "first base");
  smoothie->add_option("--b", smoothie_flags.b, "second base");
  smoothie->add_option("--corpus", smoothie_flags.corpus,
                       "make smoothies from the corpus compounds");
  smoothie->add_option("--rate", smoothie_flags.rate,
                       "deletion rate, or auto (corpus blends)");
  smoothie->add_option("--seed", smoothie_flags.seed, "random seed");
  smoothie->add_option("--count", smoothie_flags.count,
                       "draws per base pair");
  smoothie->add_option("--out", smoothie_flags.output,
                       "output file (default stdout)");
  bind(smoothie, [&] { return RunSmoothie(smoothie_flags, out, err); });

  std::string fixture;
  CLI::App* serve_mock = app.add_subcommand(
      "serve-mock", "Answer backend requests on stdin from a fixture");
  serve_mock->add_option("--fixture", fixture, "fixture JSON")->required();
  bind(serve_mock, [&] { return RunServeMock(fixture, std::cin, out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }
  if (!action) {
    err << "unblend: no command\n";
    return kExitUsage;
  }
  const absl::Status status = action();
  if (!status.ok()) err << "unblend: " << status.message() << "\n";
  return ExitCode(status);
}

}  // namespace unblend
