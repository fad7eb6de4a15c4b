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


#include "unblend/segmenters.h"

#include <utility>
#include <vector>

#include "unblend/subword.h"
#include "unblend/utf8.h"

namespace unblend {
namespace {

class AllChars : public Segmenter {
 public:
  absl::StatusOr<Segmentation> Segment(absl::string_view word) const override {
    return AllCharsSegmentation(word);
  }
};

class Tagger : public Segmenter {
 public:
  explicit Tagger(TaggerModel model) : model_(std::move(model)) {}
  absl::StatusOr<Segmentation> Segment(absl::string_view word) const override {
    return GoldSegmentation(model_.Tag(utf8::ToLower(word)));
  }

 private:
  TaggerModel model_;
};

class WordPiece : public Segmenter {
 public:
  explicit WordPiece(WordPieceVocab vocab) : vocab_(std::move(vocab)) {}
  absl::StatusOr<Segmentation> Segment(absl::string_view word) const override {
    const std::string lowered = utf8::ToLower(word);
    absl::StatusOr<std::vector<std::string>> pieces = vocab_.Encode(lowered);
    if (!pieces.ok()) return pieces.status();
    if (vocab_.unknown().has_value() && pieces->size() == 1 &&
        pieces->front() == *vocab_.unknown() && lowered != *vocab_.unknown()) {
      return Segmentation::NoCuts(static_cast<int>(utf8::Length(word)));
    }
    return PiecesToSegmentation(lowered, *pieces);
  }

 private:
  WordPieceVocab vocab_;
};

class Bpe : public Segmenter {
 public:
  explicit Bpe(BpeModel model) : model_(std::move(model)) {}
  absl::StatusOr<Segmentation> Segment(absl::string_view word) const override {
    const std::string lowered = utf8::ToLower(word);
    return PiecesToSegmentation(lowered, model_.Encode(lowered));
  }

 private:
  BpeModel model_;
};

class Unigram : public Segmenter {
 public:
  explicit Unigram(UnigramModel model) : model_(std::move(model)) {}
  absl::StatusOr<Segmentation> Segment(absl::string_view word) const override {
    const std::string lowered = utf8::ToLower(word);
    return PiecesToSegmentation(lowered, model_.Encode(lowered));
  }

 private:
  UnigramModel model_;
};

}  // namespace

std::unique_ptr<Segmenter> MakeAllCharsSegmenter() {
  return std::make_unique<AllChars>();
}
std::unique_ptr<Segmenter> MakeTaggerSegmenter(TaggerModel model) {
  return std::make_unique<Tagger>(std::move(model));
}
std::unique_ptr<Segmenter> MakeWordPieceSegmenter(WordPieceVocab vocab) {
  return std::make_unique<WordPiece>(std::move(vocab));
}
std::unique_ptr<Segmenter> MakeBpeSegmenter(BpeModel model) {
  return std::make_unique<Bpe>(std::move(model));
}
std::unique_ptr<Segmenter> MakeUnigramSegmenter(UnigramModel model) {
  return std::make_unique<Unigram>(std::move(model));
}

}  // namespace unblend
