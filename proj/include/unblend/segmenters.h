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


// The segmentation systems behind one interface.

#ifndef UNBLEND_SEGMENTERS_H_
#define UNBLEND_SEGMENTERS_H_

#include <memory>
#include <string>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "unblend/bpe.h"
#include "unblend/paxobs.h"
#include "unblend/tagger.h"
#include "unblend/unigram.h"
#include "unblend/wordpiece.h"

namespace unblend {

// Segmenters lowercase their input; cut indices refer to the characters of
// the word as given.
class Segmenter {
 public:
  virtual ~Segmenter() = default;
  virtual absl::StatusOr<Segmentation> Segment(absl::string_view word) const = 0;
};

std::unique_ptr<Segmenter> MakeAllCharsSegmenter();
// Cuts wherever the predicted label changes.
std::unique_ptr<Segmenter> MakeTaggerSegmenter(TaggerModel model);
// A word that encodes to the unknown piece gets no cuts.
std::unique_ptr<Segmenter> MakeWordPieceSegmenter(WordPieceVocab vocab);
std::unique_ptr<Segmenter> MakeBpeSegmenter(BpeModel model);
std::unique_ptr<Segmenter> MakeUnigramSegmenter(UnigramModel model);

}  // namespace unblend

#endif  // UNBLEND_SEGMENTERS_H_
