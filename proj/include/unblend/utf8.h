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

#ifndef UNBLEND_UTF8_H_
#define UNBLEND_UTF8_H_

#include <string>
#include <vector>

#include "absl/strings/string_view.h"

namespace unblend {
namespace utf8 {

// Decodes UTF-8 into scalar values. Malformed sequences decode to U+FFFD,
// one replacement per offending byte.
std::u32string Decode(absl::string_view s);

std::string Encode(std::u32string_view s);
std::string Encode(char32_t c);

// One UTF-8 string per scalar value.
std::vector<std::string> SplitChars(absl::string_view s);

// Number of scalar values.
size_t Length(absl::string_view s);

bool IsValid(absl::string_view s);

// Simple lowercase mapping covering ASCII, Latin-1, Latin Extended-A, Greek
// and Cyrillic. Other scripts pass through unchanged.
char32_t ToLower(char32_t c);
std::string ToLower(absl::string_view s);
std::u32string ToLower(std::u32string_view s);

// Letters and digits in the ranges ToLower knows about, plus anything above
// U+00FF that is not obviously punctuation. Used for whole-token matching.
bool IsWordChar(char32_t c);

}  // namespace utf8
}  // namespace unblend

#endif  // UNBLEND_UTF8_H_
