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


// The original Porter (1980) suffix-stripping stemmer for English.

#ifndef UNBLEND_PORTER_STEMMER_H_
#define UNBLEND_PORTER_STEMMER_H_

#include <string>

#include "absl/strings/string_view.h"

namespace unblend {

// Stems a lowercase word. Words of one or two letters, and words containing
// anything other than a-z, come back unchanged.
std::string PorterStem(absl::string_view word);

}  // namespace unblend

#endif  // UNBLEND_PORTER_STEMMER_H_
