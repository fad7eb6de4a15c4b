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


#ifndef UNBLEND_EDIT_DISTANCE_H_
#define UNBLEND_EDIT_DISTANCE_H_

#include "absl/strings/string_view.h"

namespace unblend {

// Levenshtein distance over Unicode scalar values, unit costs.
int EditDistance(absl::string_view a, absl::string_view b);

}  // namespace unblend

#endif  // UNBLEND_EDIT_DISTANCE_H_
