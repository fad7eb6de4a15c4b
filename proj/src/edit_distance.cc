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


#include "unblend/edit_distance.h"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "unblend/utf8.h"

namespace unblend {

int EditDistance(absl::string_view a, absl::string_view b) {
  const std::u32string s = utf8::Decode(a);
  const std::u32string t = utf8::Decode(b);
  std::vector<int> row(t.size() + 1);
  std::iota(row.begin(), row.end(), 0);
  for (size_t i = 1; i <= s.size(); ++i) {
    int diagonal = row[0];
    row[0] = static_cast<int>(i);
    for (size_t j = 1; j <= t.size(); ++j) {
      const int above = row[j];
      row[j] = std::min({above + 1, row[j - 1] + 1,
                         diagonal + (s[i - 1] == t[j - 1] ? 0 : 1)});
      diagonal = above;
    }
  }
  return row[t.size()];
}

}  // namespace unblend
