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


#include "unblend/porter_stemmer.h"

#include <algorithm>
#include <initializer_list>
#include <utility>

namespace unblend {
namespace {

// Follows the structure of the reference C implementation: `b_` holds the
// word, `k_` is the index of its last character and `j_` marks the end of
// the stem under test.
class Stemmer {
 public:
  explicit Stemmer(absl::string_view word)
      : b_(word), k_(static_cast<int>(word.size()) - 1) {}

  std::string Run() {
    if (k_ <= 1) return b_;
    Step1ab();
    if (k_ > 0) {
      Step1c();
      Step2();
      Step3();
      Step4();
      Step5();
    }
    return b_.substr(0, k_ + 1);
  }

 private:
  bool Cons(int i) const {
    switch (b_[i]) {
      case 'a':
      case 'e':
      case 'i':
      case 'o':
      case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !Cons(i - 1);
      default:
        return true;
    }
  }

  // Number of VC sequences in b_[0..j_].
  int M() const {
    int n = 0;
    int i = 0;
    while (true) {
      if (i > j_) return n;
      if (!Cons(i)) break;
      ++i;
    }
    ++i;
    while (true) {
      while (true) {
        if (i > j_) return n;
        if (Cons(i)) break;
        ++i;
      }
      ++i;
      ++n;
      while (true) {
        if (i > j_) return n;
        if (!Cons(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool VowelInStem() const {
    for (int i = 0; i <= j_; ++i) {
      if (!Cons(i)) return true;
    }
    return false;
  }

  bool DoubleC(int j) const {
    if (j < 1 || b_[j] != b_[j - 1]) return false;
    return Cons(j);
  }

  // consonant-vowel-consonant ending at i, last not w, x or y.
  bool Cvc(int i) const {
    if (i < 2 || !Cons(i) || Cons(i - 1) || !Cons(i - 2)) return false;
    const char ch = b_[i];
    return ch != 'w' && ch != 'x' && ch != 'y';
  }

  bool Ends(absl::string_view s) {
    const int length = static_cast<int>(s.size());
    if (length > k_ + 1) return false;
    if (absl::string_view(b_).substr(k_ - length + 1, length) != s) {
      return false;
    }
    j_ = k_ - length;
    return true;
  }

  void SetTo(absl::string_view s) {
    const size_t needed = j_ + 1 + s.size();
    if (b_.size() < needed) b_.resize(needed);
    std::copy(s.begin(), s.end(), b_.begin() + j_ + 1);
    k_ = j_ + static_cast<int>(s.size());
  }

  void R(absl::string_view s) {
    if (M() > 0) SetTo(s);
  }

  void Step1ab() {
    if (b_[k_] == 's') {
      if (Ends("sses")) {
        k_ -= 2;
      } else if (Ends("ies")) {
        SetTo("i");
      } else if (b_[k_ - 1] != 's') {
        --k_;
      }
    }
    if (Ends("eed")) {
      if (M() > 0) --k_;
    } else if ((Ends("ed") || Ends("ing")) && VowelInStem()) {
      k_ = j_;
      if (Ends("at")) {
        SetTo("ate");
      } else if (Ends("bl")) {
        SetTo("ble");
      } else if (Ends("iz")) {
        SetTo("ize");
      } else if (DoubleC(k_)) {
        --k_;
        const char ch = b_[k_];
        if (ch == 'l' || ch == 's' || ch == 'z') ++k_;
      } else if (M() == 1 && Cvc(k_)) {
        SetTo("e");
      }
    }
  }

  void Step1c() {
    if (Ends("y") && VowelInStem()) b_[k_] = 'i';
  }

  // Replaces the first listed suffix that matches, if the stem before it
  // has a VC sequence.
  void Rules(std::initializer_list<std::pair<absl::string_view,
                                             absl::string_view>> rules) {
    for (const auto& [suffix, replacement] : rules) {
      if (Ends(suffix)) {
        R(replacement);
        return;
      }
    }
  }

  void Step2() {
    switch (b_[k_ - 1]) {
      case 'a':
        Rules({{"ational", "ate"}, {"tional", "tion"}});
        break;
      case 'c':
        Rules({{"enci", "ence"}, {"anci", "ance"}});
        break;
      case 'e':
        Rules({{"izer", "ize"}});
        break;
      case 'l':
        Rules({{"bli", "ble"}, {"alli", "al"}, {"entli", "ent"}, {"eli", "e"},
               {"ousli", "ous"}});
        break;
      case 'o':
        Rules({{"ization", "ize"}, {"ation", "ate"}, {"ator", "ate"}});
        break;
      case 's':
        Rules({{"alism", "al"}, {"iveness", "ive"}, {"fulness", "ful"},
               {"ousness", "ous"}});
        break;
      case 't':
        Rules({{"aliti", "al"}, {"iviti", "ive"}, {"biliti", "ble"}});
        break;
      case 'g':
        Rules({{"logi", "log"}});
        break;
    }
  }

  void Step3() {
    switch (b_[k_]) {
      case 'e':
        Rules({{"icate", "ic"}, {"ative", ""}, {"alize", "al"}});
        break;
      case 'i':
        Rules({{"iciti", "ic"}});
        break;
      case 'l':
        Rules({{"ical", "ic"}, {"ful", ""}});
        break;
      case 's':
        Rules({{"ness", ""}});
        break;
    }
  }

  void Step4() {
    bool matched = false;
    switch (b_[k_ - 1]) {
      case 'a':
        matched = Ends("al");
        break;
      case 'c':
        matched = Ends("ance") || Ends("ence");
        break;
      case 'e':
        matched = Ends("er");
        break;
      case 'i':
        matched = Ends("ic");
        break;
      case 'l':
        matched = Ends("able") || Ends("ible");
        break;
      case 'n':
        matched = Ends("ant") || Ends("ement") || Ends("ment") || Ends("ent");
        break;
      case 'o':
        matched = (Ends("ion") && j_ >= 0 && (b_[j_] == 's' || b_[j_] == 't')) ||
                  Ends("ou");
        break;
      case 's':
        matched = Ends("ism");
        break;
      case 't':
        matched = Ends("ate") || Ends("iti");
        break;
      case 'u':
        matched = Ends("ous");
        break;
      case 'v':
        matched = Ends("ive");
        break;
      case 'z':
        matched = Ends("ize");
        break;
    }
    if (matched && M() > 1) k_ = j_;
  }

  void Step5() {
    j_ = k_;
    if (b_[k_] == 'e') {
      const int a = M();
      if (a > 1 || (a == 1 && !Cvc(k_ - 1))) --k_;
    }
    if (b_[k_] == 'l' && DoubleC(k_) && M() > 1) --k_;
  }

  std::string b_;
  int k_;
  int j_ = 0;
};

}  // namespace

std::string PorterStem(absl::string_view word) {
  if (word.size() <= 2 ||
      !std::all_of(word.begin(), word.end(),
                   [](char c) { return c >= 'a' && c <= 'z'; })) {
    return std::string(word);
  }
  return Stemmer(word).Run();
}

}  // namespace unblend
