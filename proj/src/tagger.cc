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

#include "unblend/tagger.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "absl/status/status.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "unblend/utf8.h"

namespace unblend {

std::vector<std::vector<std::string>> ExtractFeatures(absl::string_view word,
                                                      int window,
                                                      int max_ngram) {
  const std::vector<std::string> chars = utf8::SplitChars(word);
  const int n = static_cast<int>(chars.size());
  auto at = [&](int i) -> absl::string_view {
    if (i < 0) return "<";
    if (i >= n) return ">";
    return chars[i];
  };
  std::vector<std::vector<std::string>> out(n);
  for (int i = 0; i < n; ++i) {
    out[i].push_back("bias");
    for (int len = 1; len <= max_ngram; ++len) {
      for (int offset = -window; offset + len - 1 <= window; ++offset) {
        std::string feature = absl::StrCat(len, ":", offset, ":");
        for (int k = 0; k < len; ++k) absl::StrAppend(&feature, at(i + offset + k));
        out[i].push_back(std::move(feature));
      }
    }
  }
  return out;
}

std::vector<std::vector<int>> TaggerModel::LookupFeatures(
    absl::string_view word) const {
  std::vector<std::vector<int>> ids;
  for (const auto& position : ExtractFeatures(word, window_, max_ngram_)) {
    std::vector<int> row;
    for (const std::string& f : position) {
      auto it = feature_ids_.find(f);
      if (it != feature_ids_.end()) row.push_back(it->second);
    }
    ids.push_back(std::move(row));
  }
  return ids;
}

std::vector<int> TaggerModel::Decode(
    absl::Span<const std::vector<int>> features) const {
  const int n = static_cast<int>(features.size());
  const int labels = num_labels();
  if (n == 0) return {};
  std::vector<double> score(n * labels);
  std::vector<int> back(n * labels, 0);
  auto emit = [&](int i, int label) {
    double s = 0;
    for (int f : features[i]) s += emission_[f * labels + label];
    return s;
  };
  for (int l = 0; l < labels; ++l) {
    score[l] = transition_[labels * labels + l] + emit(0, l);
  }
  for (int i = 1; i < n; ++i) {
    for (int l = 0; l < labels; ++l) {
      double best = -HUGE_VAL;
      int arg = 0;
      for (int p = 0; p < labels; ++p) {
        const double s = score[(i - 1) * labels + p] + transition_[p * labels + l];
        if (s > best) {
          best = s;
          arg = p;
        }
      }
      score[i * labels + l] = best + emit(i, l);
      back[i * labels + l] = arg;
    }
  }
  std::vector<int> path(n);
  double best = -HUGE_VAL;
  for (int l = 0; l < labels; ++l) {
    if (score[(n - 1) * labels + l] > best) {
      best = score[(n - 1) * labels + l];
      path[n - 1] = l;
    }
  }
  for (int i = n - 1; i > 0; --i) path[i - 1] = back[i * labels + path[i]];
  return path;
}

PaxobsLabeling TaggerModel::Tag(absl::string_view word) const {
  const std::vector<std::vector<int>> features = LookupFeatures(word);
  std::string out;
  for (int label : Decode(features)) out.push_back(labels_[label]);
  return *PaxobsLabeling::Parse(out);
}

// Averaged perceptron bookkeeping: `total_` accumulates step * delta so the
// average is weights - total / steps.
class TaggerTrainer {
 public:
  TaggerTrainer(TaggerModel* model) : model_(model) {}

  int Intern(const std::string& feature) {
    auto [it, inserted] = model_->feature_ids_.try_emplace(
        feature, static_cast<int>(model_->feature_names_.size()));
    if (inserted) model_->feature_names_.push_back(feature);
    return it->second;
  }

  void Allocate() {
    const int labels = model_->num_labels();
    model_->emission_.assign(model_->feature_names_.size() * labels, 0.0);
    model_->transition_.assign((labels + 1) * labels, 0.0);
    emission_total_.assign(model_->emission_.size(), 0.0);
    transition_total_.assign(model_->transition_.size(), 0.0);
  }

  // Returns the number of mislabeled characters before the update.
  long Step(const std::vector<std::vector<int>>& features,
            const std::vector<int>& gold) {
    ++steps_;
    const std::vector<int> predicted = model_->Decode(features);
    long errors = 0;
    for (size_t i = 0; i < gold.size(); ++i) errors += predicted[i] != gold[i];
    if (errors == 0) return 0;
    const int labels = model_->num_labels();
    for (size_t i = 0; i < gold.size(); ++i) {
      const int prev_gold = i == 0 ? labels : gold[i - 1];
      const int prev_pred = i == 0 ? labels : predicted[i - 1];
      if (prev_gold != prev_pred || gold[i] != predicted[i]) {
        Update(&model_->transition_, &transition_total_,
               prev_gold * labels + gold[i], 1.0);
        Update(&model_->transition_, &transition_total_,
               prev_pred * labels + predicted[i], -1.0);
      }
      if (gold[i] == predicted[i]) continue;
      for (int f : features[i]) {
        Update(&model_->emission_, &emission_total_, f * labels + gold[i], 1.0);
        Update(&model_->emission_, &emission_total_,
               f * labels + predicted[i], -1.0);
      }
    }
    return errors;
  }

  void Average() {
    if (steps_ == 0) return;
    auto finish = [this](std::vector<double>* w, const std::vector<double>& t) {
      for (size_t i = 0; i < w->size(); ++i) (*w)[i] -= t[i] / steps_;
    };
    finish(&model_->emission_, emission_total_);
    finish(&model_->transition_, transition_total_);
  }

 private:
  void Update(std::vector<double>* weights, std::vector<double>* total,
              int index, double delta) {
    (*weights)[index] += delta;
    (*total)[index] += steps_ * delta;
  }

  TaggerModel* model_;
  std::vector<double> emission_total_;
  std::vector<double> transition_total_;
  long steps_ = 0;
};

absl::StatusOr<TaggerModel> TaggerModel::Train(
    absl::Span<const TaggedWord> examples, const TaggerOptions& options,
    std::vector<long>* epoch_errors) {
  if (examples.empty()) return absl::InvalidArgumentError("no training examples");
  if (options.epochs < 1 || options.window < 0 || options.max_ngram < 1) {
    return absl::InvalidArgumentError("invalid tagger options");
  }
  std::string seen;
  for (const TaggedWord& ex : examples) {
    if (utf8::Length(ex.word) != ex.labeling.size() || ex.labeling.empty()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "labeling ", ex.labeling.str(), " does not fit \"", ex.word, "\""));
    }
    seen += ex.labeling.str();
  }
  TaggerModel model;
  model.window_ = options.window;
  model.max_ngram_ = options.max_ngram;
  for (char c : kCanonicalLabelOrder) {
    if (seen.find(c) != std::string::npos) model.labels_.push_back(c);
  }

  TaggerTrainer trainer(&model);
  std::vector<std::vector<std::vector<int>>> features;
  std::vector<std::vector<int>> gold;
  for (const TaggedWord& ex : examples) {
    std::vector<std::vector<int>> ids;
    for (const auto& position :
         ExtractFeatures(ex.word, options.window, options.max_ngram)) {
      std::vector<int> row;
      for (const std::string& f : position) row.push_back(trainer.Intern(f));
      ids.push_back(std::move(row));
    }
    features.push_back(std::move(ids));
    std::vector<int> labels;
    for (char c : ex.labeling.str()) {
      labels.push_back(static_cast<int>(model.labels_.find(c)));
    }
    gold.push_back(std::move(labels));
  }
  trainer.Allocate();

  std::mt19937_64 rng(options.seed);
  std::vector<size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    long errors = 0;
    for (size_t i : order) errors += trainer.Step(features[i], gold[i]);
    if (epoch_errors != nullptr) epoch_errors->push_back(errors);
  }
  trainer.Average();
  return model;
}

absl::StatusOr<TaggerModel> TaggerModel::Zero(absl::string_view labels,
                                              int window, int max_ngram) {
  if (labels.empty()) return absl::InvalidArgumentError("empty label set");
  for (char c : labels) {
    if (!IsPaxobsLabel(c) || std::count(labels.begin(), labels.end(), c) > 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad label set \"", labels, "\""));
    }
  }
  TaggerModel model;
  for (char c : kCanonicalLabelOrder) {
    if (absl::StrContains(labels, c)) model.labels_.push_back(c);
  }
  model.window_ = window;
  model.max_ngram_ = max_ngram;
  model.transition_.assign((labels.size() + 1) * labels.size(), 0.0);
  return model;
}

std::string TaggerModel::ToJson() const {
  nlohmann::ordered_json out;
  const int labels = num_labels();
  out["labels"] = labels_;
  out["window"] = window_;
  out["max_ngram"] = max_ngram_;
  nlohmann::ordered_json features = nlohmann::ordered_json::object();
  std::vector<int> order(feature_names_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [this](int a, int b) {
    return feature_names_[a] < feature_names_[b];
  });
  for (int f : order) {
    std::vector<double> row(emission_.begin() + f * labels,
                            emission_.begin() + (f + 1) * labels);
    if (std::all_of(row.begin(), row.end(), [](double w) { return w == 0; })) {
      continue;
    }
    features[feature_names_[f]] = row;
  }
  out["features"] = std::move(features);
  std::vector<std::vector<double>> transitions;
  for (int p = 0; p <= labels; ++p) {
    transitions.emplace_back(transition_.begin() + p * labels,
                             transition_.begin() + (p + 1) * labels);
  }
  out["transitions"] = transitions;
  return out.dump();
}

absl::StatusOr<TaggerModel> TaggerModel::FromJson(absl::string_view text) {
  const nlohmann::json in = nlohmann::json::parse(text, nullptr, false);
  if (in.is_discarded() || !in.is_object()) {
    return absl::InvalidArgumentError("tagger model is not a JSON object");
  }
  try {
    absl::StatusOr<TaggerModel> model =
        Zero(in.at("labels").get<std::string>(), in.at("window").get<int>(),
             in.at("max_ngram").get<int>());
    if (!model.ok()) return model.status();
    if (model->labels() != in.at("labels").get<std::string>()) {
      return absl::InvalidArgumentError(
          "tagger labels are not in canonical order");
    }
    const int labels = model->num_labels();
    for (const auto& [name, row] : in.at("features").items()) {
      const auto weights = row.get<std::vector<double>>();
      if (static_cast<int>(weights.size()) != labels) {
        return absl::InvalidArgumentError(
            absl::StrCat("feature \"", name, "\" has ", weights.size(),
                         " weights for ", labels, " labels"));
      }
      model->feature_ids_[name] = static_cast<int>(model->feature_names_.size());
      model->feature_names_.push_back(name);
      model->emission_.insert(model->emission_.end(), weights.begin(),
                              weights.end());
    }
    const auto transitions =
        in.at("transitions").get<std::vector<std::vector<double>>>();
    if (static_cast<int>(transitions.size()) != labels + 1) {
      return absl::InvalidArgumentError("transition table has wrong shape");
    }
    for (int p = 0; p <= labels; ++p) {
      if (static_cast<int>(transitions[p].size()) != labels) {
        return absl::InvalidArgumentError("transition table has wrong shape");
      }
      std::copy(transitions[p].begin(), transitions[p].end(),
                model->transition_.begin() + p * labels);
    }
    for (double w : model->emission_) {
      if (!std::isfinite(w)) return absl::InvalidArgumentError("non-finite weight");
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed tagger model: ", e.what()));
  }
}

absl::Status TaggerModel::Save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out << ToJson() << '\n';
  out.close();
  if (!out) return absl::DataLossError(absl::StrCat("failed writing ", path));
  return absl::OkStatus();
}

absl::StatusOr<TaggerModel> TaggerModel::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return FromJson(buffer.str());
}

double CharacterAccuracy(const TaggerModel& model,
                         absl::Span<const TaggedWord> examples) {
  long correct = 0;
  long total = 0;
  for (const TaggedWord& ex : examples) {
    const PaxobsLabeling predicted = model.Tag(ex.word);
    for (size_t i = 0; i < ex.labeling.size() && i < predicted.size(); ++i) {
      correct += predicted[i] == ex.labeling[i];
    }
    total += static_cast<long>(ex.labeling.size());
  }
  return total == 0 ? 0.0 : static_cast<double>(correct) / total;
}

Segmentation AllCharsSegmentation(absl::string_view word) {
  const int n = static_cast<int>(utf8::Length(word));
  std::vector<int> cuts;
  for (int i = 1; i < n; ++i) cuts.push_back(i);
  return *Segmentation::Create(std::move(cuts), n);
}

}  // namespace unblend
