// Copyright 2026 The GNTP Authors.
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

#ifndef GNTP_FEATURES_H_
#define GNTP_FEATURES_H_

#include <span>
#include <string>
#include "absl/strings/string_view.h"
#include <unordered_map>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gntp/input.h"
#include "gntp/transition_system.h"

namespace gntp {

// Lookahead value meaning "the whole sentence is visible".
inline constexpr int kUnlimitedLookahead = -1;

enum class FeatureSource {
  kToken,    // column value of tokens at offsets from the focus token
  kChars,    // bag of character n-grams of tokens at offsets
  kHistory,  // previous decisions, 1 = most recent
  kParser,   // stack/buffer locators with child navigation
};

// Stack/buffer locator for parser features, e.g. "s0", "b1", "s0.l1",
// "s1.r1.r1". Navigation steps: l<k> is the k-th leftmost child to the left
// of the node, r<k> the k-th rightmost child to its right.
struct Locator {
  enum Base { kStack, kBuffer };
  Base base = kStack;
  int index = 0;
  // Negative entries -k select l<k>, positive entries +k select r<k>.
  std::vector<int> path;

  static absl::StatusOr<Locator> Parse(absl::string_view text);
  std::string ToString() const;
  bool operator==(const Locator &other) const = default;
};

// One embedding group: every slot of the group shares a vocabulary and an
// embedding matrix. Multi-valued slots (character n-grams) are averaged.
struct FeatureGroup {
  std::string name;
  FeatureSource source = FeatureSource::kToken;
  std::string column = "form";
  std::vector<int> offsets;
  std::vector<Locator> locators;
  int max_ngram = 3;
  bool boundary = true;
  int dim = 8;
  std::string vocab = "auto";
  int lookahead = kUnlimitedLookahead;

  int arity() const {
    return static_cast<int>(source == FeatureSource::kParser ? locators.size()
                                                             : offsets.size());
  }
  bool operator==(const FeatureGroup &other) const = default;
};

// Declarative feature template. Text form, one group per line:
//
//   group name=words source=token column=form at=-3,-2,-1,0,1,2,3 dim=32
//   group name=chars source=chars at=0 max_ngram=3 boundary=true dim=16
//   group name=history source=history at=1,2,3,4 dim=8
//   group name=stack source=parser column=tag at=s0,s1,b0,s0.l1 dim=16
//
// Optional keys: vocab=auto|<file>, lookahead=<k>|all. Blank lines and lines
// starting with '#' are ignored.
struct FeatureTemplate {
  std::vector<FeatureGroup> groups;

  static absl::StatusOr<FeatureTemplate> Parse(absl::string_view text);
  static absl::StatusOr<FeatureGroup> ParseGroupLine(absl::string_view line);
  std::string ToString() const;

  // Overrides the lookahead of every group.
  void SetLookahead(int lookahead);

  bool operator==(const FeatureTemplate &other) const = default;
};

// String vocabulary with reserved padding and unknown ids.
class Vocabulary {
 public:
  static constexpr int kPadding = 0;
  static constexpr int kUnknown = 1;
  static constexpr absl::string_view kPaddingValue = "<PAD>";
  static constexpr absl::string_view kUnknownValue = "<UNK>";
  static constexpr absl::string_view kRootValue = "<ROOT>";

  Vocabulary();
  // `values` must start with the padding and unknown entries.
  static absl::StatusOr<Vocabulary> FromValues(std::vector<std::string> values);

  int Add(absl::string_view value);
  int Lookup(absl::string_view value) const;
  int size() const { return static_cast<int>(values_.size()); }
  const std::vector<std::string> &values() const { return values_; }

  bool operator==(const Vocabulary &other) const {
    return values_ == other.values_;
  }

 private:
  std::vector<std::string> values_;
  std::unordered_map<std::string, int> index_;
};

// Flattened feature ids: slot s covers ids[slot_begin[s] .. slot_begin[s+1]).
// Slots are ordered group by group; every slot holds at least one id.
struct FeatureVector {
  std::vector<int> ids;
  std::vector<int> slot_begin;

  int num_slots() const { return static_cast<int>(slot_begin.size()) - 1; }
  std::span<const int> Slot(int s) const {
    return {ids.data() + slot_begin[s],
            static_cast<size_t>(slot_begin[s + 1] - slot_begin[s])};
  }
  bool operator==(const FeatureVector &other) const = default;
};

// Per-token ids for every group that reads token columns, computed once per
// sentence. Position 0 of parser groups is ROOT; tokens follow at i + 1.
struct EncodedInput {
  int num_tokens = 0;
  // [group] -> CSR over positions.
  std::vector<std::vector<int>> ids;
  std::vector<std::vector<int>> begin;

  std::span<const int> At(int group, int position) const {
    const auto &b = begin[group];
    return {ids[group].data() + b[position],
            static_cast<size_t>(b[position + 1] - b[position])};
  }
};

// Character n-grams of `word` up to length `max_n`. With `boundary`, the word
// is framed as "^word$" and n-grams touching a marker are included, except
// the bare markers themselves.
std::vector<std::string> CharacterNgrams(absl::string_view word, int max_n,
                                         bool boundary);

class FeatureExtractor {
 public:
  FeatureExtractor() = default;

  // Builds vocabularies from `corpus` ("auto" groups) or from vocabulary
  // files.
  static absl::StatusOr<FeatureExtractor> Build(
      FeatureTemplate feature_template, const TransitionSystem &system,
      std::span<const Input> corpus);

  // Restores an extractor from stored vocabularies.
  static absl::StatusOr<FeatureExtractor> FromVocabularies(
      FeatureTemplate feature_template, const TransitionSystem &system,
      std::vector<Vocabulary> vocabularies);

  EncodedInput Encode(const Input &input) const;

  // Extracts features for a non-final state. Tokens beyond the focus token
  // plus the group lookahead read as padding.
  FeatureVector Extract(const State &state, const EncodedInput &input) const;

  const FeatureTemplate &feature_template() const { return template_; }
  const std::vector<Vocabulary> &vocabularies() const { return vocabs_; }
  int num_groups() const { return static_cast<int>(template_.groups.size()); }

 private:
  absl::Status Validate(const TransitionSystem &system) const;
  int Locate(const Locator &locator, const State &state, int num_tokens,
             int lookahead) const;

  FeatureTemplate template_;
  std::vector<Vocabulary> vocabs_;
  // Vocabulary id of each decision (history groups) and of each dependency
  // label (parser label groups), per group.
  std::vector<std::vector<int>> decision_ids_;
  std::vector<std::vector<int>> label_ids_;
};

}  // namespace gntp

#endif  // GNTP_FEATURES_H_
