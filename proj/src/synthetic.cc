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

#include "gntp/synthetic.h"

#include <random>

#include "absl/strings/str_cat.h"

namespace gntp {

namespace {

// Portable draw in [0, n).
int Below(std::mt19937_64 &rng, int n) {
  const uint64_t bound = static_cast<uint64_t>(n);
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return static_cast<int>(r % bound);
}

int Between(std::mt19937_64 &rng, int lo, int hi) {
  return lo + Below(rng, hi - lo + 1);
}

constexpr int kNumTags = 8;
constexpr int kWordsPerTag = 6;

std::string PoolWord(int tag, int index) {
  static const char *kStems[kNumTags] = {"lor", "mip", "dak", "sen",
                                         "vut", "gre", "fol", "ba"};
  return absl::StrCat(kStems[tag], index);
}

std::string PoolTag(int tag) { return absl::StrCat("T", tag); }

Corpus SeparableTagging(const SynthSpec &spec) {
  std::mt19937_64 rng(spec.seed);
  Corpus corpus;
  corpus.task = TaskKind::kTagging;
  for (int s = 0; s < spec.size; ++s) {
    Sentence sentence;
    sentence.gold.kind = TaskKind::kTagging;
    const int length = Between(rng, 3, 10);
    for (int i = 0; i < length; ++i) {
      const int tag = Below(rng, kNumTags);
      const int word = Below(rng, kWordsPerTag);
      sentence.input.tokens.push_back({PoolWord(tag, word), {}});
      sentence.gold.tags.push_back(PoolTag(tag));
    }
    corpus.sentences.push_back(std::move(sentence));
  }
  return corpus;
}

Corpus Lookahead(const SynthSpec &spec) {
  Corpus corpus;
  corpus.task = TaskKind::kTagging;
  for (int p = spec.offset; p < spec.offset + spec.size; ++p) {
    const std::string suffix = p == 0 ? "" : absl::StrCat(p);
    for (bool second : {false, true}) {
      Sentence sentence;
      sentence.gold.kind = TaskKind::kTagging;
      auto add = [&](const char *word, const char *tag) {
        sentence.input.tokens.push_back({absl::StrCat(word, suffix), {}});
        sentence.gold.tags.push_back(tag);
      };
      add("a", "A");
      for (int i = 0; i <= spec.k; ++i) add("b", second ? "D" : "B");
      if (second) {
        add("e", "E");
      } else {
        add("c", "C");
      }
      corpus.sentences.push_back(std::move(sentence));
    }
  }
  return corpus;
}

// Attaches every token of [lo, hi) below `head` as a uniformly bracketed
// projective subtree.
void Bracket(std::mt19937_64 &rng, int lo, int hi, int head,
             std::vector<int> &heads) {
  if (lo >= hi) return;
  const int root = Between(rng, lo, hi - 1);
  heads[root] = head;
  Bracket(rng, lo, root, root + 1, heads);
  Bracket(rng, root + 1, hi, root + 1, heads);
}

Corpus ProjectiveTrees(const SynthSpec &spec) {
  std::mt19937_64 rng(spec.seed);
  Corpus corpus;
  corpus.task = TaskKind::kParsing;
  for (int s = 0; s < spec.size; ++s) {
    Sentence sentence;
    sentence.gold.kind = TaskKind::kParsing;
    const int length = Between(rng, 2, 10);
    std::vector<int> heads(length, 0);
    Bracket(rng, 0, length, 0, heads);
    for (int i = 0; i < length; ++i) {
      const int tag = Below(rng, kNumTags);
      Token token{PoolWord(tag, Below(rng, kWordsPerTag)), {}};
      token.attributes["tag"] = PoolTag(tag);
      sentence.input.tokens.push_back(std::move(token));
    }
    for (int i = 0; i < length; ++i) {
      std::string label = "root";
      if (heads[i] != 0) {
        label = absl::StrCat(heads[i] - 1 < i ? "r" : "l",
                             sentence.input.tokens[i].attributes["tag"]);
      }
      sentence.gold.labels.push_back(std::move(label));
    }
    sentence.gold.heads = std::move(heads);
    corpus.sentences.push_back(std::move(sentence));
  }
  return corpus;
}

Corpus KeepDrop(const SynthSpec &spec) {
  std::mt19937_64 rng(spec.seed);
  Corpus corpus;
  corpus.task = TaskKind::kCompression;
  for (int s = 0; s < spec.size; ++s) {
    Sentence sentence;
    sentence.gold.kind = TaskKind::kCompression;
    const int length = Between(rng, 3, 12);
    for (int i = 0; i < length; ++i) {
      const int tag = Below(rng, kNumTags);
      sentence.input.tokens.push_back(
          {PoolWord(tag, Below(rng, kWordsPerTag)), {}});
      sentence.gold.keep.push_back(tag % 2 == 0 ? 1 : 0);
    }
    corpus.sentences.push_back(std::move(sentence));
  }
  return corpus;
}

}  // namespace

std::vector<std::string> SyntheticGenerators() {
  return {"separable-tagging", "lookahead", "projective-trees", "keep-drop"};
}

TaskKind SyntheticTask(const std::string &generator) {
  if (generator == "projective-trees") return TaskKind::kParsing;
  if (generator == "keep-drop") return TaskKind::kCompression;
  return TaskKind::kTagging;
}

absl::StatusOr<Corpus> GenerateSynthetic(const SynthSpec &spec) {
  if (spec.size < 0) return absl::InvalidArgumentError("size must be >= 0");
  if (spec.generator == "separable-tagging") return SeparableTagging(spec);
  if (spec.generator == "lookahead") {
    if (spec.k < 0 || spec.offset < 0) {
      return absl::InvalidArgumentError("lookahead needs k >= 0, offset >= 0");
    }
    return Lookahead(spec);
  }
  if (spec.generator == "projective-trees") return ProjectiveTrees(spec);
  if (spec.generator == "keep-drop") return KeepDrop(spec);
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown generator '", spec.generator,
      "' (expected separable-tagging, lookahead, projective-trees or "
      "keep-drop)"));
}

}  // namespace gntp
