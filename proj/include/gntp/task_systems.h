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

#ifndef GNTP_TASK_SYSTEMS_H_
#define GNTP_TASK_SYSTEMS_H_

#include <set>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gntp/input.h"
#include "gntp/transition_system.h"

namespace gntp {

// Task output, used both for gold annotations and predictions. Only the
// fields of `kind` are populated:
//   tagging      tags[i]
//   parsing      heads[i] (1-based, 0 = ROOT) and labels[i]
//   compression  keep[i] (1 = keep, 0 = drop)
struct Annotation {
  TaskKind kind = TaskKind::kTagging;
  std::vector<std::string> tags;
  std::vector<int> heads;
  std::vector<std::string> labels;
  std::vector<int> keep;

  int size() const;
  bool operator==(const Annotation &other) const = default;
};

using GoldAnnotation = Annotation;
using PredictedStructure = Annotation;

// Checks lengths and, for parsing, that the heads form a single-rooted tree.
absl::Status ValidateAnnotation(const Input &input, const Annotation &gold);

// True iff the tree has no crossing arcs (including arcs from ROOT).
bool IsProjective(std::span<const int> heads);

// Gold decision sequence for `gold`. Parsing uses the static arc-standard
// oracle and fails with FailedPrecondition on non-projective trees.
absl::StatusOr<std::vector<int>> UnrollGold(const TransitionSystem &system,
                                            const Input &input,
                                            const Annotation &gold);

// Inverse of UnrollGold: replays a complete decision sequence and reads the
// structure off the final state.
absl::StatusOr<Annotation> Reconstruct(const TransitionSystem &system,
                                       const Input &input,
                                       std::span<const int> decisions);

// Reads the structure off a final state.
Annotation StructureFromState(const TransitionSystem &system,
                              const State &state);

struct EvalOptions {
  // Gold tags excluded from attachment scores. Empty disables the filter.
  std::set<std::string> punctuation_tags = {"``", "''", ",", ".", ":",
                                            "-LRB-", "-RRB-", "#", "$"};
  // Attribute column holding the tag used by the punctuation filter.
  std::string tag_column = "tag";
};

// Count-based metrics; accumulate across sentences with Add().
struct Metrics {
  TaskKind kind = TaskKind::kTagging;
  int sentences = 0;
  int exact_sentences = 0;
  int tokens = 0;
  int correct_tags = 0;
  int scored_tokens = 0;
  int correct_heads = 0;
  int correct_labeled = 0;
  int predicted_kept = 0;
  int gold_kept = 0;
  int correct_kept = 0;

  void Add(const Metrics &other);

  double TokenAccuracy() const;
  double Uas() const;
  double Las() const;
  double Precision() const;
  double Recall() const;
  double F1() const;
  double SentenceAccuracy() const;

  // Headline number used for model selection, in percent: token accuracy,
  // UAS or compression F1.
  double Primary() const;
};

absl::StatusOr<Metrics> Evaluate(const Input &input,
                                 const Annotation &predicted,
                                 const Annotation &gold,
                                 const EvalOptions &options = {});

}  // namespace gntp

#endif  // GNTP_TASK_SYSTEMS_H_
