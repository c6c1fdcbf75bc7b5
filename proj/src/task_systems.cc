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

#include "gntp/task_systems.h"

#include <algorithm>

#include "absl/strings/str_cat.h"

namespace gntp {

int Annotation::size() const {
  switch (kind) {
    case TaskKind::kTagging:
      return static_cast<int>(tags.size());
    case TaskKind::kParsing:
      return static_cast<int>(heads.size());
    case TaskKind::kCompression:
      return static_cast<int>(keep.size());
  }
  return 0;
}

namespace {

absl::Status CheckLength(const Input &input, const Annotation &a) {
  if (a.size() != input.size() ||
      (a.kind == TaskKind::kParsing && a.labels.size() != a.heads.size())) {
    return absl::InvalidArgumentError(
        absl::StrCat("annotation covers ", a.size(), " tokens but input has ",
                     input.size()));
  }
  return absl::OkStatus();
}

// Gold arc-standard oracle bookkeeping.
class ParseOracle {
 public:
  ParseOracle(const ArcStandardSystem &system, const Input &input,
              const std::vector<int> &heads, const std::vector<int> &labels)
      : system_(system), input_(input), heads_(heads), labels_(labels),
        missing_(input.size() + 1, 0) {
    for (int h : heads_) ++missing_[h];
  }

  // Next gold decision, or -1 if the oracle is stuck.
  int Next(const State &state) const {
    const int n = static_cast<int>(state.stack.size());
    if (n >= 2) {
      const int s0 = state.stack[n - 1];
      const int s1 = state.stack[n - 2];
      if (s1 != 0 && heads_[s1 - 1] == s0) {
        return ArcStandardSystem::LeftArcDecision(labels_[s1 - 1]);
      }
      if (heads_[s0 - 1] == s1 && missing_[s0] == 0) {
        const int d = ArcStandardSystem::RightArcDecision(labels_[s0 - 1]);
        if (system_.IsAllowed(state, d, input_)) return d;
      }
    }
    if (state.next < input_.size()) return ArcStandardSystem::ShiftDecision();
    return -1;
  }

  void Attached(int head) { --missing_[head]; }

 private:
  const ArcStandardSystem &system_;
  const Input &input_;
  const std::vector<int> &heads_;
  const std::vector<int> &labels_;
  // Gold dependents of each position not yet attached.
  std::vector<int> missing_;
};

absl::StatusOr<std::vector<int>> UnrollParse(const ArcStandardSystem &system,
                                             const Input &input,
                                             const Annotation &gold) {
  if (!IsProjective(gold.heads)) {
    return absl::FailedPreconditionError(
        "gold tree is not projective; arc-standard cannot derive it");
  }
  std::vector<int> labels;
  labels.reserve(gold.labels.size());
  const auto &label_set = system.labels();
  for (const std::string &l : gold.labels) {
    auto it = std::find(label_set.begin(), label_set.end(), l);
    if (it == label_set.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown dependency label '", l, "'"));
    }
    labels.push_back(static_cast<int>(it - label_set.begin()));
  }
  ParseOracle oracle(system, input, gold.heads, labels);
  absl::StatusOr<State> state = system.StartState(input);
  if (!state.ok()) return state.status();
  while (!system.IsFinal(*state, input)) {
    const int d = oracle.Next(*state);
    if (d < 0) {
      return absl::FailedPreconditionError(absl::StrCat(
          "arc-standard oracle stuck after ", state->num_decisions(),
          " decisions"));
    }
    if (ArcStandardSystem::Type(d) != ArcStandardSystem::kShift) {
      const int n = static_cast<int>(state->stack.size());
      oracle.Attached(ArcStandardSystem::Type(d) == ArcStandardSystem::kLeftArc
                          ? state->stack[n - 1]
                          : state->stack[n - 2]);
    }
    system.Advance(&*state, d, input);
  }
  return state->history;
}

}  // namespace

absl::Status ValidateAnnotation(const Input &input, const Annotation &gold) {
  if (absl::Status s = CheckLength(input, gold); !s.ok()) return s;
  if (gold.kind == TaskKind::kCompression) {
    for (int k : gold.keep) {
      if (k != 0 && k != 1) {
        return absl::InvalidArgumentError("keep bits must be 0 or 1");
      }
    }
  }
  if (gold.kind != TaskKind::kParsing) return absl::OkStatus();

  const int m = static_cast<int>(gold.heads.size());
  int roots = 0;
  for (int i = 0; i < m; ++i) {
    const int h = gold.heads[i];
    if (h < 0 || h > m || h == i + 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("token ", i + 1, " has invalid head ", h));
    }
    if (h == 0) ++roots;
  }
  if (roots != 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("tree must have exactly one root, found ", roots));
  }
  // Every token must reach ROOT without revisiting a node.
  for (int i = 1; i <= m; ++i) {
    int node = i;
    for (int steps = 0; node != 0; ++steps) {
      if (steps > m) {
        return absl::InvalidArgumentError(
            absl::StrCat("head assignment has a cycle through token ", i));
      }
      node = gold.heads[node - 1];
    }
  }
  return absl::OkStatus();
}

bool IsProjective(std::span<const int> heads) {
  const int m = static_cast<int>(heads.size());
  for (int i = 1; i <= m; ++i) {
    const int a_lo = std::min(i, heads[i - 1]);
    const int a_hi = std::max(i, heads[i - 1]);
    for (int j = 1; j <= m; ++j) {
      const int b_lo = std::min(j, heads[j - 1]);
      const int b_hi = std::max(j, heads[j - 1]);
      if (a_lo < b_lo && b_lo < a_hi && a_hi < b_hi) return false;
    }
  }
  return true;
}

absl::StatusOr<std::vector<int>> UnrollGold(const TransitionSystem &system,
                                            const Input &input,
                                            const Annotation &gold) {
  if (gold.kind != system.kind()) {
    return absl::InvalidArgumentError("annotation task does not match system");
  }
  if (absl::Status s = ValidateInput(input); !s.ok()) return s;
  if (absl::Status s = ValidateAnnotation(input, gold); !s.ok()) return s;

  std::vector<int> decisions;
  switch (system.kind()) {
    case TaskKind::kTagging:
      for (const std::string &tag : gold.tags) {
        absl::StatusOr<int> d = system.decisions().Find(absl::StrCat("TAG:",
                                                                      tag));
        if (!d.ok()) {
          return absl::InvalidArgumentError(
              absl::StrCat("unknown tag '", tag, "'"));
        }
        decisions.push_back(*d);
      }
      return decisions;
    case TaskKind::kParsing:
      return UnrollParse(static_cast<const ArcStandardSystem &>(system),
                         input, gold);
    case TaskKind::kCompression:
      for (int k : gold.keep) {
        decisions.push_back(k ? CompressionSystem::kKeep
                              : CompressionSystem::kDrop);
      }
      return decisions;
  }
  return absl::InternalError("unhandled task");
}

Annotation StructureFromState(const TransitionSystem &system,
                              const State &state) {
  Annotation out;
  out.kind = system.kind();
  switch (system.kind()) {
    case TaskKind::kTagging:
      for (int t : state.outputs) out.tags.push_back(system.labels()[t]);
      break;
    case TaskKind::kParsing:
      out.heads = state.heads;
      for (int l : state.labels) {
        out.labels.push_back(l < 0 ? std::string() : system.labels()[l]);
      }
      break;
    case TaskKind::kCompression:
      out.keep = state.outputs;
      break;
  }
  return out;
}

absl::StatusOr<Annotation> Reconstruct(const TransitionSystem &system,
                                       const Input &input,
                                       std::span<const int> decisions) {
  absl::StatusOr<State> state = system.Replay(input, decisions);
  if (!state.ok()) return state.status();
  if (!system.IsFinal(*state, input)) {
    return absl::InvalidArgumentError(
        absl::StrCat("decision sequence is incomplete: ", decisions.size(),
                     " of ", system.SequenceLength(input)));
  }
  return StructureFromState(system, *state);
}

void Metrics::Add(const Metrics &o) {
  sentences += o.sentences;
  exact_sentences += o.exact_sentences;
  tokens += o.tokens;
  correct_tags += o.correct_tags;
  scored_tokens += o.scored_tokens;
  correct_heads += o.correct_heads;
  correct_labeled += o.correct_labeled;
  predicted_kept += o.predicted_kept;
  gold_kept += o.gold_kept;
  correct_kept += o.correct_kept;
}

namespace {
double Ratio(int num, int den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / den;
}
}  // namespace

double Metrics::TokenAccuracy() const {
  return 100.0 * Ratio(correct_tags, tokens);
}
double Metrics::Uas() const { return 100.0 * Ratio(correct_heads,
                                                   scored_tokens); }
double Metrics::Las() const {
  return 100.0 * Ratio(correct_labeled, scored_tokens);
}
double Metrics::Precision() const {
  return Ratio(correct_kept, predicted_kept);
}
double Metrics::Recall() const { return Ratio(correct_kept, gold_kept); }
double Metrics::F1() const {
  const double p = Precision(), r = Recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}
double Metrics::SentenceAccuracy() const {
  return 100.0 * Ratio(exact_sentences, sentences);
}

double Metrics::Primary() const {
  switch (kind) {
    case TaskKind::kTagging:
      return TokenAccuracy();
    case TaskKind::kParsing:
      return Uas();
    case TaskKind::kCompression:
      return 100.0 * F1();
  }
  return 0.0;
}

absl::StatusOr<Metrics> Evaluate(const Input &input,
                                 const Annotation &predicted,
                                 const Annotation &gold,
                                 const EvalOptions &options) {
  if (predicted.kind != gold.kind) {
    return absl::InvalidArgumentError("prediction and gold tasks differ");
  }
  if (predicted.size() != gold.size() || gold.size() != input.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "length mismatch: predicted ", predicted.size(), ", gold ",
        gold.size(), ", input ", input.size()));
  }
  Metrics m;
  m.kind = gold.kind;
  m.sentences = 1;
  m.tokens = input.size();
  switch (gold.kind) {
    case TaskKind::kTagging:
      for (int i = 0; i < m.tokens; ++i) {
        m.correct_tags += predicted.tags[i] == gold.tags[i];
      }
      m.exact_sentences = m.correct_tags == m.tokens;
      break;
    case TaskKind::kParsing: {
      bool exact = true;
      for (int i = 0; i < m.tokens; ++i) {
        const bool head_ok = predicted.heads[i] == gold.heads[i];
        const bool label_ok = head_ok && predicted.labels[i] == gold.labels[i];
        exact = exact && label_ok;
        if (options.punctuation_tags.count(
                input.Column(i, options.tag_column)) > 0) {
          continue;
        }
        ++m.scored_tokens;
        m.correct_heads += head_ok;
        m.correct_labeled += label_ok;
      }
      m.exact_sentences = exact;
      break;
    }
    case TaskKind::kCompression:
      for (int i = 0; i < m.tokens; ++i) {
        m.predicted_kept += predicted.keep[i];
        m.gold_kept += gold.keep[i];
        m.correct_kept += predicted.keep[i] && gold.keep[i];
      }
      m.exact_sentences = predicted.keep == gold.keep;
      break;
  }
  return m;
}

}  // namespace gntp
