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

#ifndef GNTP_TRANSITION_SYSTEM_H_
#define GNTP_TRANSITION_SYSTEM_H_

#include <memory>
#include <span>
#include <string>
#include "absl/strings/string_view.h"
#include <unordered_map>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gntp/input.h"

namespace gntp {

enum class TaskKind { kTagging = 0, kParsing = 1, kCompression = 2 };

absl::string_view TaskKindName(TaskKind kind);
absl::StatusOr<TaskKind> ParseTaskKind(absl::string_view name);

// A decision of a transition system: an index into the decision vocabulary
// plus its display name.
struct Decision {
  int id = 0;
  std::string name;

  bool operator==(const Decision &other) const = default;
};

// Ordered decision vocabulary. Ids are dense and stable for a trained model.
class DecisionVocabulary {
 public:
  DecisionVocabulary() = default;
  explicit DecisionVocabulary(std::vector<std::string> names);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string &Name(int id) const { return names_[id]; }
  Decision Get(int id) const { return {id, names_[id]}; }
  absl::StatusOr<int> Find(absl::string_view name) const;
  const std::vector<std::string> &names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
};

// Parser state. The history fully determines every other field: replaying
// `history` from the start state reproduces the payload exactly.
//
// Payload usage per task:
//   tagging:     `next` is the buffer index, `outputs` holds emitted tag ids.
//   parsing:     `stack` holds token positions (0 = ROOT, token i at i + 1),
//                `next` is the 0-based buffer front, `heads`/`labels` hold
//                the arcs built so far (-1 when unassigned).
//   compression: `next` is the cursor, `outputs` holds keep bits (1 = keep).
struct State {
  std::vector<int> history;
  int next = 0;
  std::vector<int> stack;
  std::vector<int> heads;
  std::vector<int> labels;
  std::vector<int> outputs;

  int num_decisions() const { return static_cast<int>(history.size()); }
  bool operator==(const State &other) const = default;
};

// Abstract transition system: start state, allowed decisions, transition
// function and the fixed decision count n(x).
class TransitionSystem {
 public:
  virtual ~TransitionSystem() = default;

  virtual TaskKind kind() const = 0;

  const DecisionVocabulary &decisions() const { return decisions_; }
  int num_decisions() const { return decisions_.size(); }

  // Tag set (tagging) or dependency label set (parsing); empty otherwise.
  const std::vector<std::string> &labels() const { return labels_; }

  // Number of decisions in every complete sequence for `input`.
  virtual int SequenceLength(const Input &input) const = 0;

  absl::StatusOr<State> StartState(const Input &input) const;

  // Allowed decision ids in ascending order; empty iff the state is final.
  std::vector<int> Allowed(const State &state, const Input &input) const;
  virtual bool IsAllowed(const State &state, int decision,
                         const Input &input) const = 0;

  // Checked transition: rejects decisions outside Allowed().
  absl::StatusOr<State> Apply(const State &state, int decision,
                              const Input &input) const;

  // Unchecked in-place transition. The decision must be allowed.
  void Advance(State *state, int decision, const Input &input) const;

  bool IsFinal(const State &state, const Input &input) const {
    return state.num_decisions() == SequenceLength(input);
  }

  // Replays a decision sequence from the start state.
  absl::StatusOr<State> Replay(const Input &input,
                               std::span<const int> decisions) const;

 protected:
  TransitionSystem(std::vector<std::string> decision_names,
                   std::vector<std::string> labels)
      : decisions_(std::move(decision_names)), labels_(std::move(labels)) {}

  virtual void InitPayload(const Input &input, State *state) const = 0;
  virtual void AdvancePayload(State *state, int decision,
                              const Input &input) const = 0;

 private:
  DecisionVocabulary decisions_;
  std::vector<std::string> labels_;
};

// Shift-and-tag: one TAG decision per token, left to right.
class TaggingSystem : public TransitionSystem {
 public:
  explicit TaggingSystem(std::vector<std::string> tags);

  TaskKind kind() const override { return TaskKind::kTagging; }
  int SequenceLength(const Input &input) const override {
    return input.size();
  }
  bool IsAllowed(const State &state, int decision,
                 const Input &input) const override;

 protected:
  void InitPayload(const Input &input, State *state) const override;
  void AdvancePayload(State *state, int decision,
                      const Input &input) const override;
};

// Arc-standard with an artificial ROOT on the stack. Decision ids:
//   0          SHIFT
//   1 + 2 * l  LEFT-ARC(l)   s1 <- s0, pops s1
//   2 + 2 * l  RIGHT-ARC(l)  s1 -> s0, pops s0
// ROOT never becomes a dependent and receives exactly one dependent, attached
// by the final RIGHT-ARC, so every complete parse takes 2m decisions.
class ArcStandardSystem : public TransitionSystem {
 public:
  enum ActionType { kShift = 0, kLeftArc = 1, kRightArc = 2 };

  explicit ArcStandardSystem(std::vector<std::string> labels);

  TaskKind kind() const override { return TaskKind::kParsing; }
  int SequenceLength(const Input &input) const override {
    return 2 * input.size();
  }
  bool IsAllowed(const State &state, int decision,
                 const Input &input) const override;

  static int ShiftDecision() { return 0; }
  static int LeftArcDecision(int label) { return 1 + 2 * label; }
  static int RightArcDecision(int label) { return 2 + 2 * label; }
  static ActionType Type(int decision) {
    if (decision == 0) return kShift;
    return decision % 2 == 1 ? kLeftArc : kRightArc;
  }
  static int Label(int decision) {
    return decision == 0 ? -1 : (decision - 1) / 2;
  }

 protected:
  void InitPayload(const Input &input, State *state) const override;
  void AdvancePayload(State *state, int decision,
                      const Input &input) const override;
};

// Keep/drop compression: one decision per token, left to right.
class CompressionSystem : public TransitionSystem {
 public:
  static constexpr int kKeep = 0;
  static constexpr int kDrop = 1;

  CompressionSystem();

  TaskKind kind() const override { return TaskKind::kCompression; }
  int SequenceLength(const Input &input) const override {
    return input.size();
  }
  bool IsAllowed(const State &state, int decision,
                 const Input &input) const override;

 protected:
  void InitPayload(const Input &input, State *state) const override;
  void AdvancePayload(State *state, int decision,
                      const Input &input) const override;
};

// Builds the system for `kind`. `labels` are the tag set for tagging and the
// dependency label set for parsing; compression ignores them.
std::unique_ptr<TransitionSystem> MakeTransitionSystem(
    TaskKind kind, std::vector<std::string> labels);

}  // namespace gntp

#endif  // GNTP_TRANSITION_SYSTEM_H_
