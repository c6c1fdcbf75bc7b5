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

#include "gntp/transition_system.h"

#include "absl/strings/str_cat.h"

namespace gntp {

absl::string_view TaskKindName(TaskKind kind) {
  switch (kind) {
    case TaskKind::kTagging:
      return "tagging";
    case TaskKind::kParsing:
      return "parsing";
    case TaskKind::kCompression:
      return "compression";
  }
  return "unknown";
}

absl::StatusOr<TaskKind> ParseTaskKind(absl::string_view name) {
  if (name == "tagging") return TaskKind::kTagging;
  if (name == "parsing") return TaskKind::kParsing;
  if (name == "compression") return TaskKind::kCompression;
  return absl::InvalidArgumentError(absl::StrCat("unknown task '", name,
                                                 "'"));
}

DecisionVocabulary::DecisionVocabulary(std::vector<std::string> names)
    : names_(std::move(names)) {
  for (int i = 0; i < size(); ++i) index_.emplace(names_[i], i);
}

absl::StatusOr<int> DecisionVocabulary::Find(absl::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) {
    return absl::NotFoundError(absl::StrCat("unknown decision '", name, "'"));
  }
  return it->second;
}

absl::StatusOr<State> TransitionSystem::StartState(const Input &input) const {
  if (input.empty()) {
    return absl::InvalidArgumentError("cannot start on an empty input");
  }
  State state;
  InitPayload(input, &state);
  return state;
}

std::vector<int> TransitionSystem::Allowed(const State &state,
                                           const Input &input) const {
  std::vector<int> allowed;
  if (IsFinal(state, input)) return allowed;
  for (int d = 0; d < num_decisions(); ++d) {
    if (IsAllowed(state, d, input)) allowed.push_back(d);
  }
  return allowed;
}

absl::StatusOr<State> TransitionSystem::Apply(const State &state,
                                              int decision,
                                              const Input &input) const {
  if (decision < 0 || decision >= num_decisions() ||
      !IsAllowed(state, decision, input)) {
    return absl::FailedPreconditionError(absl::StrCat(
        "decision ", decision,
        decision >= 0 && decision < num_decisions()
            ? absl::StrCat(" (", decisions_.Name(decision), ")")
            : std::string(),
        " is not allowed after ", state.num_decisions(), " decisions"));
  }
  State next = state;
  Advance(&next, decision, input);
  return next;
}

void TransitionSystem::Advance(State *state, int decision,
                               const Input &input) const {
  AdvancePayload(state, decision, input);
  state->history.push_back(decision);
}

absl::StatusOr<State> TransitionSystem::Replay(
    const Input &input, std::span<const int> decisions) const {
  absl::StatusOr<State> state = StartState(input);
  if (!state.ok()) return state.status();
  for (int d : decisions) {
    state = Apply(*state, d, input);
    if (!state.ok()) return state.status();
  }
  return state;
}

namespace {

std::vector<std::string> Prefixed(const std::vector<std::string> &names,
                                  absl::string_view prefix) {
  std::vector<std::string> out;
  out.reserve(names.size());
  for (const std::string &n : names) out.push_back(absl::StrCat(prefix, n));
  return out;
}

std::vector<std::string> ArcStandardNames(
    const std::vector<std::string> &labels) {
  std::vector<std::string> names = {"SHIFT"};
  for (const std::string &l : labels) {
    names.push_back(absl::StrCat("LEFT-ARC(", l, ")"));
    names.push_back(absl::StrCat("RIGHT-ARC(", l, ")"));
  }
  return names;
}

}  // namespace

TaggingSystem::TaggingSystem(std::vector<std::string> tags)
    : TransitionSystem(Prefixed(tags, "TAG:"), tags) {}

bool TaggingSystem::IsAllowed(const State &state, int decision,
                              const Input &input) const {
  return state.next < input.size() && decision >= 0 &&
         decision < num_decisions();
}

void TaggingSystem::InitPayload(const Input &, State *state) const {
  state->next = 0;
}

void TaggingSystem::AdvancePayload(State *state, int decision,
                                   const Input &) const {
  state->outputs.push_back(decision);
  ++state->next;
}

ArcStandardSystem::ArcStandardSystem(std::vector<std::string> labels)
    : TransitionSystem(ArcStandardNames(labels), labels) {}

bool ArcStandardSystem::IsAllowed(const State &state, int decision,
                                  const Input &input) const {
  if (decision < 0 || decision >= num_decisions()) return false;
  const int stack_size = static_cast<int>(state.stack.size());
  const bool buffer_empty = state.next >= input.size();
  switch (Type(decision)) {
    case kShift:
      return !buffer_empty;
    case kLeftArc:
      // ROOT (stack bottom) never becomes a dependent.
      return stack_size > 2;
    case kRightArc:
      // ROOT takes its single dependent only once the input is consumed.
      return stack_size > 2 || (stack_size == 2 && buffer_empty);
  }
  return false;
}

void ArcStandardSystem::InitPayload(const Input &input, State *state) const {
  state->next = 0;
  state->stack = {0};
  state->heads.assign(input.size(), -1);
  state->labels.assign(input.size(), -1);
}

void ArcStandardSystem::AdvancePayload(State *state, int decision,
                                       const Input &) const {
  switch (Type(decision)) {
    case kShift:
      state->stack.push_back(state->next + 1);
      ++state->next;
      break;
    case kLeftArc: {
      const int s0 = state->stack.back();
      state->stack.pop_back();
      const int s1 = state->stack.back();
      state->stack.back() = s0;
      state->heads[s1 - 1] = s0;
      state->labels[s1 - 1] = Label(decision);
      break;
    }
    case kRightArc: {
      const int s0 = state->stack.back();
      state->stack.pop_back();
      const int s1 = state->stack.back();
      state->heads[s0 - 1] = s1;
      state->labels[s0 - 1] = Label(decision);
      break;
    }
  }
}

CompressionSystem::CompressionSystem()
    : TransitionSystem({"KEEP", "DROP"}, {}) {}

bool CompressionSystem::IsAllowed(const State &state, int decision,
                                  const Input &input) const {
  return state.next < input.size() && (decision == kKeep || decision == kDrop);
}

void CompressionSystem::InitPayload(const Input &, State *state) const {
  state->next = 0;
}

void CompressionSystem::AdvancePayload(State *state, int decision,
                                       const Input &) const {
  state->outputs.push_back(decision == kKeep ? 1 : 0);
  ++state->next;
}

std::unique_ptr<TransitionSystem> MakeTransitionSystem(
    TaskKind kind, std::vector<std::string> labels) {
  switch (kind) {
    case TaskKind::kTagging:
      return std::make_unique<TaggingSystem>(std::move(labels));
    case TaskKind::kParsing:
      return std::make_unique<ArcStandardSystem>(std::move(labels));
    case TaskKind::kCompression:
      return std::make_unique<CompressionSystem>();
  }
  return nullptr;
}

}  // namespace gntp
