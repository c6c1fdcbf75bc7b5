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

#include <cmath>
#include <set>

#include "absl/strings/str_join.h"
#include "gntp/task_systems.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace gntp {
namespace {

using testing::RandomInput;
using testing::RandomSequence;

std::vector<std::unique_ptr<TransitionSystem>> AllSystems() {
  std::vector<std::unique_ptr<TransitionSystem>> out;
  out.push_back(MakeTransitionSystem(TaskKind::kTagging, {"N", "V", "D"}));
  out.push_back(MakeTransitionSystem(TaskKind::kParsing, {"nsubj", "obj"}));
  out.push_back(MakeTransitionSystem(TaskKind::kCompression, {}));
  return out;
}

TEST(TransitionSystemTest, TaskKindNamesRoundTrip) {
  for (TaskKind k :
       {TaskKind::kTagging, TaskKind::kParsing, TaskKind::kCompression}) {
    EXPECT_EQ(*ParseTaskKind(TaskKindName(k)), k);
  }
  EXPECT_FALSE(ParseTaskKind("chunking").ok());
}

TEST(TransitionSystemTest, ArcStandardDecisionIds) {
  ArcStandardSystem system({"a", "b"});
  ASSERT_EQ(system.num_decisions(), 5);
  EXPECT_EQ(ArcStandardSystem::ShiftDecision(), 0);
  EXPECT_EQ(ArcStandardSystem::LeftArcDecision(1), 3);
  EXPECT_EQ(ArcStandardSystem::RightArcDecision(1), 4);
  for (int d = 1; d < 5; ++d) {
    const int label = ArcStandardSystem::Label(d);
    const int back = ArcStandardSystem::Type(d) == ArcStandardSystem::kLeftArc
                         ? ArcStandardSystem::LeftArcDecision(label)
                         : ArcStandardSystem::RightArcDecision(label);
    EXPECT_EQ(back, d);
  }
}

TEST(TransitionSystemTest, StartStateRejectsEmptyInput) {
  for (const auto &system : AllSystems()) {
    EXPECT_FALSE(system->StartState(Input{}).ok());
  }
}

// Property: random walks over allowed decisions always end after exactly
// n(x) decisions, Allowed() is empty only at the end, and Replay reproduces
// the final state.
TEST(TransitionSystemTest, RandomWalksHaveFixedLength) {
  std::mt19937_64 rng(7);
  for (const auto &system : AllSystems()) {
    for (int trial = 0; trial < 200; ++trial) {
      const Input input = RandomInput(rng, testing::UniformInt(rng, 1, 9));
      State state = *system->StartState(input);
      int steps = 0;
      while (true) {
        const std::vector<int> allowed = system->Allowed(state, input);
        if (allowed.empty()) break;
        EXPECT_TRUE(std::is_sorted(allowed.begin(), allowed.end()));
        system->Advance(&state, allowed[rng() % allowed.size()], input);
        ++steps;
      }
      const int expected = system->kind() == TaskKind::kParsing
                               ? 2 * input.size()
                               : input.size();
      EXPECT_EQ(steps, expected);
      EXPECT_EQ(system->SequenceLength(input), expected);
      EXPECT_TRUE(system->IsFinal(state, input));
      absl::StatusOr<State> replayed = system->Replay(input, state.history);
      ASSERT_TRUE(replayed.ok());
      EXPECT_EQ(*replayed, state);
    }
  }
}

TEST(TransitionSystemTest, ApplyRejectsDisallowedDecisions) {
  ArcStandardSystem system({"x"});
  const Input input = MakeInput({"a", "b"});
  State start = *system.StartState(input);
  EXPECT_FALSE(system.Apply(start, ArcStandardSystem::LeftArcDecision(0),
                            input).ok());
  EXPECT_FALSE(system.Apply(start, 17, input).ok());
  EXPECT_TRUE(system.Apply(start, ArcStandardSystem::ShiftDecision(), input)
                  .ok());
  EXPECT_FALSE(system.Replay(input, std::vector<int>{1}).ok());
}

// Property: every complete arc-standard sequence yields a projective tree
// with exactly one ROOT dependent.
TEST(TransitionSystemTest, ArcStandardBuildsProjectiveTrees) {
  std::mt19937_64 rng(11);
  ArcStandardSystem system({"l0", "l1", "l2"});
  for (int trial = 0; trial < 500; ++trial) {
    const Input input = RandomInput(rng, testing::UniformInt(rng, 1, 10));
    const std::vector<int> seq = RandomSequence(system, input, rng);
    absl::StatusOr<Annotation> tree = Reconstruct(system, input, seq);
    ASSERT_TRUE(tree.ok());
    EXPECT_TRUE(testing::BruteForceTree(tree->heads));
    EXPECT_TRUE(testing::BruteForceProjective(tree->heads));
  }
}

std::string Key(const Annotation &a) {
  return absl::StrCat(absl::StrJoin(a.tags, ","), "|",
                      absl::StrJoin(a.heads, ","), "|",
                      absl::StrJoin(a.labels, ","), "|",
                      absl::StrJoin(a.keep, ","));
}

// Oracle: the number of complete arc-standard sequences equals the number of
// single-rooted projective trees times label assignments, counted by brute
// force over all head vectors. Also checks the decision/state bijection:
// distinct sequences end in distinct structures.
int CountSequences(const TransitionSystem &system, const Input &input,
                   std::set<std::string> *structures) {
  int count = 0;
  std::vector<State> stack = {*system.StartState(input)};
  while (!stack.empty()) {
    State s = std::move(stack.back());
    stack.pop_back();
    if (system.IsFinal(s, input)) {
      ++count;
      structures->insert(Key(StructureFromState(system, s)));
      continue;
    }
    for (int d : system.Allowed(s, input)) {
      State next = s;
      system.Advance(&next, d, input);
      stack.push_back(std::move(next));
    }
  }
  return count;
}

int BruteForceTreeCount(int m) {
  int count = 0;
  std::vector<int> heads(m, 0);
  while (true) {
    if (testing::BruteForceTree(heads) &&
        testing::BruteForceProjective(heads)) {
      ++count;
    }
    int i = 0;
    while (i < m && ++heads[i] > m) heads[i++] = 0;
    if (i == m) break;
  }
  return count;
}

// Arc-standard is spuriously ambiguous, so several sequences may build the
// same tree; every labeled projective tree is still reachable.
TEST(TransitionSystemTest, ArcStandardReachesEveryProjectiveTree) {
  for (int labels = 1; labels <= 2; ++labels) {
    ArcStandardSystem system(testing::Names("l", labels));
    for (int m = 1; m <= 5; ++m) {
      const Input input = MakeInput(testing::Names("w", m));
      std::set<std::string> structures;
      const int sequences = CountSequences(system, input, &structures);
      const int expected =
          BruteForceTreeCount(m) * static_cast<int>(std::pow(labels, m));
      EXPECT_EQ(static_cast<int>(structures.size()), expected)
          << "m=" << m << " labels=" << labels;
      EXPECT_GE(sequences, expected);
    }
  }
}

TEST(TransitionSystemTest, TaggingAndCompressionCounts) {
  TaggingSystem tagging({"A", "B", "C"});
  CompressionSystem compression;
  const Input input = MakeInput({"x", "y", "z", "w"});
  std::set<std::string> structures;
  EXPECT_EQ(CountSequences(tagging, input, &structures), 81);
  EXPECT_EQ(structures.size(), 81u);
  structures.clear();
  EXPECT_EQ(CountSequences(compression, input, &structures), 16);
  EXPECT_EQ(structures.size(), 16u);
}

TEST(TransitionSystemTest, RootReceivesOneDependent) {
  ArcStandardSystem system({"x"});
  const Input input = MakeInput({"a", "b"});
  // SHIFT SHIFT: stack ROOT a b. RIGHT-ARC attaching b to a leaves ROOT a, so
  // the final RIGHT-ARC is the only way to attach anything to ROOT.
  State s = *system.Replay(input, std::vector<int>{0, 0});
  const std::vector<int> allowed = system.Allowed(s, input);
  EXPECT_EQ(allowed, (std::vector<int>{1, 2}));
  State t = *system.Replay(input, std::vector<int>{0});
  EXPECT_FALSE(system.IsAllowed(t, ArcStandardSystem::RightArcDecision(0),
                                input));
}

}  // namespace
}  // namespace gntp
