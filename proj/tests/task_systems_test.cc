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

#include "gtest/gtest.h"
#include "test_util.h"

namespace gntp {
namespace {

Annotation Tags(std::vector<std::string> tags) {
  Annotation a;
  a.kind = TaskKind::kTagging;
  a.tags = std::move(tags);
  return a;
}

Annotation Tree(std::vector<int> heads, std::vector<std::string> labels) {
  Annotation a;
  a.kind = TaskKind::kParsing;
  a.heads = std::move(heads);
  a.labels = std::move(labels);
  return a;
}

Annotation Mask(std::vector<int> keep) {
  Annotation a;
  a.kind = TaskKind::kCompression;
  a.keep = std::move(keep);
  return a;
}

TEST(UnrollGoldTest, TaggingTranscribesTags) {
  TaggingSystem system({"A", "B", "C"});
  const Input input = MakeInput({"a", "b", "c"});
  absl::StatusOr<std::vector<int>> seq =
      UnrollGold(system, input, Tags({"A", "B", "C"}));
  ASSERT_TRUE(seq.ok());
  EXPECT_EQ(*seq, (std::vector<int>{0, 1, 2}));
}

TEST(UnrollGoldTest, ParsingHandTrace) {
  ArcStandardSystem system({"dep"});
  const Input input = MakeInput({"w1", "w2"});
  absl::StatusOr<std::vector<int>> seq =
      UnrollGold(system, input, Tree({0, 1}, {"dep", "dep"}));
  ASSERT_TRUE(seq.ok());
  const int right = ArcStandardSystem::RightArcDecision(0);
  EXPECT_EQ(*seq, (std::vector<int>{0, 0, right, right}));
  absl::StatusOr<Annotation> back = Reconstruct(system, input, *seq);
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(back->heads, (std::vector<int>{0, 1}));
}

TEST(UnrollGoldTest, CompressionTranscribesMask) {
  CompressionSystem system;
  const Input input = MakeInput({"a", "b", "c"});
  absl::StatusOr<std::vector<int>> seq =
      UnrollGold(system, input, Mask({1, 0, 1}));
  ASSERT_TRUE(seq.ok());
  EXPECT_EQ(*seq, (std::vector<int>{CompressionSystem::kKeep,
                                    CompressionSystem::kDrop,
                                    CompressionSystem::kKeep}));
  absl::StatusOr<Annotation> back = Reconstruct(
      system, MakeInput({"a", "b"}),
      std::vector<int>{CompressionSystem::kKeep, CompressionSystem::kDrop});
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(back->keep, (std::vector<int>{1, 0}));
}

TEST(UnrollGoldTest, RejectsNonProjectiveTrees) {
  ArcStandardSystem system({"dep"});
  const Input input = MakeInput({"a", "b", "c", "d"});
  // Arcs 1->3 and 2->4 cross.
  const Annotation tree = Tree({0, 4, 1, 1}, {"dep", "dep", "dep", "dep"});
  ASSERT_TRUE(ValidateAnnotation(input, tree).ok());
  EXPECT_FALSE(IsProjective(tree.heads));
  absl::StatusOr<std::vector<int>> seq = UnrollGold(system, input, tree);
  EXPECT_EQ(seq.status().code(), absl::StatusCode::kFailedPrecondition);
}

TEST(UnrollGoldTest, RejectsLengthMismatchAndBadTrees) {
  TaggingSystem tagging({"A"});
  EXPECT_FALSE(UnrollGold(tagging, MakeInput({"a", "b"}), Tags({"A"})).ok());
  EXPECT_FALSE(UnrollGold(tagging, MakeInput({"a"}), Tags({"Z"})).ok());
  ArcStandardSystem parsing({"dep"});
  const Input input = MakeInput({"a", "b"});
  EXPECT_FALSE(ValidateAnnotation(input, Tree({0, 0}, {"dep", "dep"})).ok());
  EXPECT_FALSE(ValidateAnnotation(input, Tree({2, 1}, {"dep", "dep"})).ok());
  EXPECT_FALSE(Reconstruct(parsing, input, std::vector<int>{0, 0}).ok());
}

// Independent static oracle: LEFT when s1 is s0's dependent, RIGHT when s0 is
// s1's dependent and has collected all its own dependents, SHIFT otherwise.
std::vector<int> ReferenceOracle(const ArcStandardSystem &system,
                                 const Annotation &tree) {
  const int m = static_cast<int>(tree.heads.size());
  std::vector<int> pending(m + 1, 0);
  for (int h : tree.heads) ++pending[h];
  std::vector<int> stack = {0};
  int next = 1;
  std::vector<int> out;
  auto label = [&](int token) {
    const auto &names = system.labels();
    return static_cast<int>(
        std::find(names.begin(), names.end(), tree.labels[token - 1]) -
        names.begin());
  };
  while (static_cast<int>(out.size()) < 2 * m) {
    const int n = static_cast<int>(stack.size());
    if (n >= 2) {
      const int s0 = stack[n - 1], s1 = stack[n - 2];
      if (s1 != 0 && tree.heads[s1 - 1] == s0) {
        out.push_back(ArcStandardSystem::LeftArcDecision(label(s1)));
        --pending[s0];
        stack.erase(stack.end() - 2);
        continue;
      }
      if (tree.heads[s0 - 1] == s1 && pending[s0] == 0) {
        out.push_back(ArcStandardSystem::RightArcDecision(label(s0)));
        --pending[s1];
        stack.pop_back();
        continue;
      }
    }
    out.push_back(ArcStandardSystem::ShiftDecision());
    stack.push_back(next++);
  }
  return out;
}

// Property: oracle and reconstruction are inverse on random projective trees,
// the oracle matches the reference static oracle, every decision is allowed
// and the length is 2m.
TEST(UnrollGoldTest, ParsingRoundTripProperty) {
  std::mt19937_64 rng(3);
  ArcStandardSystem system({"a", "b", "c"});
  for (int trial = 0; trial < 500; ++trial) {
    const int m = testing::UniformInt(rng, 1, 12);
    const Input input = testing::RandomInput(rng, m);
    Annotation tree = Tree(testing::RandomProjectiveTree(rng, m), {});
    for (int i = 0; i < m; ++i) tree.labels.push_back(system.labels()[rng() % 3]);
    absl::StatusOr<std::vector<int>> seq = UnrollGold(system, input, tree);
    ASSERT_TRUE(seq.ok()) << seq.status();
    EXPECT_EQ(static_cast<int>(seq->size()), 2 * m);
    EXPECT_EQ(*seq, ReferenceOracle(system, tree));
    State state = *system.StartState(input);
    for (int d : *seq) {
      ASSERT_TRUE(system.IsAllowed(state, d, input));
      system.Advance(&state, d, input);
    }
    absl::StatusOr<Annotation> back = Reconstruct(system, input, *seq);
    ASSERT_TRUE(back.ok());
    EXPECT_EQ(*back, tree);
  }
}

TEST(UnrollGoldTest, TaggingAndCompressionRoundTripProperty) {
  std::mt19937_64 rng(5);
  TaggingSystem tagging({"X", "Y", "Z", "W"});
  CompressionSystem compression;
  for (int trial = 0; trial < 300; ++trial) {
    const int m = testing::UniformInt(rng, 1, 15);
    const Input input = testing::RandomInput(rng, m);
    Annotation tags = Tags({});
    Annotation mask = Mask({});
    for (int i = 0; i < m; ++i) {
      tags.tags.push_back(tagging.labels()[rng() % 4]);
      mask.keep.push_back(static_cast<int>(rng() % 2));
    }
    for (auto [system, gold] :
         {std::pair<const TransitionSystem *, Annotation *>{&tagging, &tags},
          {&compression, &mask}}) {
      absl::StatusOr<std::vector<int>> seq = UnrollGold(*system, input, *gold);
      ASSERT_TRUE(seq.ok());
      EXPECT_EQ(static_cast<int>(seq->size()), m);
      absl::StatusOr<Annotation> back = Reconstruct(*system, input, *seq);
      ASSERT_TRUE(back.ok());
      EXPECT_EQ(*back, *gold);
    }
  }
}

TEST(IsProjectiveTest, AgreesWithBruteForce) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 2000; ++trial) {
    const int m = testing::UniformInt(rng, 1, 7);
    std::vector<int> heads(m);
    for (int &h : heads) h = testing::UniformInt(rng, 0, m);
    if (!testing::BruteForceTree(heads)) continue;
    EXPECT_EQ(IsProjective(heads), testing::BruteForceProjective(heads));
  }
}

TEST(EvaluateTest, IdenticalParseScoresFull) {
  const Input input = MakeInput({"a", "b", "c"});
  const Annotation tree = Tree({2, 0, 2}, {"x", "root", "y"});
  absl::StatusOr<Metrics> m = Evaluate(input, tree, tree);
  ASSERT_TRUE(m.ok());
  EXPECT_DOUBLE_EQ(m->Uas(), 100.0);
  EXPECT_DOUBLE_EQ(m->Las(), 100.0);
  EXPECT_DOUBLE_EQ(m->SentenceAccuracy(), 100.0);
}

TEST(EvaluateTest, OneWrongLabelGivesLas75) {
  const Input input = MakeInput({"a", "b", "c", "d"});
  const Annotation gold = Tree({2, 0, 2, 3}, {"x", "root", "y", "z"});
  const Annotation pred = Tree({2, 0, 2, 3}, {"x", "root", "y", "x"});
  absl::StatusOr<Metrics> m = Evaluate(input, pred, gold);
  ASSERT_TRUE(m.ok());
  EXPECT_DOUBLE_EQ(m->Uas(), 100.0);
  EXPECT_DOUBLE_EQ(m->Las(), 75.0);
}

TEST(EvaluateTest, PunctuationIsExcludedFromAttachment) {
  Input input = MakeInput({"a", "b", "."});
  input.tokens[0].attributes["tag"] = "NN";
  input.tokens[1].attributes["tag"] = "VB";
  input.tokens[2].attributes["tag"] = ".";
  const Annotation gold = Tree({2, 0, 2}, {"x", "root", "p"});
  const Annotation pred = Tree({2, 0, 1}, {"x", "root", "p"});
  absl::StatusOr<Metrics> m = Evaluate(input, pred, gold);
  ASSERT_TRUE(m.ok());
  EXPECT_DOUBLE_EQ(m->Uas(), 100.0);
  EvalOptions none;
  none.punctuation_tags.clear();
  m = Evaluate(input, pred, gold, none);
  ASSERT_TRUE(m.ok());
  EXPECT_NEAR(m->Uas(), 200.0 / 3.0, 1e-12);
}

TEST(EvaluateTest, CompressionF1) {
  const Input input = MakeInput({"a", "b", "c"});
  absl::StatusOr<Metrics> m =
      Evaluate(input, Mask({1, 0, 0}), Mask({1, 0, 1}));
  ASSERT_TRUE(m.ok());
  EXPECT_DOUBLE_EQ(m->Precision(), 1.0);
  EXPECT_DOUBLE_EQ(m->Recall(), 0.5);
  EXPECT_NEAR(m->F1(), 2.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(m->SentenceAccuracy(), 0.0);
}

TEST(EvaluateTest, TaggingAccuracyAccumulates) {
  Metrics total;
  const Input input = MakeInput({"a", "b"});
  total.Add(*Evaluate(input, Tags({"A", "B"}), Tags({"A", "B"})));
  total.Add(*Evaluate(input, Tags({"A", "A"}), Tags({"A", "B"})));
  EXPECT_DOUBLE_EQ(total.TokenAccuracy(), 75.0);
  EXPECT_DOUBLE_EQ(total.SentenceAccuracy(), 50.0);
  EXPECT_DOUBLE_EQ(total.Primary(), 75.0);
}

TEST(EvaluateTest, LengthMismatchIsAnError) {
  EXPECT_FALSE(
      Evaluate(MakeInput({"a", "b"}), Tags({"A"}), Tags({"A", "B"})).ok());
}

}  // namespace
}  // namespace gntp
