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

#include "gntp/label_bias.h"

#include <cmath>

#include "gtest/gtest.h"
#include "test_util.h"

namespace gntp {
namespace {

std::vector<std::string> Words(absl::string_view text) {
  std::vector<std::string> out;
  for (char c : text) out.emplace_back(1, c);
  return out;
}

TEST(LookaheadFamilyTest, Construction) {
  const ToyDataset k0 = LookaheadFamily(0);
  ASSERT_EQ(k0.sentences.size(), 2u);
  EXPECT_EQ(k0.sentences[0].first, Words("abc"));
  EXPECT_EQ(k0.sentences[0].second, Words("ABC"));
  EXPECT_EQ(k0.sentences[1].first, Words("abe"));
  EXPECT_EQ(k0.sentences[1].second, Words("ADE"));
  const ToyDataset k2 = LookaheadFamily(2);
  EXPECT_EQ(k2.sentences[0].first, Words("abbbc"));
  EXPECT_EQ(k2.sentences[1].second, Words("ADDDE"));
  for (const auto &[w, t] : k2.sentences) EXPECT_EQ(w.size(), t.size());
}

TEST(ToyModelTest, HandEvaluatedScores) {
  const ToyModel m = ToyModel::Paper(3.0);
  const std::vector<std::string> x = Words("abc");
  EXPECT_EQ(m.Score(x, {}, "A"), 3.0);
  const std::vector<std::string> a = {"A"};
  EXPECT_EQ(m.Score(x, a, "B"), 6.0);
  EXPECT_EQ(m.Score(x, a, "C"), 0.0);
  EXPECT_EQ(ToyModel::FromDataset(LookaheadFamily(0), 3.0).transitions,
            m.transitions);
  EXPECT_EQ(ToyModel::FromDataset(LookaheadFamily(0), 3.0).emissions,
            m.emissions);
}

TEST(ToyGlobalTest, AlphaZeroIsUniform) {
  absl::StatusOr<Enumeration> e =
      ToyGlobalDistribution(ToyModel::Paper(0.0), Words("abc"));
  ASSERT_TRUE(e.ok());
  ASSERT_EQ(e->sequences.size(), 125u);
  for (const ScoredSequence &s : e->sequences) {
    EXPECT_NEAR(std::exp(*s.log_p_global), 1.0 / 125.0, 1e-15);
  }
}

// Oracle: direct enumeration of the toy feature scores in test code.
TEST(ToyGlobalTest, MatchesIndependentEnumeration) {
  for (double alpha : {0.5, 2.0, 7.0}) {
    const ToyModel m = ToyModel::Paper(alpha);
    for (const auto &[words, gold] : LookaheadFamily(0).sentences) {
      double z = 0.0, gold_score = 0.0;
      for (int s = 0; s < 125; ++s) {
        const std::vector<std::string> tags = {m.tags[s / 25],
                                               m.tags[(s / 5) % 5],
                                               m.tags[s % 5]};
        double score = 0.0;
        for (int i = 0; i < 3; ++i) {
          if (m.emissions.contains({words[i], tags[i]})) score += alpha;
          if (i > 0 && m.transitions.contains({tags[i - 1], tags[i]})) {
            score += alpha;
          }
        }
        z += std::exp(score);
        if (tags == gold) gold_score = score;
      }
      EXPECT_EQ(gold_score, 5 * alpha);
      EXPECT_NEAR(*ToyGlobalProbability(m, words, gold),
                  std::exp(gold_score) / z, 1e-12);
    }
  }
}

TEST(LabelBiasTableTest, SharpensMonotonicallyAndExceedsOne) {
  const std::vector<double> alphas = {0, 1, 2, 5, 10, 20};
  absl::StatusOr<std::vector<LabelBiasRow>> rows = LabelBiasTable(alphas, 0);
  ASSERT_TRUE(rows.ok());
  ASSERT_EQ(rows->size(), alphas.size());
  for (size_t i = 1; i < rows->size(); ++i) {
    EXPECT_GE((*rows)[i].p_first, (*rows)[i - 1].p_first);
    EXPECT_GE((*rows)[i].p_second, (*rows)[i - 1].p_second);
  }
  EXPECT_GT(rows->back().p_first, 0.999);
  EXPECT_GT(rows->back().p_second, 0.999);
  EXPECT_GT(rows->back().sum(), 1.99);
  EXPECT_FALSE(LabelBiasTable(alphas, -1).ok());
}

// The optimal local split: 0.5 at the ambiguous step, deterministic
// elsewhere.
LocalConditional OptimalSplit() {
  return [](std::span<const std::string> x, std::span<const int> prefix) {
    std::vector<double> p(5, 0.0);
    const int i = static_cast<int>(prefix.size());
    if (i == 0) {
      p[0] = 1.0;
    } else if (i == 1) {
      p[1] = p[3] = 0.5;
    } else {
      (void)x;
      p[prefix.back() == 1 ? 2 : 4] = 1.0;
    }
    return p;
  };
}

TEST(LocalBoundTest, OptimalSplitSumsToOne) {
  const ToyDataset data = LookaheadFamily(0);
  const LocalConditional local = OptimalSplit();
  const double sum =
      LocalSequenceProbability(local, data.sentences[0].first,
                               std::vector<int>{0, 1, 2}) +
      LocalSequenceProbability(local, data.sentences[1].first,
                               std::vector<int>{0, 3, 4});
  EXPECT_EQ(sum, 1.0);
}

TEST(LocalBoundTest, RandomModelsRespectTheBound) {
  const ToyDataset data = LookaheadFamily(0);
  const ToyModel vocab = ToyModel::FromDataset(data, 1.0);
  absl::StatusOr<AuditReport> report =
      AuditLocalBound(RandomLocalModels(5), data, vocab, 500, 3);
  ASSERT_TRUE(report.ok()) << report.status();
  EXPECT_EQ(report->trials, 500);
  EXPECT_TRUE(report->bound_holds);
  EXPECT_LE(report->max_sum, 1.0 + 1e-9);
  EXPECT_GT(report->max_sum, 0.0);
}

TEST(LocalBoundTest, LookaheadModelsRespectTheBoundOnLongerFamilies) {
  const ToyDataset data = LookaheadFamily(2);
  const ToyModel vocab = ToyModel::FromDataset(data, 1.0);
  absl::StatusOr<AuditReport> report =
      AuditLocalBound(RandomLocalModels(5, 2), data, vocab, 100, 5, 2);
  ASSERT_TRUE(report.ok()) << report.status();
  EXPECT_TRUE(report->bound_holds);
}

// Negative control: a model that peeks at the last word can exceed the bound
// and must be rejected.
TEST(LocalBoundTest, CheatingModelIsRejected) {
  const ToyDataset data = LookaheadFamily(0);
  const ToyModel vocab = ToyModel::FromDataset(data, 1.0);
  LocalModelGenerator cheat = [](uint64_t) -> LocalConditional {
    return [](std::span<const std::string> x, std::span<const int> prefix) {
      std::vector<double> p(5, 0.0);
      const int i = static_cast<int>(prefix.size());
      if (i == 0) {
        p[0] = 1.0;
      } else if (i == 1) {
        p[x.back() == "c" ? 1 : 3] = 1.0;
      } else {
        p[prefix.back() == 1 ? 2 : 4] = 1.0;
      }
      return p;
    };
  };
  absl::StatusOr<AuditReport> report =
      AuditLocalBound(cheat, data, vocab, 10, 1);
  EXPECT_EQ(report.status().code(), absl::StatusCode::kFailedPrecondition);
  // The same model with full lookahead is legal and reaches sum 2.
  absl::StatusOr<AuditReport> legal =
      AuditLocalBound(cheat, data, vocab, 1, 1, /*lookahead=*/2);
  ASSERT_TRUE(legal.ok());
  EXPECT_EQ(legal->max_sum, 2.0);
  EXPECT_FALSE(legal->bound_holds);
}

TEST(LocalBoundTest, NonDistributionsAreRejected) {
  const ToyDataset data = LookaheadFamily(0);
  const ToyModel vocab = ToyModel::FromDataset(data, 1.0);
  LocalModelGenerator bad = [](uint64_t) -> LocalConditional {
    return [](std::span<const std::string>, std::span<const int>) {
      return std::vector<double>(5, 0.3);
    };
  };
  EXPECT_FALSE(AuditLocalBound(bad, data, vocab, 1, 1).ok());
}

TEST(EmbeddingTest, UniformLocalModelGivesUniformGlobal) {
  LocalConditional uniform = [](std::span<const std::string>,
                                std::span<const int>) {
    return std::vector<double>(5, 0.2);
  };
  absl::StatusOr<double> gap = EmbeddingGap(uniform, 5, Words("abc"));
  ASSERT_TRUE(gap.ok());
  EXPECT_LT(*gap, 1e-15);
}

// Property: the embedding reproduces p_L exactly for random local models.
TEST(EmbeddingTest, RandomLocalModelsEmbedExactly) {
  const LocalModelGenerator gen = RandomLocalModels(5);
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    const LocalConditional local = gen(rng());
    absl::StatusOr<double> gap = EmbeddingGap(local, 5, Words("abc"));
    ASSERT_TRUE(gap.ok());
    EXPECT_LT(*gap, 1e-9);
  }
}

TEST(EmbeddingTest, DeterministicModelsNeedAFloor) {
  const LocalConditional local = OptimalSplit();
  EXPECT_FALSE(EmbeddingGap(local, 5, Words("abc")).ok());
  absl::StatusOr<double> gap = EmbeddingGap(local, 5, Words("abc"), 1e-12);
  ASSERT_TRUE(gap.ok());
  EXPECT_LT(*gap, 1e-6);
}

}  // namespace
}  // namespace gntp
