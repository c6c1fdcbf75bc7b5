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

#include "gntp/inference.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gtest/gtest.h"
#include "test_util.h"

namespace gntp {
namespace {

using testing::HashScorer;

TEST(LogSumExpTest, StableForLargeAndEmptyInputs) {
  const std::vector<double> big = {1000.0, 1000.0};
  EXPECT_NEAR(LogSumExp(big), 1000.0 + std::log(2.0), 1e-12);
  const std::vector<double> small = {-1000.0, -1001.0};
  EXPECT_NEAR(LogSumExp(small), -1000.0 + std::log1p(std::exp(-1.0)), 1e-12);
  EXPECT_EQ(LogSumExp({}), -std::numeric_limits<double>::infinity());
}

TEST(NormalizationModeTest, NamesRoundTrip) {
  for (NormalizationMode m :
       {NormalizationMode::kLocal, NormalizationMode::kGlobal}) {
    EXPECT_EQ(*ParseNormalizationMode(NormalizationModeName(m)), m);
  }
  EXPECT_FALSE(ParseNormalizationMode("both").ok());
}

struct Case {
  std::unique_ptr<TransitionSystem> system;
  Input input;
};

Case RandomCase(std::mt19937_64 &rng) {
  Case c;
  switch (rng() % 3) {
    case 0:
      c.system = MakeTransitionSystem(TaskKind::kTagging, {"A", "B", "C"});
      c.input = testing::RandomInput(rng, testing::UniformInt(rng, 1, 5));
      break;
    case 1:
      c.system = MakeTransitionSystem(TaskKind::kParsing, {"x", "y"});
      c.input = testing::RandomInput(rng, testing::UniformInt(rng, 1, 4));
      break;
    default:
      c.system = MakeTransitionSystem(TaskKind::kCompression, {});
      c.input = testing::RandomInput(rng, testing::UniformInt(rng, 1, 8));
      break;
  }
  return c;
}

// Reference scoring of one complete sequence.
void ReferenceScores(const TransitionSystem &system, const Input &input,
                     const Scorer &scorer, const std::vector<int> &seq,
                     double *raw, double *log_p_local) {
  State state = *system.StartState(input);
  *raw = 0.0;
  *log_p_local = 0.0;
  std::vector<double> scores(system.num_decisions());
  for (int d : seq) {
    scorer.Score(state, scores);
    std::vector<double> allowed;
    for (int a : system.Allowed(state, input)) allowed.push_back(scores[a]);
    double m = *std::max_element(allowed.begin(), allowed.end());
    double z = 0.0;
    for (double s : allowed) z += std::exp(s - m);
    *raw += scores[d];
    *log_p_local += scores[d] - (m + std::log(z));
    system.Advance(&state, d, input);
  }
}

// Property: enumeration agrees with reference scoring; global and local
// distributions each sum to one.
TEST(EnumerateAllTest, MatchesReferenceScoring) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 60; ++trial) {
    Case c = RandomCase(rng);
    HashScorer scorer(c.system->num_decisions(), rng(), 2.0);
    absl::StatusOr<Enumeration> e = EnumerateAll(*c.system, c.input, scorer);
    ASSERT_TRUE(e.ok());
    double sum_global = 0.0, sum_local = 0.0;
    double max_raw = -std::numeric_limits<double>::infinity();
    std::vector<double> raws;
    for (size_t i = 0; i < e->sequences.size(); ++i) {
      const ScoredSequence &s = e->sequences[i];
      if (i > 0) EXPECT_LT(e->sequences[i - 1].decisions, s.decisions);
      double raw, lp;
      ReferenceScores(*c.system, c.input, scorer, s.decisions, &raw, &lp);
      EXPECT_NEAR(s.raw_score, raw, 1e-12);
      EXPECT_NEAR(s.log_p_local, lp, 1e-12);
      raws.push_back(raw);
      max_raw = std::max(max_raw, raw);
      sum_local += std::exp(s.log_p_local);
    }
    double z = 0.0;
    for (double r : raws) z += std::exp(r - max_raw);
    EXPECT_NEAR(e->log_z_global, max_raw + std::log(z), 1e-10);
    for (const ScoredSequence &s : e->sequences) {
      sum_global += std::exp(*s.log_p_global);
    }
    EXPECT_NEAR(sum_global, 1.0, 1e-9);
    EXPECT_NEAR(sum_local, 1.0, 1e-9);
    EXPECT_EQ(e->ArgmaxGlobal().raw_score, max_raw);
  }
}

TEST(EnumerateAllTest, RefusesBeyondCap) {
  TaggingSystem system({"A", "B", "C"});
  const Input input = MakeInput(testing::Names("w", 6));
  HashScorer scorer(3, 1);
  absl::StatusOr<Enumeration> e = EnumerateAll(system, input, scorer, 700);
  EXPECT_EQ(e.status().code(), absl::StatusCode::kResourceExhausted);
  EXPECT_TRUE(EnumerateAll(system, input, scorer, 729).ok());
}

// Independent beam: expand every kept prefix, rank by score then history,
// keep the top B.
std::vector<std::vector<int>> NaiveBeam(const TransitionSystem &system,
                                        const Input &input,
                                        const Scorer &scorer, int beam,
                                        NormalizationMode mode, int steps) {
  struct Item {
    State state;
    double score;
  };
  std::vector<Item> items = {{*system.StartState(input), 0.0}};
  std::vector<double> scores(system.num_decisions());
  for (int step = 0; step < steps; ++step) {
    std::vector<Item> next;
    for (const Item &it : items) {
      scorer.Score(it.state, scores);
      const std::vector<int> allowed = system.Allowed(it.state, input);
      std::vector<double> vals;
      for (int a : allowed) vals.push_back(scores[a]);
      const double log_z = LogSumExp(vals);
      for (int a : allowed) {
        Item n{it.state, it.score + scores[a] -
                             (mode == NormalizationMode::kLocal ? log_z : 0)};
        system.Advance(&n.state, a, input);
        next.push_back(std::move(n));
      }
    }
    std::sort(next.begin(), next.end(), [](const Item &a, const Item &b) {
      if (a.score != b.score) return a.score > b.score;
      return a.state.history < b.state.history;
    });
    if (static_cast<int>(next.size()) > beam) next.resize(beam);
    items = std::move(next);
  }
  std::vector<std::vector<int>> out;
  for (const Item &it : items) out.push_back(it.state.history);
  return out;
}

TEST(BeamSearchTest, MatchesNaiveBeam) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    Case c = RandomCase(rng);
    HashScorer scorer(c.system->num_decisions(), rng());
    const int beam = testing::UniformInt(rng, 1, 6);
    for (NormalizationMode mode :
         {NormalizationMode::kLocal, NormalizationMode::kGlobal}) {
      const Beam result = BeamSearch(*c.system, c.input, scorer, beam, mode);
      std::vector<std::vector<int>> got;
      for (const BeamItem &it : result.items) got.push_back(it.state.history);
      EXPECT_EQ(got, NaiveBeam(*c.system, c.input, scorer, beam, mode,
                               c.system->SequenceLength(c.input)));
    }
  }
}

TEST(BeamSearchTest, GreedyEqualsLocalBeamOfOne) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    Case c = RandomCase(rng);
    HashScorer scorer(c.system->num_decisions(), rng());
    const ScoredSequence greedy = GreedyDecode(*c.system, c.input, scorer);
    const Beam beam =
        BeamSearch(*c.system, c.input, scorer, 1, NormalizationMode::kLocal);
    ASSERT_EQ(beam.items.size(), 1u);
    EXPECT_EQ(greedy.decisions, beam.items[0].state.history);
    EXPECT_NEAR(greedy.log_p_local, beam.items[0].local_log_prob, 1e-12);
  }
}

// Oracle: an exhaustive global beam finds the exact argmax, which no smaller
// beam can beat.
TEST(BeamSearchTest, ExhaustiveGlobalBeamFindsArgmax) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 60; ++trial) {
    Case c = RandomCase(rng);
    HashScorer scorer(c.system->num_decisions(), rng());
    const Enumeration e = *EnumerateAll(*c.system, c.input, scorer);
    const int all = static_cast<int>(e.sequences.size());
    const Beam full =
        BeamSearch(*c.system, c.input, scorer, all, NormalizationMode::kGlobal);
    EXPECT_EQ(full.items.front().state.history, e.ArgmaxGlobal().decisions);
    EXPECT_EQ(static_cast<int>(full.items.size()), all);
    for (int b = 1; b < 4; ++b) {
      const Beam small =
          BeamSearch(*c.system, c.input, scorer, b, NormalizationMode::kGlobal);
      EXPECT_LE(small.items.front().raw_score, full.items.front().raw_score);
    }
  }
}

class ConstantScorer : public Scorer {
 public:
  void Score(const State &, std::span<double> scores) const override {
    std::fill(scores.begin(), scores.end(), 0.0);
  }
};

TEST(BeamSearchTest, TiesPreferLexicographicallySmallerHistories) {
  TaggingSystem system({"A", "B", "C"});
  const Input input = MakeInput({"x", "y"});
  ConstantScorer scorer;
  const Beam beam =
      BeamSearch(system, input, scorer, 4, NormalizationMode::kGlobal);
  std::vector<std::vector<int>> got;
  for (const BeamItem &it : beam.items) got.push_back(it.state.history);
  EXPECT_EQ(got, (std::vector<std::vector<int>>{{0, 0}, {0, 1}, {0, 2},
                                                {1, 0}}));
  EXPECT_EQ(GreedyDecode(system, input, scorer).decisions,
            (std::vector<int>{0, 0}));
}

// Property: gold tracking agrees with the naive beam: the gold falls out at
// the first step whose naive beam lacks the gold prefix.
TEST(TrackGoldTest, FalloutMatchesNaiveBeam) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    Case c = RandomCase(rng);
    HashScorer scorer(c.system->num_decisions(), rng());
    const std::vector<int> gold =
        testing::RandomSequence(*c.system, c.input, rng);
    const int beam = testing::UniformInt(rng, 1, 4);
    const GoldTrace trace = TrackGold(*c.system, c.input, scorer, beam,
                                      NormalizationMode::kGlobal, gold);
    std::optional<int> expected;
    for (int step = 1; step <= static_cast<int>(gold.size()); ++step) {
      const auto items = NaiveBeam(*c.system, c.input, scorer, beam,
                                   NormalizationMode::kGlobal, step);
      const std::vector<int> prefix(gold.begin(), gold.begin() + step);
      if (std::find(items.begin(), items.end(), prefix) == items.end()) {
        expected = step;
        break;
      }
    }
    EXPECT_EQ(trace.fallout_step, expected);
    EXPECT_EQ(trace.survived, !expected.has_value());
    EXPECT_EQ(trace.beam.ContainsGold(), !expected.has_value());
    if (expected) EXPECT_EQ(trace.beam.step, *expected);
  }
}

}  // namespace
}  // namespace gntp
