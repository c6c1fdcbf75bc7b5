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

#include "gntp/training.h"

#include <cmath>
#include <limits>
#include <set>

#include "gntp/corpus_io.h"
#include "gntp/gradient_check.h"
#include "gntp/model.h"
#include "gntp/synthetic.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace gntp {
namespace {

struct Fixture {
  Model model;
  std::vector<Example> examples;
};

const char *TemplateFor(TaskKind task) {
  switch (task) {
    case TaskKind::kTagging:
      return "group name=w source=token at=-1,0,1 dim=2\n"
             "group name=c source=chars at=0 max_ngram=2 dim=2\n"
             "group name=h source=history at=1,2 dim=2\n";
    case TaskKind::kParsing:
      return "group name=t source=parser column=tag at=s0,s1,b0 dim=2\n"
             "group name=l source=parser column=label at=s0.l1,s0.r1 dim=2\n";
    case TaskKind::kCompression:
      return "group name=w source=token at=0,1 dim=2\n"
             "group name=h source=history at=1 dim=2\n";
  }
  return "";
}

Fixture FixtureFor(const Corpus &corpus, uint64_t seed,
                   std::vector<int> hidden = {4}) {
  const std::vector<Input> inputs = corpus.Inputs();
  absl::StatusOr<Model> model = Model::Create(
      corpus.task, CollectLabels(corpus),
      *FeatureTemplate::Parse(TemplateFor(corpus.task)), hidden,
      Activation::kRelu, inputs, seed);
  EXPECT_TRUE(model.ok()) << model.status();
  absl::StatusOr<std::vector<Example>> examples =
      MakeExamples(model->system(), inputs, corpus.Annotations(), nullptr);
  EXPECT_TRUE(examples.ok());
  return {std::move(*model), std::move(*examples)};
}

Fixture MakeFixture(const std::string &generator, int size, uint64_t seed,
                    std::vector<int> hidden = {4}) {
  SynthSpec spec;
  spec.generator = generator;
  spec.size = size;
  spec.seed = seed;
  return FixtureFor(*GenerateSynthetic(spec), seed, std::move(hidden));
}

// Keeps only short sentences so that exhaustive enumeration stays small.
std::vector<Example> Short(const std::vector<Example> &examples, int max_len) {
  std::vector<Example> out;
  for (const Example &e : examples) {
    if (e.input.size() <= max_len) out.push_back(e);
  }
  return out;
}

TEST(MakeExamplesTest, SkipsNonProjectiveWithWarning) {
  ArcStandardSystem system({"dep"});
  Annotation bad;
  bad.kind = TaskKind::kParsing;
  bad.heads = {0, 4, 1, 1};
  bad.labels = {"dep", "dep", "dep", "dep"};
  Annotation good = bad;
  good.heads = {0, 1, 2, 3};
  const std::vector<Input> inputs = {MakeInput({"a", "b", "c", "d"}),
                                     MakeInput({"a", "b", "c", "d"})};
  std::vector<std::string> warnings;
  absl::StatusOr<std::vector<Example>> examples = MakeExamples(
      system, inputs, std::vector<Annotation>{bad, good}, &warnings);
  ASSERT_TRUE(examples.ok());
  EXPECT_EQ(examples->size(), 1u);
  EXPECT_EQ(warnings.size(), 1u);
}

// Oracle: the local loss equals -ln p_L(gold) from exhaustive enumeration.
TEST(LocalLossTest, MatchesEnumeration) {
  for (const char *gen : {"separable-tagging", "projective-trees", "keep-drop"}) {
    Fixture f = MakeFixture(gen, 12, 3);
    for (const Example &ex : Short(f.examples, 4)) {
      NetworkScorer scorer(f.model, f.model.params(), ex.input);
      absl::StatusOr<Enumeration> e =
          EnumerateAll(f.model.system(), ex.input, scorer, 100000);
      if (!e.ok()) continue;
      double expected = 0.0;
      for (const ScoredSequence &s : e->sequences) {
        if (s.decisions == ex.decisions) expected = -s.log_p_local;
      }
      EXPECT_NEAR(LocalLossAndGrad(f.model, f.model.params(), ex, nullptr),
                  expected, 1e-10)
          << gen;
    }
  }
}

// Oracle: with a beam that never prunes, the beam loss is the exact global
// negative log-likelihood, and its log-sum-exp is the exact log Z_G.
TEST(GlobalBeamLossTest, ExhaustiveBeamEqualsExactNll) {
  for (TaskKind task :
       {TaskKind::kTagging, TaskKind::kParsing, TaskKind::kCompression}) {
    Fixture f = FixtureFor(testing::SmallCorpus(task, 15, 5), 5);
    const absl::string_view gen = TaskKindName(task);
    int checked = 0;
    for (const Example &ex : f.examples) {
      NetworkScorer scorer(f.model, f.model.params(), ex.input);
      absl::StatusOr<Enumeration> e =
          EnumerateAll(f.model.system(), ex.input, scorer, 500);
      if (!e.ok()) continue;
      const int all = static_cast<int>(e->sequences.size());
      if (all > 500) continue;
      double gold_score = 0.0;
      for (const ScoredSequence &s : e->sequences) {
        if (s.decisions == ex.decisions) gold_score = s.raw_score;
      }
      const BeamLoss loss =
          GlobalBeamLossAndGrad(f.model, f.model.params(), ex, all, nullptr);
      EXPECT_FALSE(loss.fallout_step.has_value());
      EXPECT_EQ(loss.num_paths, all);
      EXPECT_NEAR(loss.loss, e->log_z_global - gold_score, 1e-9) << gen;

      const Beam beam = BeamSearch(f.model.system(), ex.input, scorer, all,
                                   NormalizationMode::kGlobal);
      std::vector<double> scores;
      for (const BeamItem &it : beam.items) scores.push_back(it.raw_score);
      EXPECT_NEAR(LogSumExp(scores), e->log_z_global, 1e-9);
      ++checked;
    }
    EXPECT_GT(checked, 0) << gen;
  }
}

// Property: the early-update path set holds the kept beam plus the gold
// prefix when it fell out, each exactly once.
TEST(BeamPathSetTest, EarlyUpdateComposition) {
  Fixture f = MakeFixture("separable-tagging", 20, 7);
  for (int beam : {1, 2, 3}) {
    for (const Example &ex : f.examples) {
      const PathSet set = BeamPathSet(f.model, f.model.params(), ex, beam);
      const std::vector<int> gold_prefix(ex.decisions.begin(),
                                         ex.decisions.begin() + set.step);
      ASSERT_GE(set.gold, 0);
      EXPECT_EQ(set.paths[set.gold], gold_prefix);
      std::set<std::vector<int>> unique(set.paths.begin(), set.paths.end());
      EXPECT_EQ(unique.size(), set.paths.size());
      if (set.fallout_step) {
        EXPECT_EQ(set.step, *set.fallout_step);
        EXPECT_EQ(static_cast<int>(set.paths.size()), beam + 1);
      } else {
        EXPECT_EQ(set.step, static_cast<int>(ex.decisions.size()));
        EXPECT_LE(static_cast<int>(set.paths.size()), beam);
      }
    }
  }
}

TEST(HingeLossTest, ZeroWhenGoldWinsByTheMargin) {
  Fixture f = MakeFixture("separable-tagging", 5, 9);
  const Example &ex = f.examples[0];
  PathSet set;
  set.paths = {ex.decisions};
  set.gold = 0;
  set.step = static_cast<int>(ex.decisions.size());
  Gradients g = Parameters::Zeros(f.model.network().shape());
  EXPECT_EQ(PathSetHingeLossAndGrad(f.model, f.model.params(), ex.input, set,
                                    1.0, &g),
            0.0);
  EXPECT_EQ(g, Parameters::Zeros(f.model.network().shape()));
}

// Finite-difference oracle for every loss, on one- and two-layer models of
// at most 1000 parameters.
TEST(GradientTest, AllLossesMatchFiniteDifferences) {
  for (const char *gen : {"separable-tagging", "projective-trees", "keep-drop"}) {
    for (std::vector<int> hidden : {std::vector<int>{3}, std::vector<int>{3, 2}}) {
      Fixture f = MakeFixture(gen, 2, 11, hidden);
      ASSERT_LE(f.model.params().size(), 1000u);
      for (const LossCheck &check :
           CheckAllLosses(f.model, f.examples, f.model.params(), 2, 1.0)) {
        EXPECT_TRUE(check.report.passed)
            << gen << " " << check.loss << " "
            << check.report.max_relative_error;
        EXPECT_EQ(check.report.checked, f.model.params().size());
        EXPECT_LT(check.skipped, static_cast<int>(f.examples.size()));
      }
    }
  }
}

TEST(GradientTest, HingeKinksAreDetected) {
  Fixture f = MakeFixture("separable-tagging", 3, 4);
  for (const Example &ex : f.examples) {
    EXPECT_FALSE(HingeIsSmooth(f.model, f.model.params(), ex, 4, 1.0,
                               std::numeric_limits<double>::infinity()));
  }
}

TEST(TrainConfigTest, Validation) {
  TrainConfig c;
  EXPECT_TRUE(c.Validate().ok());
  c.loss = LossKind::kHinge;
  EXPECT_FALSE(c.Validate().ok());
  c.stage = TrainStage::kGlobal;
  EXPECT_TRUE(c.Validate().ok());
  c.beam_size = 0;
  EXPECT_FALSE(c.Validate().ok());
}

TEST(EpochRecordTest, LogLineFormat) {
  EpochRecord r;
  r.stage = TrainStage::kGlobal;
  r.epoch = 2;
  r.loss = 0.412;
  r.metric = 97.25;
  r.steps = 800;
  r.learning_rate = 0.0492;
  r.fallout = {{0, 388}, {3, 10}, {4, 2}};
  EXPECT_EQ(r.ToLogLine(),
            "stage=global epoch=2 loss=0.412000 metric=97.25 steps=800 "
            "lr=0.0492 fallout=3:10,4:2,none:388");
}

TrainConfig SmallConfig(TrainStage stage) {
  TrainConfig c;
  c.stage = stage;
  c.epochs = 3;
  c.beam_size = 2;
  c.optimizer.learning_rate = 0.01;
  return c;
}

// Property: seeded training is bit-reproducible.
TEST(TrainTest, SeededTrainingIsBitReproducible) {
  std::vector<Parameters> runs;
  for (int run = 0; run < 2; ++run) {
    Fixture f = MakeFixture("separable-tagging", 20, 13);
    for (TrainStage stage : {TrainStage::kLocal, TrainStage::kGlobal}) {
      ASSERT_TRUE(Train(&f.model, f.examples, {}, SmallConfig(stage)).ok());
    }
    runs.push_back(f.model.averaged());
    EXPECT_EQ(f.model.metadata().epochs, 6);
  }
  EXPECT_EQ(runs[0], runs[1]);
}

TEST(TrainTest, LossDecreasesOnSeparableData) {
  Fixture f = MakeFixture("separable-tagging", 40, 17);
  TrainConfig c = SmallConfig(TrainStage::kLocal);
  c.epochs = 4;
  absl::StatusOr<TrainResult> r = Train(&f.model, f.examples, {}, c);
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r->log.size(), 4u);
  EXPECT_LT(r->log.back().loss, r->log.front().loss);
}

TEST(TrainTest, EarlyStoppingRestoresBestEpoch) {
  Fixture f = MakeFixture("separable-tagging", 30, 19);
  std::vector<Example> heldout(f.examples.begin(), f.examples.begin() + 10);
  TrainConfig c = SmallConfig(TrainStage::kLocal);
  c.epochs = 6;
  c.patience = 2;
  std::vector<Parameters> snapshots;
  absl::StatusOr<TrainResult> r =
      Train(&f.model, f.examples, heldout, c,
            [&](const EpochRecord &) { snapshots.push_back(f.model.averaged()); });
  ASSERT_TRUE(r.ok());
  ASSERT_TRUE(r->best_metric.has_value());
  double best = -1;
  int best_epoch = 0;
  for (const EpochRecord &rec : r->log) {
    if (*rec.metric > best) {
      best = *rec.metric;
      best_epoch = rec.epoch;
    }
  }
  EXPECT_EQ(r->best_epoch, best_epoch);
  EXPECT_EQ(f.model.averaged(), snapshots[best_epoch - 1]);
}

TEST(TrainTest, GlobalStageRedrawsOnlyTheDecisionLayer) {
  Fixture f = MakeFixture("separable-tagging", 10, 23);
  const Parameters before = f.model.averaged();
  TrainConfig c = SmallConfig(TrainStage::kGlobal);
  c.subset = TrainableSubset::kSoftmaxOnly;
  ASSERT_TRUE(Train(&f.model, f.examples, {}, c).ok());
  EXPECT_EQ(f.model.params().embeddings, before.embeddings);
  EXPECT_EQ(f.model.params().hidden_weights, before.hidden_weights);
  EXPECT_NE(f.model.params().softmax_weights, before.softmax_weights);
}

TEST(TrainTest, RejectsSubsetsTheNetworkLacks) {
  Fixture f = MakeFixture("separable-tagging", 5, 29);
  TrainConfig c = SmallConfig(TrainStage::kGlobal);
  c.subset = TrainableSubset::kTopHiddenAndSoftmax;
  EXPECT_FALSE(Train(&f.model, f.examples, {}, c).ok());
  EXPECT_FALSE(Train(&f.model, {}, {}, SmallConfig(TrainStage::kLocal)).ok());
}

TEST(TrainTest, DivergenceIsReported) {
  Fixture f = MakeFixture("separable-tagging", 10, 31);
  TrainConfig c = SmallConfig(TrainStage::kLocal);
  c.optimizer.learning_rate = 1e200;
  c.optimizer.momentum = 0.0;
  absl::StatusOr<TrainResult> r = Train(&f.model, f.examples, {}, c);
  EXPECT_FALSE(r.ok());
}

}  // namespace
}  // namespace gntp
