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

#ifndef GNTP_TRAINING_H_
#define GNTP_TRAINING_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "gntp/decoder.h"
#include "gntp/input.h"
#include "gntp/model.h"
#include "gntp/optimizer.h"
#include "gntp/task_systems.h"

namespace gntp {

// A training sentence with its gold decision sequence.
struct Example {
  Input input;
  Annotation gold;
  std::vector<int> decisions;
};

absl::StatusOr<Example> MakeExample(const TransitionSystem &system,
                                    Input input, Annotation gold);

// Builds examples for a corpus. Sentences whose gold cannot be unrolled
// (non-projective trees) are skipped with a message in `warnings`; any other
// validation failure is an error.
absl::StatusOr<std::vector<Example>> MakeExamples(
    const TransitionSystem &system, std::span<const Input> inputs,
    std::span<const Annotation> gold, std::vector<std::string> *warnings);

// -ln p_L(gold). Adds the gradient to `grads` when it is not null.
double LocalLossAndGrad(const Model &model, const Parameters &params,
                        const Example &example, Gradients *grads);

// Prefixes summed over by the beam losses: the kept beam at the early-update
// step plus the gold prefix when it fell out, each exactly once.
struct PathSet {
  std::vector<std::vector<int>> paths;  // all of length `step`
  int gold = -1;                        // index of the gold prefix
  int step = 0;
  std::optional<int> fallout_step;
};

// Runs global-mode beam search with gold tracking under `params`.
PathSet BeamPathSet(const Model &model, const Parameters &params,
                    const Example &example, int beam_size);

// -score(gold) + ln sum_{p in paths} exp score(p), with the path set frozen.
double PathSetLossAndGrad(const Model &model, const Parameters &params,
                          const Input &input, const PathSet &paths,
                          Gradients *grads);

// max(0, score(best non-gold path) + margin - score(gold)), frozen path set.
double PathSetHingeLossAndGrad(const Model &model, const Parameters &params,
                               const Input &input, const PathSet &paths,
                               double margin, Gradients *grads);

struct BeamLoss {
  double loss = 0.0;
  std::optional<int> fallout_step;
  int num_paths = 0;
};

BeamLoss GlobalBeamLossAndGrad(const Model &model, const Parameters &params,
                               const Example &example, int beam_size,
                               Gradients *grads);

BeamLoss HingeLossAndGrad(const Model &model, const Parameters &params,
                          const Example &example, int beam_size, double margin,
                          Gradients *grads);

enum class TrainStage { kLocal, kGlobal };
enum class LossKind { kCrf, kHinge };

absl::string_view TrainStageName(TrainStage stage);
absl::StatusOr<TrainStage> ParseTrainStage(absl::string_view name);
absl::string_view LossKindName(LossKind loss);
absl::StatusOr<LossKind> ParseLossKind(absl::string_view name);

struct TrainConfig {
  TrainStage stage = TrainStage::kLocal;
  int beam_size = 8;
  TrainableSubset subset = TrainableSubset::kFull;
  LossKind loss = LossKind::kCrf;
  double margin = 1.0;
  OptimizerOptions optimizer;
  int epochs = 10;
  // Epochs without held-out improvement before stopping; 0 disables.
  int patience = 0;
  uint64_t seed = 1;
  int batch_size = 1;
  // Held-out decoding beam; 0 means greedy for the local stage and
  // `beam_size` for the global stage.
  int eval_beam = 0;
  int threads = 0;
  EvalOptions eval;

  absl::Status Validate() const;
};

struct EpochRecord {
  TrainStage stage = TrainStage::kLocal;
  int epoch = 0;
  double loss = 0.0;  // mean per sentence
  std::optional<double> metric;
  int64_t steps = 0;
  double learning_rate = 0.0;
  // Early-update step -> count; sentences whose gold survived are under 0.
  std::map<int, int> fallout;

  // One line of the training log, e.g.
  //   stage=global epoch=2 loss=0.412 metric=97.25 steps=800 lr=0.0492
  //   fallout=3:10,4:2,none:388
  std::string ToLogLine() const;
};

struct TrainResult {
  std::vector<EpochRecord> log;
  int best_epoch = 0;
  std::optional<double> best_metric;
};

// Runs one training stage. The global stage starts from the model's averaged
// parameters with the decision layer redrawn from `config.seed`. With a
// held-out set, the parameters of the best epoch are restored at the end.
absl::StatusOr<TrainResult> Train(
    Model *model, std::span<const Example> train,
    std::span<const Example> heldout, const TrainConfig &config,
    const std::function<void(const EpochRecord &)> &on_epoch = {});

DecodeOptions HeldoutDecodeOptions(const TrainConfig &config);

// Decodes `examples` with the averaged parameters and scores them.
absl::StatusOr<Metrics> EvaluateExamples(const Model &model,
                                         std::span<const Example> examples,
                                         const DecodeOptions &options,
                                         const EvalOptions &eval_options,
                                         int threads);

}  // namespace gntp

#endif  // GNTP_TRAINING_H_
