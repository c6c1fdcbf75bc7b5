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

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "gntp/check.h"
#include "gntp/inference.h"

namespace gntp {

absl::StatusOr<Example> MakeExample(const TransitionSystem &system,
                                    Input input, Annotation gold) {
  absl::StatusOr<std::vector<int>> decisions = UnrollGold(system, input, gold);
  if (!decisions.ok()) return decisions.status();
  return Example{std::move(input), std::move(gold), std::move(*decisions)};
}

absl::StatusOr<std::vector<Example>> MakeExamples(
    const TransitionSystem &system, std::span<const Input> inputs,
    std::span<const Annotation> gold, std::vector<std::string> *warnings) {
  if (inputs.size() != gold.size()) {
    return absl::InvalidArgumentError("inputs and annotations differ in size");
  }
  std::vector<Example> out;
  out.reserve(inputs.size());
  for (size_t i = 0; i < inputs.size(); ++i) {
    absl::StatusOr<Example> ex = MakeExample(system, inputs[i], gold[i]);
    if (ex.ok()) {
      out.push_back(std::move(*ex));
    } else if (absl::IsFailedPrecondition(ex.status())) {
      if (warnings != nullptr) {
        warnings->push_back(absl::StrCat("skipping sentence ", i + 1, ": ",
                                         ex.status().message()));
      }
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat("sentence ", i + 1, ": ", ex.status().message()));
    }
  }
  return out;
}

double LocalLossAndGrad(const Model &model, const Parameters &params,
                        const Example &example, Gradients *grads) {
  const TransitionSystem &system = model.system();
  NetworkScorer scorer(model, params, example.input);
  absl::StatusOr<State> start = system.StartState(example.input);
  GNTP_CHECK(start.ok(), "invalid training input");
  State state = std::move(*start);
  double loss = 0.0;
  ForwardCache cache;
  std::vector<double> upstream(system.num_decisions());
  for (int gold : example.decisions) {
    std::vector<double> scores =
        scorer.Forward(state, grads != nullptr ? &cache : nullptr);
    const std::vector<int> allowed = system.Allowed(state, example.input);
    std::vector<double> allowed_scores;
    for (int d : allowed) allowed_scores.push_back(scores[d]);
    const double log_z = LogSumExp(allowed_scores);
    loss += log_z - scores[gold];
    if (grads != nullptr) {
      std::fill(upstream.begin(), upstream.end(), 0.0);
      for (int d : allowed) upstream[d] = std::exp(scores[d] - log_z);
      upstream[gold] -= 1.0;
      model.network().Backward(cache, upstream, params, grads);
    }
    system.Advance(&state, gold, example.input);
  }
  return loss;
}

PathSet BeamPathSet(const Model &model, const Parameters &params,
                    const Example &example, int beam_size) {
  NetworkScorer scorer(model, params, example.input);
  GoldTrace trace =
      TrackGold(model.system(), example.input, scorer, beam_size,
                NormalizationMode::kGlobal, example.decisions);
  PathSet set;
  set.step = trace.beam.step;
  set.fallout_step = trace.fallout_step;
  for (const BeamItem &item : trace.beam.items) {
    if (item.is_gold) set.gold = static_cast<int>(set.paths.size());
    set.paths.push_back(item.state.history);
  }
  if (set.gold < 0) {
    set.gold = static_cast<int>(set.paths.size());
    set.paths.emplace_back(example.decisions.begin(),
                           example.decisions.begin() + set.step);
  }
  return set;
}

namespace {

// Prefix tree over a path set; each internal node is scored once and its
// backward pass is run once with the summed upstream gradient.
class PathTrie {
 public:
  PathTrie(const Model &model, const Parameters &params, const Input &input,
           const std::vector<std::vector<int>> &paths, bool keep_caches)
      : model_(model), scorer_(model, params, input), input_(input),
        keep_caches_(keep_caches) {
    absl::StatusOr<State> start = model.system().StartState(input);
    GNTP_CHECK(start.ok(), "invalid training input");
    nodes_.emplace_back(std::move(*start));
    for (const std::vector<int> &path : paths) {
      int node = 0;
      for (int d : path) node = Child(node, d);
    }
  }

  double Score(const std::vector<int> &path) {
    double total = 0.0;
    int node = 0;
    for (int d : path) {
      total += Scores(node)[d];
      node = nodes_[node].children.at(d);
    }
    return total;
  }

  void AddUpstream(const std::vector<int> &path, double weight) {
    int node = 0;
    for (int d : path) {
      Node &n = nodes_[node];
      if (n.upstream.empty()) n.upstream.assign(n.scores.size(), 0.0);
      n.upstream[d] += weight;
      node = n.children.at(d);
    }
  }

  void Backward(const Parameters &params, Gradients *grads) const {
    for (const Node &n : nodes_) {
      if (n.upstream.empty()) continue;
      model_.network().Backward(n.cache, n.upstream, params, grads);
    }
  }

 private:
  struct Node {
    explicit Node(State s) : state(std::move(s)) {}

    State state;
    std::map<int, int> children;
    std::vector<double> scores;
    std::vector<double> upstream;
    ForwardCache cache;
  };

  int Child(int node, int decision) {
    auto it = nodes_[node].children.find(decision);
    if (it != nodes_[node].children.end()) return it->second;
    State next = nodes_[node].state;
    model_.system().Advance(&next, decision, input_);
    nodes_.emplace_back(std::move(next));
    const int id = static_cast<int>(nodes_.size()) - 1;
    nodes_[node].children.emplace(decision, id);
    return id;
  }

  const std::vector<double> &Scores(int node) {
    Node &n = nodes_[node];
    if (n.scores.empty()) {
      n.scores = scorer_.Forward(n.state, keep_caches_ ? &n.cache : nullptr);
    }
    return n.scores;
  }

  const Model &model_;
  NetworkScorer scorer_;
  const Input &input_;
  bool keep_caches_;
  std::vector<Node> nodes_;
};

}  // namespace

double PathSetLossAndGrad(const Model &model, const Parameters &params,
                          const Input &input, const PathSet &paths,
                          Gradients *grads) {
  GNTP_CHECK(paths.gold >= 0 && paths.gold < int(paths.paths.size()),
             "path set without gold prefix");
  PathTrie trie(model, params, input, paths.paths, grads != nullptr);
  std::vector<double> scores;
  scores.reserve(paths.paths.size());
  for (const std::vector<int> &p : paths.paths) scores.push_back(trie.Score(p));
  const double log_z = LogSumExp(scores);
  const double loss = log_z - scores[paths.gold];
  if (grads != nullptr) {
    for (size_t p = 0; p < paths.paths.size(); ++p) {
      double weight = std::exp(scores[p] - log_z);
      if (int(p) == paths.gold) weight -= 1.0;
      trie.AddUpstream(paths.paths[p], weight);
    }
    trie.Backward(params, grads);
  }
  return loss;
}

double PathSetHingeLossAndGrad(const Model &model, const Parameters &params,
                               const Input &input, const PathSet &paths,
                               double margin, Gradients *grads) {
  GNTP_CHECK(paths.gold >= 0 && paths.gold < int(paths.paths.size()),
             "path set without gold prefix");
  PathTrie trie(model, params, input, paths.paths, grads != nullptr);
  const double gold_score = trie.Score(paths.paths[paths.gold]);
  int rival = -1;
  double rival_score = 0.0;
  for (size_t p = 0; p < paths.paths.size(); ++p) {
    if (int(p) == paths.gold) continue;
    const double s = trie.Score(paths.paths[p]);
    if (rival < 0 || s > rival_score) {
      rival = static_cast<int>(p);
      rival_score = s;
    }
  }
  if (rival < 0) return 0.0;
  const double loss = rival_score + margin - gold_score;
  if (loss <= 0.0) return 0.0;
  if (grads != nullptr) {
    trie.AddUpstream(paths.paths[rival], 1.0);
    trie.AddUpstream(paths.paths[paths.gold], -1.0);
    trie.Backward(params, grads);
  }
  return loss;
}

BeamLoss GlobalBeamLossAndGrad(const Model &model, const Parameters &params,
                               const Example &example, int beam_size,
                               Gradients *grads) {
  PathSet set = BeamPathSet(model, params, example, beam_size);
  BeamLoss out;
  out.fallout_step = set.fallout_step;
  out.num_paths = static_cast<int>(set.paths.size());
  out.loss = PathSetLossAndGrad(model, params, example.input, set, grads);
  return out;
}

BeamLoss HingeLossAndGrad(const Model &model, const Parameters &params,
                          const Example &example, int beam_size, double margin,
                          Gradients *grads) {
  PathSet set = BeamPathSet(model, params, example, beam_size);
  BeamLoss out;
  out.fallout_step = set.fallout_step;
  out.num_paths = static_cast<int>(set.paths.size());
  out.loss = PathSetHingeLossAndGrad(model, params, example.input, set, margin,
                                     grads);
  return out;
}

absl::string_view TrainStageName(TrainStage stage) {
  return stage == TrainStage::kLocal ? "local" : "global";
}

absl::StatusOr<TrainStage> ParseTrainStage(absl::string_view name) {
  if (name == "local") return TrainStage::kLocal;
  if (name == "global") return TrainStage::kGlobal;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown training stage '", name, "'"));
}

absl::string_view LossKindName(LossKind loss) {
  return loss == LossKind::kCrf ? "crf" : "hinge";
}

absl::StatusOr<LossKind> ParseLossKind(absl::string_view name) {
  if (name == "crf") return LossKind::kCrf;
  if (name == "hinge") return LossKind::kHinge;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown loss '", name, "' (expected crf or hinge)"));
}

absl::Status TrainConfig::Validate() const {
  if (stage == TrainStage::kLocal && loss == LossKind::kHinge) {
    return absl::InvalidArgumentError(
        "the local stage trains -ln p_L only; hinge needs the global stage");
  }
  if (beam_size < 1) return absl::InvalidArgumentError("beam must be >= 1");
  if (epochs < 0) return absl::InvalidArgumentError("epochs must be >= 0");
  if (patience < 0) return absl::InvalidArgumentError("patience must be >= 0");
  if (batch_size < 1) {
    return absl::InvalidArgumentError("batch_size must be >= 1");
  }
  if (eval_beam < 0) return absl::InvalidArgumentError("eval_beam must be >= 0");
  if (!(optimizer.learning_rate > 0.0) || optimizer.momentum < 0.0 ||
      optimizer.momentum >= 1.0 || !(optimizer.decay_rate > 0.0)) {
    return absl::InvalidArgumentError(
        "need learning_rate > 0, 0 <= momentum < 1 and decay_rate > 0");
  }
  return absl::OkStatus();
}

std::string EpochRecord::ToLogLine() const {
  std::string line = absl::StrFormat(
      "stage=%s epoch=%d loss=%.6f metric=%s steps=%d lr=%.6g",
      TrainStageName(stage), epoch, loss,
      metric ? absl::StrFormat("%.2f", *metric) : std::string("-"), steps,
      learning_rate);
  if (stage == TrainStage::kGlobal) {
    std::vector<std::string> parts;
    for (const auto &[step, count] : fallout) {
      if (step > 0) parts.push_back(absl::StrCat(step, ":", count));
    }
    auto survived = fallout.find(0);
    parts.push_back(absl::StrCat(
        "none:", survived == fallout.end() ? 0 : survived->second));
    absl::StrAppend(&line, " fallout=", absl::StrJoin(parts, ","));
  }
  return line;
}

DecodeOptions HeldoutDecodeOptions(const TrainConfig &config) {
  DecodeOptions options;
  if (config.stage == TrainStage::kLocal) {
    options.mode = NormalizationMode::kLocal;
    options.beam_size = config.eval_beam > 0 ? config.eval_beam : 1;
  } else {
    options.mode = NormalizationMode::kGlobal;
    options.beam_size = config.eval_beam > 0 ? config.eval_beam
                                             : config.beam_size;
  }
  options.use_averaged = true;
  return options;
}

absl::StatusOr<Metrics> EvaluateExamples(const Model &model,
                                         std::span<const Example> examples,
                                         const DecodeOptions &options,
                                         const EvalOptions &eval_options,
                                         int threads) {
  std::vector<Input> inputs;
  std::vector<Annotation> gold;
  for (const Example &ex : examples) {
    inputs.push_back(ex.input);
    gold.push_back(ex.gold);
  }
  std::vector<Decoded> decoded = DecodeCorpus(model, inputs, options, threads);
  return EvaluateDecoded(inputs, gold, decoded, eval_options);
}

namespace {

// Seeded Fisher-Yates with a portable bounded draw.
void Shuffle(std::vector<int> &order, std::mt19937_64 &rng) {
  for (size_t i = order.size(); i > 1; --i) {
    const uint64_t bound = i;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t r;
    do {
      r = rng();
    } while (r >= limit);
    std::swap(order[i - 1], order[r % bound]);
  }
}

constexpr uint64_t kSoftmaxSeedSalt = 0x9e3779b97f4a7c15ULL;

}  // namespace

absl::StatusOr<TrainResult> Train(
    Model *model, std::span<const Example> train,
    std::span<const Example> heldout, const TrainConfig &config,
    const std::function<void(const EpochRecord &)> &on_epoch) {
  if (absl::Status s = config.Validate(); !s.ok()) return s;
  if (train.empty()) return absl::InvalidArgumentError("empty training set");
  {
    Gradients probe = Parameters::Zeros(model->network().shape());
    if (absl::Status s = RestrictTrainable(&probe, config.subset); !s.ok()) {
      return s;
    }
  }
  if (config.stage == TrainStage::kGlobal) {
    model->params() = model->averaged();
    model->params().ReinitializeSoftmax(config.seed ^ kSoftmaxSeedSalt);
    model->averaged() = model->params();
  }

  Parameters &params = model->params();
  Parameters &averaged = model->averaged();
  AveragedSgd optimizer(params, config.optimizer, config.subset);
  Gradients grads = params;
  grads.SetZero();
  std::mt19937_64 rng(config.seed);
  std::vector<int> order(train.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  const DecodeOptions decode = HeldoutDecodeOptions(config);

  TrainResult result;
  std::optional<Parameters> best_params;
  std::optional<Parameters> best_averaged;
  int stale = 0;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    Shuffle(order, rng);
    EpochRecord record;
    record.stage = config.stage;
    record.epoch = epoch;
    double loss_sum = 0.0;
    int in_batch = 0;
    auto flush = [&]() -> absl::Status {
      if (in_batch == 0) return absl::OkStatus();
      if (in_batch > 1) {
        for (std::span<double> t : grads.Tensors()) {
          for (double &g : t) g /= in_batch;
        }
      }
      absl::Status s = optimizer.Step(grads, &params, &averaged);
      grads.SetZero();
      in_batch = 0;
      return s;
    };
    for (int idx : order) {
      const Example &ex = train[idx];
      double loss = 0.0;
      if (config.stage == TrainStage::kLocal) {
        loss = LocalLossAndGrad(*model, params, ex, &grads);
      } else {
        BeamLoss beam =
            config.loss == LossKind::kCrf
                ? GlobalBeamLossAndGrad(*model, params, ex, config.beam_size,
                                        &grads)
                : HingeLossAndGrad(*model, params, ex, config.beam_size,
                                   config.margin, &grads);
        loss = beam.loss;
        ++record.fallout[beam.fallout_step.value_or(0)];
      }
      if (!std::isfinite(loss)) {
        return absl::InternalError(absl::StrCat(
            "training diverged: loss ", loss, " in epoch ", epoch));
      }
      loss_sum += loss;
      if (++in_batch == config.batch_size) {
        if (absl::Status s = flush(); !s.ok()) return s;
      }
    }
    if (absl::Status s = flush(); !s.ok()) return s;
    record.loss = loss_sum / static_cast<double>(train.size());
    record.steps = optimizer.steps();
    record.learning_rate = optimizer.CurrentLearningRate();
    if (!heldout.empty()) {
      absl::StatusOr<Metrics> m =
          EvaluateExamples(*model, heldout, decode, config.eval,
                           config.threads);
      if (!m.ok()) return m.status();
      record.metric = m->Primary();
    }
    result.log.push_back(record);
    if (on_epoch) on_epoch(record);
    model->metadata().epochs += 1;
    if (record.metric) {
      if (!result.best_metric || *record.metric > *result.best_metric) {
        result.best_metric = record.metric;
        result.best_epoch = epoch;
        best_params = params;
        best_averaged = averaged;
        stale = 0;
      } else if (config.patience > 0 && ++stale >= config.patience) {
        break;
      }
    } else {
      result.best_epoch = epoch;
    }
  }
  if (best_params) {
    params = std::move(*best_params);
    averaged = std::move(*best_averaged);
  }
  return result;
}

}  // namespace gntp
