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

// Command-line front end: train, decode, eval, gradcheck, labbias, synth.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or validation error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "gntp/config.h"
#include "gntp/corpus_io.h"
#include "gntp/decoder.h"
#include "gntp/gradient_check.h"
#include "gntp/label_bias.h"
#include "gntp/model_io.h"
#include "gntp/synthetic.h"
#include "gntp/training.h"

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

// Validation problems (bad input, bad config) are usage errors; everything
// else is a runtime failure.
int Report(const absl::Status &status) {
  std::cerr << "error: " << status.message() << "\n";
  switch (status.code()) {
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kUnimplemented:
    case absl::StatusCode::kDataLoss:
      return kUsage;
    default:
      return kFailure;
  }
}

struct TrainArgs {
  std::string config;
  std::string train;
  std::string heldout;
  std::string out;
  std::string log;
  std::vector<std::string> overrides;
  int threads = 0;
};

int RunTrain(const TrainArgs &args) {
  absl::StatusOr<std::string> text = gntp::ReadFile(args.config);
  if (!text.ok()) return Report(text.status());
  absl::StatusOr<gntp::ExperimentConfig> config =
      gntp::ExperimentConfig::Parse(*text, args.overrides);
  if (!config.ok()) return Report(config.status());
  config->local.threads = config->global.threads = args.threads;

  absl::StatusOr<gntp::Corpus> train =
      gntp::ReadCorpus(args.train, config->task);
  if (!train.ok()) return Report(train.status());
  if (train->sentences.empty()) {
    return Report(absl::InvalidArgumentError(
        absl::StrCat(args.train, " contains no sentences")));
  }
  gntp::Corpus heldout;
  if (!args.heldout.empty()) {
    absl::StatusOr<gntp::Corpus> h =
        gntp::ReadCorpus(args.heldout, config->task);
    if (!h.ok()) return Report(h.status());
    heldout = std::move(*h);
  }

  const std::vector<gntp::Input> inputs = train->Inputs();
  absl::StatusOr<gntp::Model> model = gntp::Model::Create(
      config->task, gntp::CollectLabels(*train), config->features,
      config->hidden, config->activation, inputs, config->seed);
  if (!model.ok()) return Report(model.status());
  model->metadata().config_text = config->ToString();

  std::vector<std::string> warnings;
  absl::StatusOr<std::vector<gntp::Example>> train_examples =
      gntp::MakeExamples(model->system(), inputs, train->Annotations(),
                         &warnings);
  if (!train_examples.ok()) return Report(train_examples.status());
  absl::StatusOr<std::vector<gntp::Example>> heldout_examples =
      gntp::MakeExamples(model->system(), heldout.Inputs(),
                         heldout.Annotations(), &warnings);
  if (!heldout_examples.ok()) return Report(heldout_examples.status());
  for (const std::string &w : warnings) std::cerr << "warning: " << w << "\n";

  std::ofstream log_file;
  if (!args.log.empty()) {
    log_file.open(args.log, std::ios::trunc);
    if (!log_file) {
      return Report(absl::InvalidArgumentError(
          absl::StrCat("cannot write ", args.log)));
    }
  }
  auto on_epoch = [&](const gntp::EpochRecord &record) {
    const std::string line = record.ToLogLine();
    std::cout << line << std::endl;
    if (log_file.is_open()) log_file << line << "\n";
  };
  for (const gntp::TrainConfig *stage : {&config->local, &config->global}) {
    const bool run = stage->stage == gntp::TrainStage::kLocal
                         ? config->run_local
                         : config->run_global;
    if (!run) continue;
    absl::StatusOr<gntp::TrainResult> result = gntp::Train(
        &*model, *train_examples, *heldout_examples, *stage, on_epoch);
    if (!result.ok()) return Report(result.status());
    if (result->best_metric) {
      std::cout << absl::StrFormat("stage=%s best_epoch=%d best_metric=%.2f\n",
                                   gntp::TrainStageName(stage->stage),
                                   result->best_epoch, *result->best_metric);
    }
  }
  if (absl::Status s = gntp::SaveModel(*model, args.out); !s.ok()) {
    return Report(s);
  }
  return kOk;
}

struct DecodeArgs {
  std::string model;
  std::string input;
  std::string output;
  std::string scores;
  std::string task;
  int beam = 1;
  std::string mode = "local";
  int threads = 0;
};

int RunDecode(const DecodeArgs &args) {
  absl::StatusOr<gntp::Model> model = gntp::LoadModel(args.model);
  if (!model.ok()) return Report(model.status());
  const gntp::TaskKind task = model->system().kind();
  if (!args.task.empty()) {
    absl::StatusOr<gntp::TaskKind> wanted = gntp::ParseTaskKind(args.task);
    if (!wanted.ok()) return Report(wanted.status());
    if (*wanted != task) {
      return Report(absl::InvalidArgumentError(absl::StrCat(
          "model was trained for ", gntp::TaskKindName(task), ", not ",
          args.task)));
    }
  }
  absl::StatusOr<gntp::NormalizationMode> mode =
      gntp::ParseNormalizationMode(args.mode);
  if (!mode.ok()) return Report(mode.status());
  if (args.beam < 1) {
    return Report(absl::InvalidArgumentError("--beam must be >= 1"));
  }
  absl::StatusOr<gntp::Corpus> corpus =
      gntp::ReadCorpus(args.input, task, /*require_gold=*/false);
  if (!corpus.ok()) return Report(corpus.status());
  const std::vector<gntp::Input> inputs = corpus->Inputs();

  gntp::DecodeOptions options;
  options.beam_size = args.beam;
  options.mode = *mode;
  const auto start = std::chrono::steady_clock::now();
  std::vector<gntp::Decoded> decoded =
      gntp::DecodeCorpus(*model, inputs, options, args.threads);
  const double seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  std::vector<gntp::Annotation> predicted;
  std::string score_text;
  for (const gntp::Decoded &d : decoded) {
    predicted.push_back(d.structure);
    absl::StrAppend(&score_text, absl::StrFormat("%.17g\n", d.sequence.raw_score));
  }
  if (absl::Status s =
          gntp::WritePredictions(task, inputs, predicted, args.output);
      !s.ok()) {
    return Report(s);
  }
  if (!args.scores.empty()) {
    if (absl::Status s = gntp::WriteFile(args.scores, score_text); !s.ok()) {
      return Report(s);
    }
  }
  std::cout << absl::StrFormat(
      "decoded %d sentences in %.3f s (%.1f sentences/sec)\n", inputs.size(),
      seconds, seconds > 0 ? inputs.size() / seconds : 0.0);
  return kOk;
}

struct EvalArgs {
  std::string gold;
  std::string pred;
  std::string task;
  std::string punctuation = "default";
};

int RunEval(const EvalArgs &args) {
  absl::StatusOr<gntp::TaskKind> task = gntp::ParseTaskKind(args.task);
  if (!task.ok()) return Report(task.status());
  absl::StatusOr<gntp::Corpus> gold = gntp::ReadCorpus(args.gold, *task);
  if (!gold.ok()) return Report(gold.status());
  absl::StatusOr<gntp::Corpus> pred = gntp::ReadCorpus(args.pred, *task);
  if (!pred.ok()) return Report(pred.status());
  if (gold->sentences.size() != pred->sentences.size()) {
    return Report(absl::InvalidArgumentError(absl::StrCat(
        "gold has ", gold->sentences.size(), " sentences, predictions have ",
        pred->sentences.size())));
  }
  gntp::EvalOptions options;
  if (args.punctuation == "none") {
    options.punctuation_tags.clear();
  } else if (args.punctuation != "default") {
    options.punctuation_tags.clear();
    for (absl::string_view t : absl::StrSplit(args.punctuation, ',')) {
      options.punctuation_tags.emplace(t);
    }
  }
  gntp::Metrics total;
  total.kind = *task;
  for (size_t i = 0; i < gold->sentences.size(); ++i) {
    const gntp::Sentence &g = gold->sentences[i];
    const gntp::Sentence &p = pred->sentences[i];
    if (g.input.size() != p.input.size()) {
      return Report(absl::InvalidArgumentError(absl::StrCat(
          "sentence ", i + 1, ": gold has ", g.input.size(),
          " tokens, prediction has ", p.input.size())));
    }
    for (int t = 0; t < g.input.size(); ++t) {
      if (g.input.tokens[t].form != p.input.tokens[t].form) {
        return Report(absl::InvalidArgumentError(absl::StrCat(
            "sentence ", i + 1, " token ", t + 1, ": forms differ ('",
            g.input.tokens[t].form, "' vs '", p.input.tokens[t].form, "')")));
      }
    }
    absl::StatusOr<gntp::Metrics> m =
        gntp::Evaluate(g.input, p.gold, g.gold, options);
    if (!m.ok()) return Report(m.status());
    total.Add(*m);
  }
  switch (*task) {
    case gntp::TaskKind::kTagging:
      std::cout << absl::StrFormat("token_accuracy %.2f\n",
                                   total.TokenAccuracy());
      break;
    case gntp::TaskKind::kParsing:
      std::cout << absl::StrFormat("UAS %.2f\nLAS %.2f\n", total.Uas(),
                                   total.Las());
      break;
    case gntp::TaskKind::kCompression:
      std::cout << absl::StrFormat("precision %.2f\nrecall %.2f\nF1 %.2f\n",
                                   100.0 * total.Precision(),
                                   100.0 * total.Recall(), 100.0 * total.F1());
      break;
  }
  std::cout << absl::StrFormat("sentence_accuracy %.2f\n",
                               total.SentenceAccuracy());
  return kOk;
}

struct GradcheckArgs {
  std::string task = "tagging";
  uint64_t seed = 1;
  int layers = 1;
  int beam = 2;
  double margin = 1.0;
  double tolerance = 1e-4;
  double step = 1e-4;
  int sentences = 2;
};

int RunGradcheck(const GradcheckArgs &args) {
  absl::StatusOr<gntp::TaskKind> task = gntp::ParseTaskKind(args.task);
  if (!task.ok()) return Report(task.status());
  if (args.layers < 1 || args.layers > 2) {
    return Report(absl::InvalidArgumentError("--layers must be 1 or 2"));
  }
  gntp::SynthSpec spec;
  spec.size = args.sentences;
  spec.seed = args.seed;
  std::string features;
  switch (*task) {
    case gntp::TaskKind::kTagging:
      spec.generator = "separable-tagging";
      features =
          "group name=words source=token at=-1,0 dim=2\n"
          "group name=chars source=chars at=0 max_ngram=2 dim=2\n"
          "group name=history source=history at=1 dim=2\n";
      break;
    case gntp::TaskKind::kParsing:
      spec.generator = "projective-trees";
      features =
          "group name=tags source=parser column=tag at=s0,s1,b0 dim=2\n"
          "group name=labels source=parser column=label at=s0.l1 dim=2\n";
      break;
    case gntp::TaskKind::kCompression:
      spec.generator = "keep-drop";
      features =
          "group name=words source=token at=0,1 dim=2\n"
          "group name=history source=history at=1 dim=2\n";
      break;
  }
  absl::StatusOr<gntp::Corpus> corpus = gntp::GenerateSynthetic(spec);
  if (!corpus.ok()) return Report(corpus.status());
  absl::StatusOr<gntp::FeatureTemplate> tmpl =
      gntp::FeatureTemplate::Parse(features);
  if (!tmpl.ok()) return Report(tmpl.status());
  const std::vector<gntp::Input> inputs = corpus->Inputs();
  std::vector<int> hidden(args.layers, 3);
  absl::StatusOr<gntp::Model> model = gntp::Model::Create(
      *task, gntp::CollectLabels(*corpus), *tmpl, hidden,
      gntp::Activation::kRelu, inputs, args.seed);
  if (!model.ok()) return Report(model.status());
  absl::StatusOr<std::vector<gntp::Example>> examples = gntp::MakeExamples(
      model->system(), inputs, corpus->Annotations(), nullptr);
  if (!examples.ok()) return Report(examples.status());
  gntp::GradientCheckOptions options;
  options.step = args.step;
  options.tolerance = args.tolerance;
  std::cout << absl::StrFormat("task=%s parameters=%d sentences=%d beam=%d\n",
                               args.task, model->params().size(),
                               examples->size(), args.beam);
  bool ok = true;
  for (const gntp::LossCheck &check :
       gntp::CheckAllLosses(*model, *examples, model->params(), args.beam,
                            args.margin, options)) {
    const gntp::GradientCheckReport &r = check.report;
    std::cout << absl::StrFormat(
        "%-12s max_rel_error=%.3e worst=%s[%d] analytic=%.6g numeric=%.6g "
        "skipped=%d %s\n",
        check.loss, r.max_relative_error, r.worst_tensor, r.worst_index,
        r.worst_analytic, r.worst_numeric, check.skipped,
        r.passed ? "PASS" : "FAIL");
    ok = ok && r.passed;
  }
  return ok ? kOk : kFailure;
}

struct LabbiasArgs {
  std::string alphas = "0,1,2,5,10,20";
  int k = 0;
  int trials = 10000;
  uint64_t seed = 1;
};

int RunLabbias(const LabbiasArgs &args) {
  std::vector<double> alphas;
  for (absl::string_view a : absl::StrSplit(args.alphas, ',')) {
    double v;
    if (!absl::SimpleAtod(a, &v)) {
      return Report(absl::InvalidArgumentError(
          absl::StrCat("bad alpha '", a, "'")));
    }
    alphas.push_back(v);
  }
  if (args.k < 0 || args.trials < 0) {
    return Report(absl::InvalidArgumentError("--k and --trials must be >= 0"));
  }
  const gntp::ToyDataset data = gntp::LookaheadFamily(args.k);
  absl::StatusOr<std::vector<gntp::LabelBiasRow>> rows =
      gntp::LabelBiasTable(alphas, args.k);
  if (!rows.ok()) return Report(rows.status());
  const auto &[x1, d1] = data.sentences[0];
  const auto &[x2, d2] = data.sentences[1];
  const std::string p1 = absl::StrCat("p_G(", absl::StrJoin(d1, " "), " | ",
                                      absl::StrJoin(x1, " "), ")");
  const std::string p2 = absl::StrCat("p_G(", absl::StrJoin(d2, " "), " | ",
                                      absl::StrJoin(x2, " "), ")");
  std::cout << absl::StrFormat("k=%d length=%d\n", args.k, x1.size());
  std::cout << absl::StrFormat("%-8s  %-*s  %-*s  %s\n", "alpha",
                               int(p1.size()), p1, int(p2.size()), p2, "sum");
  for (const gntp::LabelBiasRow &row : *rows) {
    std::cout << absl::StrFormat("%-8g  %-*.9f  %-*.9f  %.9f\n", row.alpha,
                                 int(p1.size()), row.p_first, int(p2.size()),
                                 row.p_second, row.sum());
  }
  if (args.trials > 0) {
    const gntp::ToyModel vocab = gntp::ToyModel::FromDataset(data, 1.0);
    absl::StatusOr<gntp::AuditReport> audit = gntp::AuditLocalBound(
        gntp::RandomLocalModels(static_cast<int>(vocab.tags.size())), data,
        vocab, args.trials, args.seed);
    if (!audit.ok()) return Report(audit.status());
    std::cout << absl::StrFormat(
        "local audit: trials=%d max_sum=%.12f bound=%s\n", audit->trials,
        audit->max_sum, audit->bound_holds ? "holds" : "VIOLATED");
    if (!audit->bound_holds) return kFailure;
  }
  return kOk;
}

int RunSynth(const gntp::SynthSpec &spec, const std::string &out) {
  absl::StatusOr<gntp::Corpus> corpus = gntp::GenerateSynthetic(spec);
  if (!corpus.ok()) return Report(corpus.status());
  if (absl::Status s = gntp::WriteCorpus(*corpus, out); !s.ok()) {
    return Report(s);
  }
  return kOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Globally normalized transition-based structured prediction"};
  app.require_subcommand(1);

  TrainArgs train;
  CLI::App *train_cmd = app.add_subcommand("train", "train a model");
  train_cmd->add_option("--config", train.config, "experiment config file")
      ->required();
  train_cmd->add_option("--train", train.train, "training corpus")->required();
  train_cmd->add_option("--heldout", train.heldout,
                        "held-out corpus for early stopping");
  train_cmd->add_option("--out", train.out, "output model archive")
      ->required();
  train_cmd->add_option("--log", train.log, "training log file");
  train_cmd->add_option("--set", train.overrides,
                        "config override key=value (repeatable)");
  train_cmd->add_option("--threads", train.threads,
                        "threads for held-out decoding");

  DecodeArgs decode;
  CLI::App *decode_cmd = app.add_subcommand("decode", "decode a corpus");
  decode_cmd->add_option("--model", decode.model, "model archive")->required();
  decode_cmd->add_option("--input", decode.input, "input corpus")->required();
  decode_cmd->add_option("--output", decode.output, "predictions file")
      ->required();
  decode_cmd->add_option("--scores", decode.scores,
                         "write each sentence's total raw score");
  decode_cmd->add_option("--task", decode.task, "expected task kind");
  decode_cmd->add_option("--beam", decode.beam, "beam size")
      ->capture_default_str();
  decode_cmd->add_option("--mode", decode.mode, "local or global")
      ->capture_default_str();
  decode_cmd->add_option("--threads", decode.threads,
                         "decoding threads (0 = all cores)");

  EvalArgs eval;
  CLI::App *eval_cmd = app.add_subcommand("eval", "score predictions");
  eval_cmd->add_option("--gold", eval.gold, "gold corpus")->required();
  eval_cmd->add_option("--pred", eval.pred, "predictions")->required();
  eval_cmd->add_option("--task", eval.task, "task kind")->required();
  eval_cmd->add_option("--punctuation", eval.punctuation,
                       "tags excluded from UAS/LAS: default, none or a "
                       "comma-separated list")
      ->capture_default_str();

  GradcheckArgs grad;
  CLI::App *grad_cmd =
      app.add_subcommand("gradcheck", "check gradients of every loss");
  grad_cmd->add_option("--task", grad.task, "task kind")->capture_default_str();
  grad_cmd->add_option("--seed", grad.seed, "seed")->capture_default_str();
  grad_cmd->add_option("--layers", grad.layers, "hidden layers (1 or 2)")
      ->capture_default_str();
  grad_cmd->add_option("--beam", grad.beam, "beam size")->capture_default_str();
  grad_cmd->add_option("--margin", grad.margin, "hinge margin")
      ->capture_default_str();
  grad_cmd->add_option("--tolerance", grad.tolerance, "max relative error")
      ->capture_default_str();
  grad_cmd->add_option("--step", grad.step, "finite-difference step")
      ->capture_default_str();
  grad_cmd->add_option("--sentences", grad.sentences, "synthetic sentences")
      ->capture_default_str();

  LabbiasArgs lab;
  CLI::App *lab_cmd =
      app.add_subcommand("labbias", "label-bias demonstration");
  lab_cmd->add_option("--alphas", lab.alphas, "comma-separated alpha grid")
      ->capture_default_str();
  lab_cmd->add_option("--k", lab.k, "lookahead family index")
      ->capture_default_str();
  lab_cmd->add_option("--trials", lab.trials, "local models to audit")
      ->capture_default_str();
  lab_cmd->add_option("--seed", lab.seed, "audit seed")->capture_default_str();

  gntp::SynthSpec synth;
  std::string synth_out;
  CLI::App *synth_cmd =
      app.add_subcommand("synth", "generate a synthetic corpus");
  synth_cmd->add_option("--generator", synth.generator,
                        "separable-tagging, lookahead, projective-trees or "
                        "keep-drop")
      ->required();
  synth_cmd->add_option("--size", synth.size, "sentences (pairs for lookahead)")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "seed")->capture_default_str();
  synth_cmd->add_option("--k", synth.k, "lookahead k")->capture_default_str();
  synth_cmd->add_option("--offset", synth.offset, "first lookahead pair index")
      ->capture_default_str();
  synth_cmd->add_option("--out", synth_out, "output corpus")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (*train_cmd) return RunTrain(train);
  if (*decode_cmd) return RunDecode(decode);
  if (*eval_cmd) return RunEval(eval);
  if (*grad_cmd) return RunGradcheck(grad);
  if (*lab_cmd) return RunLabbias(lab);
  if (*synth_cmd) return RunSynth(synth, synth_out);
  return kUsage;
}
