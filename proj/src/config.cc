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

#include "gntp/config.h"

#include <algorithm>
#include <utility>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace gntp {

FeatureTemplate DefaultFeatureTemplate(TaskKind task) {
  std::string text;
  switch (task) {
    case TaskKind::kTagging:
      text =
          "group name=words source=token at=-3,-2,-1,0,1,2,3 dim=32\n"
          "group name=chars source=chars at=-1,0,1 max_ngram=3 dim=16\n"
          "group name=history source=history at=1,2,3,4 dim=8\n";
      break;
    case TaskKind::kParsing:
      text =
          "group name=words source=parser column=form "
          "at=s0,s1,s2,b0,b1,b2,s0.l1,s0.r1,s1.l1,s1.r1 dim=32\n"
          "group name=tags source=parser column=tag "
          "at=s0,s1,s2,b0,b1,b2,s0.l1,s0.r1,s1.l1,s1.r1 dim=16\n"
          "group name=labels source=parser column=label "
          "at=s0.l1,s0.r1,s1.l1,s1.r1 dim=16\n";
      break;
    case TaskKind::kCompression:
      text =
          "group name=words source=token at=-3,-2,-1,0,1,2,3 dim=32\n"
          "group name=history source=history at=1,2,3,4 dim=8\n";
      break;
  }
  absl::StatusOr<FeatureTemplate> parsed = FeatureTemplate::Parse(text);
  return parsed.ok() ? *parsed : FeatureTemplate{};
}

std::vector<int> DefaultHidden(TaskKind task) {
  switch (task) {
    case TaskKind::kTagging:
      return {256};
    case TaskKind::kParsing:
      return {1024, 1024};
    case TaskKind::kCompression:
      return {400};
  }
  return {256};
}

namespace {

std::string FormatDouble(double v) {
  std::string s = absl::StrFormat("%.15g", v);
  double back = 0.0;
  if (absl::SimpleAtod(s, &back) && back == v) return s;
  return absl::StrFormat("%.17g", v);
}

absl::Status BadValue(absl::string_view key, absl::string_view value) {
  return absl::InvalidArgumentError(
      absl::StrCat("bad value '", value, "' for config key '", key, "'"));
}

absl::Status ParseInt(absl::string_view key, absl::string_view value,
                      int *out) {
  if (!absl::SimpleAtoi(value, out)) return BadValue(key, value);
  return absl::OkStatus();
}

absl::Status ParseDouble(absl::string_view key, absl::string_view value,
                         double *out) {
  if (!absl::SimpleAtod(value, out)) return BadValue(key, value);
  return absl::OkStatus();
}

// Applies one training key to one stage.
absl::Status ApplyStageKey(absl::string_view key, absl::string_view value,
                           TrainConfig *c) {
  if (key == "beam") return ParseInt(key, value, &c->beam_size);
  if (key == "epochs") return ParseInt(key, value, &c->epochs);
  if (key == "patience") return ParseInt(key, value, &c->patience);
  if (key == "batch_size") return ParseInt(key, value, &c->batch_size);
  if (key == "eval_beam") return ParseInt(key, value, &c->eval_beam);
  if (key == "margin") return ParseDouble(key, value, &c->margin);
  if (key == "learning_rate") {
    return ParseDouble(key, value, &c->optimizer.learning_rate);
  }
  if (key == "momentum") return ParseDouble(key, value, &c->optimizer.momentum);
  if (key == "decay_rate") {
    return ParseDouble(key, value, &c->optimizer.decay_rate);
  }
  if (key == "decay_steps") {
    return ParseInt(key, value, &c->optimizer.decay_steps);
  }
  if (key == "loss") {
    absl::StatusOr<LossKind> loss = ParseLossKind(value);
    if (!loss.ok()) return loss.status();
    c->loss = *loss;
    return absl::OkStatus();
  }
  if (key == "trainable") {
    absl::StatusOr<TrainableSubset> subset = ParseTrainableSubset(value);
    if (!subset.ok()) return subset.status();
    c->subset = *subset;
    return absl::OkStatus();
  }
  if (key == "punctuation") {
    if (value == "default") {
      c->eval.punctuation_tags = EvalOptions{}.punctuation_tags;
    } else if (value == "none") {
      c->eval.punctuation_tags.clear();
    } else {
      c->eval.punctuation_tags.clear();
      for (absl::string_view tag : absl::StrSplit(value, ',')) {
        if (!tag.empty()) c->eval.punctuation_tags.emplace(tag);
      }
    }
    return absl::OkStatus();
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown config key '", key, "'"));
}

bool IsStageKey(absl::string_view key) {
  static const char *kKeys[] = {
      "beam",       "epochs",        "patience",  "batch_size",
      "eval_beam",  "margin",        "loss",      "trainable",
      "momentum",   "learning_rate", "decay_rate", "decay_steps",
      "punctuation"};
  return std::any_of(std::begin(kKeys), std::end(kKeys),
                     [&](const char *k) { return key == k; });
}

std::string JoinInts(const std::vector<int> &v) { return absl::StrJoin(v, ","); }

std::string StageText(absl::string_view prefix, const TrainConfig &c) {
  std::string punct = "none";
  if (c.eval.punctuation_tags == EvalOptions{}.punctuation_tags) {
    punct = "default";
  } else if (!c.eval.punctuation_tags.empty()) {
    punct = absl::StrJoin(c.eval.punctuation_tags, ",");
  }
  std::string out;
  auto line = [&](absl::string_view key, absl::string_view value) {
    absl::StrAppend(&out, prefix, ".", key, " = ", value, "\n");
  };
  line("beam", absl::StrCat(c.beam_size));
  if (c.stage == TrainStage::kGlobal) line("loss", LossKindName(c.loss));
  line("margin", FormatDouble(c.margin));
  line("trainable", TrainableSubsetName(c.subset));
  line("epochs", absl::StrCat(c.epochs));
  line("patience", absl::StrCat(c.patience));
  line("batch_size", absl::StrCat(c.batch_size));
  line("eval_beam", absl::StrCat(c.eval_beam));
  line("learning_rate", FormatDouble(c.optimizer.learning_rate));
  line("momentum", FormatDouble(c.optimizer.momentum));
  line("decay_rate", FormatDouble(c.optimizer.decay_rate));
  line("decay_steps", absl::StrCat(c.optimizer.decay_steps));
  line("punctuation", punct);
  return out;
}

}  // namespace

absl::StatusOr<ExperimentConfig> ExperimentConfig::Parse(
    absl::string_view text, const std::vector<std::string> &overrides) {
  struct Entry {
    std::string key;
    std::string value;
    std::string where;
  };
  std::vector<Entry> entries;
  std::string group_text;
  int number = 0;
  for (absl::string_view raw : absl::StrSplit(text, '\n')) {
    ++number;
    absl::string_view line = absl::StripAsciiWhitespace(raw);
    if (line.empty() || line.front() == '#') continue;
    if (absl::StartsWith(line, "group ") || line == "group") {
      absl::StrAppend(&group_text, line, "\n");
      continue;
    }
    std::pair<absl::string_view, absl::string_view> kv =
        absl::StrSplit(line, absl::MaxSplits('=', 1));
    if (line.find('=') == absl::string_view::npos) {
      return absl::InvalidArgumentError(
          absl::StrCat("config line ", number, ": expected key = value"));
    }
    entries.push_back({std::string(absl::StripAsciiWhitespace(kv.first)),
                       std::string(absl::StripAsciiWhitespace(kv.second)),
                       absl::StrCat("config line ", number)});
  }
  for (const std::string &o : overrides) {
    if (o.find('=') == std::string::npos) {
      return absl::InvalidArgumentError(
          absl::StrCat("override '", o, "': expected key=value"));
    }
    std::pair<std::string, std::string> kv =
        absl::StrSplit(o, absl::MaxSplits('=', 1));
    entries.push_back({std::string(absl::StripAsciiWhitespace(kv.first)),
                       std::string(absl::StripAsciiWhitespace(kv.second)),
                       absl::StrCat("override '", o, "'")});
  }

  ExperimentConfig config;
  for (const Entry &e : entries) {
    if (e.key != "task") continue;
    absl::StatusOr<TaskKind> task = ParseTaskKind(e.value);
    if (!task.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat(e.where, ": ", task.status().message()));
    }
    config.task = *task;
  }
  config.hidden = DefaultHidden(config.task);
  config.local.stage = TrainStage::kLocal;
  config.global.stage = TrainStage::kGlobal;
  std::optional<int> lookahead;
  for (const Entry &e : entries) {
    absl::Status status;
    const std::string &key = e.key;
    const std::string &value = e.value;
    if (key == "task") {
      continue;
    } else if (key == "hidden") {
      config.hidden.clear();
      for (absl::string_view part : absl::StrSplit(value, ',')) {
        int h = 0;
        if (!absl::SimpleAtoi(part, &h) || h < 1) {
          status = BadValue(key, value);
          break;
        }
        config.hidden.push_back(h);
      }
    } else if (key == "activation") {
      absl::StatusOr<Activation> a = ParseActivation(value);
      if (a.ok()) {
        config.activation = *a;
      } else {
        status = a.status();
      }
    } else if (key == "seed") {
      if (!absl::SimpleAtoi(value, &config.seed)) status = BadValue(key, value);
    } else if (key == "stages") {
      if (value == "local") {
        config.run_local = true;
        config.run_global = false;
      } else if (value == "global") {
        config.run_local = false;
        config.run_global = true;
      } else if (value == "local+global") {
        config.run_local = config.run_global = true;
      } else {
        status = BadValue(key, value);
      }
    } else if (key == "lookahead") {
      int k = kUnlimitedLookahead;
      if (value != "all" && (!absl::SimpleAtoi(value, &k) || k < 0)) {
        status = BadValue(key, value);
      }
      lookahead = k;
    } else if (absl::StartsWith(key, "local.") ||
               absl::StartsWith(key, "global.")) {
      const bool local = absl::StartsWith(key, "local.");
      absl::string_view stage_key =
          absl::string_view(key).substr(local ? 6 : 7);
      status = ApplyStageKey(stage_key, value,
                             local ? &config.local : &config.global);
    } else if (key == "loss") {
      // The local stage always minimizes -ln p_L.
      status = ApplyStageKey(key, value, &config.global);
    } else if (IsStageKey(key)) {
      status = ApplyStageKey(key, value, &config.local);
      if (status.ok()) status = ApplyStageKey(key, value, &config.global);
    } else {
      status = absl::InvalidArgumentError(
          absl::StrCat("unknown config key '", key, "'"));
    }
    if (!status.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat(e.where, ": ", status.message()));
    }
  }
  if (config.hidden.empty() || config.hidden.size() > 2) {
    return absl::InvalidArgumentError("hidden needs one or two widths");
  }
  if (group_text.empty()) {
    config.features = DefaultFeatureTemplate(config.task);
  } else {
    absl::StatusOr<FeatureTemplate> features =
        FeatureTemplate::Parse(group_text);
    if (!features.ok()) return features.status();
    config.features = std::move(*features);
  }
  if (lookahead) config.features.SetLookahead(*lookahead);
  config.local.seed = config.seed;
  config.global.seed = config.seed;
  if (absl::Status s = config.local.Validate(); !s.ok()) return s;
  if (absl::Status s = config.global.Validate(); !s.ok()) return s;
  return config;
}

std::string ExperimentConfig::ToString() const {
  std::string out;
  absl::StrAppend(&out, "task = ", TaskKindName(task), "\n");
  absl::StrAppend(&out, "hidden = ", JoinInts(hidden), "\n");
  absl::StrAppend(&out, "activation = ", ActivationName(activation), "\n");
  absl::StrAppend(&out, "seed = ", seed, "\n");
  absl::StrAppend(&out, "stages = ",
                  run_local && run_global ? "local+global"
                  : run_local             ? "local"
                                          : "global",
                  "\n");
  absl::StrAppend(&out, StageText("local", local));
  absl::StrAppend(&out, StageText("global", global));
  absl::StrAppend(&out, features.ToString());
  return out;
}

}  // namespace gntp
