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

#ifndef GNTP_CONFIG_H_
#define GNTP_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "gntp/features.h"
#include "gntp/network.h"
#include "gntp/training.h"
#include "gntp/transition_system.h"

namespace gntp {

// An experiment described by one text file of `key = value` lines and
// `group ...` feature lines ('#' starts a comment). Unprefixed training keys
// apply to both stages; `local.` and `global.` prefixes override one stage.
//
//   task = tagging                 tagging | parsing | compression
//   hidden = 64                    one or two comma-separated widths
//   activation = relu              relu | tanh
//   seed = 1
//   stages = local+global          local | global | local+global
//   beam = 8
//   loss = crf                     crf | hinge (global stage)
//   margin = 1
//   trainable = full               theta_d | w2_theta_d | w1_w2_theta_d | full
//   epochs = 10
//   patience = 0
//   batch_size = 1
//   eval_beam = 0
//   learning_rate = 0.05
//   momentum = 0.9
//   decay_rate = 0.96
//   decay_steps = 1000
//   lookahead = all                overrides every feature group
//   punctuation = default          default | none | comma-separated tags
//   group name=words source=token at=-1,0,1 dim=16
//
// Without group lines a task-specific default template is used.
struct ExperimentConfig {
  TaskKind task = TaskKind::kTagging;
  FeatureTemplate features;
  std::vector<int> hidden;
  Activation activation = Activation::kRelu;
  uint64_t seed = 1;
  bool run_local = true;
  bool run_global = true;
  TrainConfig local;
  TrainConfig global;

  // Applies `overrides` ("key=value" or "key = value") after `text`.
  static absl::StatusOr<ExperimentConfig> Parse(
      absl::string_view text, const std::vector<std::string> &overrides = {});

  // Canonical text; parsing it yields an equal configuration.
  std::string ToString() const;
};

FeatureTemplate DefaultFeatureTemplate(TaskKind task);
std::vector<int> DefaultHidden(TaskKind task);

}  // namespace gntp

#endif  // GNTP_CONFIG_H_
