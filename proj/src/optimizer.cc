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

#include "gntp/optimizer.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "gntp/check.h"

namespace gntp {

AveragedSgd::AveragedSgd(const Parameters &params, OptimizerOptions options,
                         TrainableSubset subset)
    : options_(options), subset_(subset), velocity_(params) {
  velocity_.SetZero();
}

double AveragedSgd::CurrentLearningRate() const {
  if (options_.decay_steps <= 0) return options_.learning_rate;
  return options_.learning_rate *
         std::pow(options_.decay_rate,
                  static_cast<double>(steps_) / options_.decay_steps);
}

absl::Status AveragedSgd::Step(const Gradients &grads, Parameters *params,
                               Parameters *averaged) {
  GNTP_CHECK(grads.SameShape(*params) && averaged->SameShape(*params),
             "optimizer shape mismatch");
  const std::vector<TensorInfo> infos = params->TensorInfos();
  const int layers = static_cast<int>(params->hidden_weights.size());
  const std::vector<std::span<const double>> g = grads.Tensors();
  for (size_t t = 0; t < g.size(); ++t) {
    if (!IsTrainable(infos[t], subset_, layers)) continue;
    for (size_t i = 0; i < g[t].size(); ++i) {
      if (!std::isfinite(g[t][i])) {
        return absl::InternalError(absl::StrCat(
            "non-finite gradient ", g[t][i], " in ", infos[t].name, "[", i,
            "] at step ", steps_ + 1));
      }
    }
  }
  const double eta = CurrentLearningRate();
  const double mu = options_.momentum;
  ++steps_;
  const double inv_t = 1.0 / static_cast<double>(steps_);
  std::vector<std::span<double>> theta = params->Tensors();
  std::vector<std::span<double>> avg = averaged->Tensors();
  std::vector<std::span<double>> v = velocity_.Tensors();
  for (size_t t = 0; t < g.size(); ++t) {
    if (!IsTrainable(infos[t], subset_, layers)) continue;
    for (size_t i = 0; i < g[t].size(); ++i) {
      v[t][i] = mu * v[t][i] - eta * g[t][i];
      theta[t][i] += v[t][i];
      avg[t][i] = steps_ == 1 ? theta[t][i]
                              : avg[t][i] + (theta[t][i] - avg[t][i]) * inv_t;
    }
  }
  return absl::OkStatus();
}

}  // namespace gntp
