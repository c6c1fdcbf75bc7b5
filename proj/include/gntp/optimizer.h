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

#ifndef GNTP_OPTIMIZER_H_
#define GNTP_OPTIMIZER_H_

#include <cstdint>

#include "absl/status/status.h"
#include "gntp/network.h"

namespace gntp {

struct OptimizerOptions {
  double learning_rate = 0.05;
  double momentum = 0.9;
  // eta_t = learning_rate * decay_rate^(t / decay_steps).
  double decay_rate = 0.96;
  int decay_steps = 1000;
};

// Averaged SGD with momentum:
//   v <- mu * v - eta_t * g;  theta <- theta + v;
//   avg <- avg + (theta - avg) / t   (t = steps taken, counted from 1).
// Tensors outside the trainable subset are never touched, so they stay
// bit-identical in both the raw and the averaged parameters.
class AveragedSgd {
 public:
  AveragedSgd(const Parameters &params, OptimizerOptions options,
              TrainableSubset subset = TrainableSubset::kFull);

  // Fails without modifying anything when a gradient entry is not finite.
  absl::Status Step(const Gradients &grads, Parameters *params,
                    Parameters *averaged);

  double CurrentLearningRate() const;
  int64_t steps() const { return steps_; }
  const Parameters &velocity() const { return velocity_; }
  const OptimizerOptions &options() const { return options_; }

 private:
  OptimizerOptions options_;
  TrainableSubset subset_;
  Parameters velocity_;
  int64_t steps_ = 0;
};

}  // namespace gntp

#endif  // GNTP_OPTIMIZER_H_
