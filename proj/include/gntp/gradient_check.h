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

#ifndef GNTP_GRADIENT_CHECK_H_
#define GNTP_GRADIENT_CHECK_H_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "gntp/model.h"
#include "gntp/network.h"
#include "gntp/training.h"

namespace gntp {

// A scalar loss of the parameters. Evaluate adds the analytic gradient to
// `grads` when it is not null.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual double Evaluate(const Parameters &params, Gradients *grads) const = 0;
};

// Wraps a callable as an Objective.
class FunctionObjective : public Objective {
 public:
  using Fn = std::function<double(const Parameters &, Gradients *)>;
  explicit FunctionObjective(Fn fn) : fn_(std::move(fn)) {}
  double Evaluate(const Parameters &params, Gradients *grads) const override {
    return fn_(params, grads);
  }

 private:
  Fn fn_;
};

struct GradientCheckOptions {
  double step = 1e-4;
  double tolerance = 1e-4;
  // Denominator floor for the relative error |a - n| / max(|a|, |n|, floor).
  double floor = 1e-6;
};

struct GradientCheckReport {
  size_t checked = 0;
  double max_relative_error = 0.0;
  std::string worst_tensor;
  size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  bool passed = true;
};

// Compares the analytic gradient with central differences for every
// coordinate of `params`.
GradientCheckReport CheckGradients(const Objective &objective,
                                   const Parameters &params,
                                   const GradientCheckOptions &options = {});

// Loss objectives over one example. The beam objectives freeze the path set
// found under the parameters they are built with.
FunctionObjective LocalObjective(const Model &model, const Example &example);
FunctionObjective FrozenBeamObjective(const Model &model,
                                      const Example &example,
                                      const Parameters &at, int beam_size);
FunctionObjective FrozenHingeObjective(const Model &model,
                                       const Example &example,
                                       const Parameters &at, int beam_size,
                                       double margin);

struct LossCheck {
  std::string loss;  // "local", "global-beam" or "hinge"
  GradientCheckReport report;
  int skipped = 0;  // examples left out because the loss has a kink there
};

// True when the frozen hinge at `params` has a unique best rival and its
// margin is not exactly zero, so the loss is differentiable there.
bool HingeIsSmooth(const Model &model, const Parameters &params,
                   const Example &example, int beam_size, double margin,
                   double gap = 1e-9);

// Checks all three losses on every example, summed over the examples.
// Hinge examples that are not smooth at `params` are skipped.
std::vector<LossCheck> CheckAllLosses(const Model &model,
                                      std::span<const Example> examples,
                                      const Parameters &params, int beam_size,
                                      double margin,
                                      const GradientCheckOptions &options = {});

}  // namespace gntp

#endif  // GNTP_GRADIENT_CHECK_H_
