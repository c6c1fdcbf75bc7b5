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

#include "gntp/gradient_check.h"

#include <algorithm>
#include <cmath>

namespace gntp {

GradientCheckReport CheckGradients(const Objective &objective,
                                   const Parameters &params,
                                   const GradientCheckOptions &options) {
  Gradients analytic = params;
  analytic.SetZero();
  objective.Evaluate(params, &analytic);

  Parameters probe = params;
  const std::vector<TensorInfo> infos = probe.TensorInfos();
  std::vector<std::span<double>> tensors = probe.Tensors();
  const std::vector<std::span<const double>> grads =
      std::as_const(analytic).Tensors();
  GradientCheckReport report;
  for (size_t t = 0; t < tensors.size(); ++t) {
    for (size_t i = 0; i < tensors[t].size(); ++i) {
      const double saved = tensors[t][i];
      tensors[t][i] = saved + options.step;
      const double plus = objective.Evaluate(probe, nullptr);
      tensors[t][i] = saved - options.step;
      const double minus = objective.Evaluate(probe, nullptr);
      tensors[t][i] = saved;
      const double numeric = (plus - minus) / (2.0 * options.step);
      const double a = grads[t][i];
      const double denom =
          std::max({std::abs(a), std::abs(numeric), options.floor});
      const double err = std::abs(a - numeric) / denom;
      ++report.checked;
      if (!(err <= report.max_relative_error)) {
        report.max_relative_error = err;
        report.worst_tensor = infos[t].name;
        report.worst_index = i;
        report.worst_analytic = a;
        report.worst_numeric = numeric;
      }
    }
  }
  report.passed = report.max_relative_error < options.tolerance;
  return report;
}

FunctionObjective LocalObjective(const Model &model, const Example &example) {
  return FunctionObjective(
      [&model, &example](const Parameters &p, Gradients *g) {
        return LocalLossAndGrad(model, p, example, g);
      });
}

FunctionObjective FrozenBeamObjective(const Model &model,
                                      const Example &example,
                                      const Parameters &at, int beam_size) {
  PathSet paths = BeamPathSet(model, at, example, beam_size);
  return FunctionObjective(
      [&model, &example, paths](const Parameters &p, Gradients *g) {
        return PathSetLossAndGrad(model, p, example.input, paths, g);
      });
}

FunctionObjective FrozenHingeObjective(const Model &model,
                                       const Example &example,
                                       const Parameters &at, int beam_size,
                                       double margin) {
  PathSet paths = BeamPathSet(model, at, example, beam_size);
  return FunctionObjective(
      [&model, &example, paths, margin](const Parameters &p, Gradients *g) {
        return PathSetHingeLossAndGrad(model, p, example.input, paths, margin,
                                       g);
      });
}

namespace {

double PathScore(const Model &model, const Parameters &params,
                 const Input &input, std::span<const int> path) {
  const TransitionSystem &system = model.system();
  NetworkScorer scorer(model, params, input);
  State state = *system.StartState(input);
  std::vector<double> scores(system.num_decisions());
  double total = 0.0;
  for (int d : path) {
    scorer.Score(state, scores);
    total += scores[d];
    system.Advance(&state, d, input);
  }
  return total;
}

}  // namespace

bool HingeIsSmooth(const Model &model, const Parameters &params,
                   const Example &example, int beam_size, double margin,
                   double gap) {
  const PathSet paths = BeamPathSet(model, params, example, beam_size);
  std::vector<double> rivals;
  double gold = 0.0;
  for (size_t p = 0; p < paths.paths.size(); ++p) {
    const double s = PathScore(model, params, example.input, paths.paths[p]);
    if (int(p) == paths.gold) {
      gold = s;
    } else {
      rivals.push_back(s);
    }
  }
  if (rivals.empty()) return true;
  std::sort(rivals.rbegin(), rivals.rend());
  if (rivals.size() > 1 && rivals[0] - rivals[1] <= gap) return false;
  return std::abs(rivals[0] + margin - gold) > gap;
}

std::vector<LossCheck> CheckAllLosses(const Model &model,
                                      std::span<const Example> examples,
                                      const Parameters &params, int beam_size,
                                      double margin,
                                      const GradientCheckOptions &options) {
  std::vector<FunctionObjective> local, beam, hinge;
  int skipped = 0;
  for (const Example &ex : examples) {
    local.push_back(LocalObjective(model, ex));
    beam.push_back(FrozenBeamObjective(model, ex, params, beam_size));
    if (HingeIsSmooth(model, params, ex, beam_size, margin)) {
      hinge.push_back(
          FrozenHingeObjective(model, ex, params, beam_size, margin));
    } else {
      ++skipped;
    }
  }
  auto sum = [](const std::vector<FunctionObjective> &parts) {
    return FunctionObjective([&parts](const Parameters &p, Gradients *g) {
      double total = 0.0;
      for (const FunctionObjective &o : parts) total += o.Evaluate(p, g);
      return total;
    });
  };
  std::vector<LossCheck> out;
  out.push_back({"local", CheckGradients(sum(local), params, options)});
  out.push_back({"global-beam", CheckGradients(sum(beam), params, options)});
  out.push_back(
      {"hinge", CheckGradients(sum(hinge), params, options), skipped});
  return out;
}

}  // namespace gntp
