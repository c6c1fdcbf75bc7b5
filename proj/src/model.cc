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

#include "gntp/model.h"

#include <algorithm>

namespace gntp {

absl::StatusOr<Model> Model::Create(TaskKind task,
                                    std::vector<std::string> labels,
                                    FeatureTemplate features,
                                    std::vector<int> hidden,
                                    Activation activation,
                                    std::span<const Input> inputs,
                                    uint64_t seed) {
  Model model;
  model.system_ = MakeTransitionSystem(task, std::move(labels));
  absl::StatusOr<FeatureExtractor> fx =
      FeatureExtractor::Build(std::move(features), *model.system_, inputs);
  if (!fx.ok()) return fx.status();
  model.extractor_ = std::move(*fx);
  NetworkShape shape = NetworkShape::For(model.extractor_, std::move(hidden),
                                         model.system_->num_decisions());
  if (absl::Status s = shape.Validate(); !s.ok()) return s;
  model.network_ = FeedForwardNetwork(shape, activation);
  model.params_ = Parameters::Random(shape, seed);
  model.averaged_ = model.params_;
  model.metadata_.seed = seed;
  return model;
}

absl::StatusOr<Model> Model::Assemble(TaskKind task,
                                      std::vector<std::string> labels,
                                      FeatureTemplate features,
                                      std::vector<Vocabulary> vocabularies,
                                      std::vector<int> hidden,
                                      Activation activation,
                                      Parameters params,
                                      Parameters averaged) {
  Model model;
  model.system_ = MakeTransitionSystem(task, std::move(labels));
  absl::StatusOr<FeatureExtractor> fx = FeatureExtractor::FromVocabularies(
      std::move(features), *model.system_, std::move(vocabularies));
  if (!fx.ok()) return fx.status();
  model.extractor_ = std::move(*fx);
  NetworkShape shape = NetworkShape::For(model.extractor_, std::move(hidden),
                                         model.system_->num_decisions());
  if (absl::Status s = shape.Validate(); !s.ok()) return s;
  model.network_ = FeedForwardNetwork(shape, activation);
  if (absl::Status s = model.network_.CheckParameters(params); !s.ok()) {
    return s;
  }
  if (absl::Status s = model.network_.CheckParameters(averaged); !s.ok()) {
    return s;
  }
  model.params_ = std::move(params);
  model.averaged_ = std::move(averaged);
  return model;
}

void NetworkScorer::Score(const State &state, std::span<double> scores) const {
  std::vector<double> out = Forward(state, nullptr);
  std::copy(out.begin(), out.end(), scores.begin());
}

std::vector<double> NetworkScorer::Forward(const State &state,
                                           ForwardCache *cache) const {
  FeatureVector fv = model_.extractor().Extract(state, encoded_);
  return model_.network().Forward(fv, params_, cache);
}

}  // namespace gntp
