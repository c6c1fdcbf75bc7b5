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

#ifndef GNTP_MODEL_H_
#define GNTP_MODEL_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "gntp/features.h"
#include "gntp/input.h"
#include "gntp/network.h"
#include "gntp/scorer.h"
#include "gntp/transition_system.h"

namespace gntp {

struct ModelMetadata {
  std::string config_text;
  uint64_t seed = 0;
  int epochs = 0;

  bool operator==(const ModelMetadata &other) const = default;
};

// A transition system, its feature extractor and the network scoring its
// decisions, with raw (training) and averaged (decoding) parameters.
class Model {
 public:
  Model() = default;

  // Builds vocabularies from `inputs` and draws parameters from `seed`. The
  // averaged parameters start as a copy of the raw ones.
  static absl::StatusOr<Model> Create(TaskKind task, std::vector<std::string>
                                      labels, FeatureTemplate features,
                                      std::vector<int> hidden,
                                      Activation activation,
                                      std::span<const Input> inputs,
                                      uint64_t seed);

  // Reassembles a model from stored parts (archives).
  static absl::StatusOr<Model> Assemble(TaskKind task,
                                        std::vector<std::string> labels,
                                        FeatureTemplate features,
                                        std::vector<Vocabulary> vocabularies,
                                        std::vector<int> hidden,
                                        Activation activation,
                                        Parameters params,
                                        Parameters averaged);

  const TransitionSystem &system() const { return *system_; }
  const FeatureExtractor &extractor() const { return extractor_; }
  const FeedForwardNetwork &network() const { return network_; }

  Parameters &params() { return params_; }
  const Parameters &params() const { return params_; }
  Parameters &averaged() { return averaged_; }
  const Parameters &averaged() const { return averaged_; }

  ModelMetadata &metadata() { return metadata_; }
  const ModelMetadata &metadata() const { return metadata_; }

 private:
  std::shared_ptr<const TransitionSystem> system_;
  FeatureExtractor extractor_;
  FeedForwardNetwork network_;
  Parameters params_;
  Parameters averaged_;
  ModelMetadata metadata_;
};

// Scores states of one sentence with a model under the given parameters.
class NetworkScorer : public Scorer {
 public:
  NetworkScorer(const Model &model, const Parameters &params,
                const Input &input)
      : model_(model), params_(params),
        encoded_(model.extractor().Encode(input)) {}

  void Score(const State &state, std::span<double> scores) const override;

  // Forward pass with a cache for backpropagation.
  std::vector<double> Forward(const State &state, ForwardCache *cache) const;

  const EncodedInput &encoded() const { return encoded_; }

 private:
  const Model &model_;
  const Parameters &params_;
  EncodedInput encoded_;
};

}  // namespace gntp

#endif  // GNTP_MODEL_H_
