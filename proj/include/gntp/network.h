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

#ifndef GNTP_NETWORK_H_
#define GNTP_NETWORK_H_

#include <cstdint>
#include <span>
#include <string>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gntp/features.h"

namespace gntp {

enum class Activation { kRelu, kTanh };

absl::string_view ActivationName(Activation activation);
absl::StatusOr<Activation> ParseActivation(absl::string_view name);

struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), values(size_t(r) * c, 0.0) {}

  double &at(int r, int c) { return values[size_t(r) * cols + c]; }
  double at(int r, int c) const { return values[size_t(r) * cols + c]; }
  std::span<double> row(int r) { return {values.data() + size_t(r) * cols,
                                         size_t(cols)}; }
  std::span<const double> row(int r) const {
    return {values.data() + size_t(r) * cols, size_t(cols)};
  }
  bool operator==(const Matrix &other) const = default;
};

// Layer sizes of a feed-forward scorer.
struct NetworkShape {
  std::vector<int> vocab_sizes;  // per feature group
  std::vector<int> dims;         // per feature group
  std::vector<int> arities;      // per feature group
  std::vector<int> hidden;       // one or two hidden layer widths
  int num_decisions = 0;

  int InputWidth() const;
  static NetworkShape For(const FeatureExtractor &extractor,
                          std::vector<int> hidden, int num_decisions);
  absl::Status Validate() const;
  bool operator==(const NetworkShape &other) const = default;
};

enum class TensorKind {
  kEmbedding,
  kHiddenWeights,
  kHiddenBias,
  kSoftmaxWeights,
  kSoftmaxBias,
};

struct TensorInfo {
  TensorKind kind;
  int index;  // feature group or hidden layer; 0 for softmax tensors
  std::string name;
};

// All model parameters: per-group embeddings, hidden layers W_l, b_l and the
// final decision layer (one weight row per decision plus a bias). Gradients
// use the same layout.
class Parameters {
 public:
  std::vector<Matrix> embeddings;
  std::vector<Matrix> hidden_weights;  // layer l: hidden[l] x width(l - 1)
  std::vector<std::vector<double>> hidden_biases;
  Matrix softmax_weights;  // num_decisions x hidden.back()
  std::vector<double> softmax_bias;

  static Parameters Zeros(const NetworkShape &shape);

  // Uniform(-r, r) with r = sqrt(6 / (fan_in + fan_out)) for embeddings and
  // weights, 0.1 for biases. Bit-identical for identical seeds.
  static Parameters Random(const NetworkShape &shape, uint64_t seed);

  // Redraws the decision layer only.
  void ReinitializeSoftmax(uint64_t seed);

  // Tensors in a fixed order: embeddings, hidden layers, softmax.
  std::vector<std::span<double>> Tensors();
  std::vector<std::span<const double>> Tensors() const;
  std::vector<TensorInfo> TensorInfos() const;

  size_t size() const;
  bool SameShape(const Parameters &other) const;
  void SetZero();
  // this += scale * other.
  void Add(const Parameters &other, double scale = 1.0);

  bool operator==(const Parameters &other) const = default;
};

using Gradients = Parameters;

// Activations kept by Forward() for the matching Backward() call.
struct ForwardCache {
  FeatureVector features;
  std::vector<double> input;
  std::vector<std::vector<double>> pre_activations;
  std::vector<std::vector<double>> activations;
  const Parameters *params = nullptr;
};

// Scores every decision: rho(s, d) = phi(s) . theta_d + bias_d, where phi is
// the last hidden layer over concatenated feature embeddings.
class FeedForwardNetwork {
 public:
  FeedForwardNetwork() = default;
  FeedForwardNetwork(NetworkShape shape, Activation activation)
      : shape_(std::move(shape)), activation_(activation) {}

  const NetworkShape &shape() const { return shape_; }
  Activation activation() const { return activation_; }

  absl::Status CheckParameters(const Parameters &params) const;
  absl::Status CheckFeatures(const FeatureVector &features) const;

  // Scores over the full decision vocabulary. `cache` may be null.
  std::vector<double> Forward(const FeatureVector &features,
                              const Parameters &params,
                              ForwardCache *cache) const;

  // Adds d(upstream . scores)/d(params) to `grads`.
  void Backward(const ForwardCache &cache, std::span<const double> upstream,
                const Parameters &params, Gradients *grads) const;

 private:
  NetworkShape shape_;
  Activation activation_ = Activation::kRelu;
};

enum class TrainableSubset {
  kSoftmaxOnly,             // {theta_d}
  kTopHiddenAndSoftmax,     // {W_2, theta_d}
  kAllHiddenAndSoftmax,     // {W_1, W_2, theta_d}
  kFull,                    // everything, embeddings included
};

absl::string_view TrainableSubsetName(TrainableSubset subset);
absl::StatusOr<TrainableSubset> ParseTrainableSubset(absl::string_view name);

// Whether `info` is updated under `subset`. A hidden layer's bias follows its
// weights.
bool IsTrainable(const TensorInfo &info, TrainableSubset subset,
                 int num_hidden_layers);

// Zeroes gradients outside `subset`. Fails when the subset names a hidden
// layer the network does not have.
absl::Status RestrictTrainable(Gradients *grads, TrainableSubset subset);

}  // namespace gntp

#endif  // GNTP_NETWORK_H_
