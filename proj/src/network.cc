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

#include "gntp/network.h"

#include <cmath>
#include <random>

#include "absl/strings/str_cat.h"
#include "gntp/check.h"
#include "gntp/kernels.h"

namespace gntp {

absl::string_view ActivationName(Activation activation) {
  return activation == Activation::kRelu ? "relu" : "tanh";
}

absl::StatusOr<Activation> ParseActivation(absl::string_view name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown activation '", name, "'"));
}

int NetworkShape::InputWidth() const {
  int width = 0;
  for (size_t g = 0; g < dims.size(); ++g) width += dims[g] * arities[g];
  return width;
}

NetworkShape NetworkShape::For(const FeatureExtractor &extractor,
                               std::vector<int> hidden, int num_decisions) {
  NetworkShape shape;
  for (int g = 0; g < extractor.num_groups(); ++g) {
    const FeatureGroup &group = extractor.feature_template().groups[g];
    shape.vocab_sizes.push_back(extractor.vocabularies()[g].size());
    shape.dims.push_back(group.dim);
    shape.arities.push_back(group.arity());
  }
  shape.hidden = std::move(hidden);
  shape.num_decisions = num_decisions;
  return shape;
}

absl::Status NetworkShape::Validate() const {
  if (vocab_sizes.size() != dims.size() || dims.size() != arities.size()) {
    return absl::InvalidArgumentError("inconsistent feature group sizes");
  }
  if (hidden.empty() || hidden.size() > 2) {
    return absl::InvalidArgumentError("network needs one or two hidden layers");
  }
  for (int h : hidden) {
    if (h <= 0) return absl::InvalidArgumentError("hidden width must be > 0");
  }
  if (num_decisions <= 0 || InputWidth() <= 0) {
    return absl::InvalidArgumentError("network has no inputs or outputs");
  }
  return absl::OkStatus();
}

namespace {

// Portable uniform draw in [lo, hi) from the top 53 bits.
double Uniform(std::mt19937_64 &rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

void FillUniform(std::span<double> values, double range,
                 std::mt19937_64 &rng) {
  for (double &v : values) v = Uniform(rng, -range, range);
}

double GlorotRange(int fan_in, int fan_out) {
  return std::sqrt(6.0 / (fan_in + fan_out));
}

constexpr double kBiasInit = 0.1;

}  // namespace

Parameters Parameters::Zeros(const NetworkShape &shape) {
  Parameters p;
  for (size_t g = 0; g < shape.dims.size(); ++g) {
    p.embeddings.emplace_back(shape.vocab_sizes[g], shape.dims[g]);
  }
  int width = shape.InputWidth();
  for (int h : shape.hidden) {
    p.hidden_weights.emplace_back(h, width);
    p.hidden_biases.emplace_back(h, 0.0);
    width = h;
  }
  p.softmax_weights = Matrix(shape.num_decisions, width);
  p.softmax_bias.assign(shape.num_decisions, 0.0);
  return p;
}

Parameters Parameters::Random(const NetworkShape &shape, uint64_t seed) {
  Parameters p = Zeros(shape);
  std::mt19937_64 rng(seed);
  for (Matrix &e : p.embeddings) {
    FillUniform(e.values, GlorotRange(e.rows, e.cols), rng);
  }
  for (size_t l = 0; l < p.hidden_weights.size(); ++l) {
    Matrix &w = p.hidden_weights[l];
    FillUniform(w.values, GlorotRange(w.cols, w.rows), rng);
    std::fill(p.hidden_biases[l].begin(), p.hidden_biases[l].end(), kBiasInit);
  }
  FillUniform(p.softmax_weights.values,
              GlorotRange(p.softmax_weights.cols, p.softmax_weights.rows),
              rng);
  std::fill(p.softmax_bias.begin(), p.softmax_bias.end(), kBiasInit);
  return p;
}

void Parameters::ReinitializeSoftmax(uint64_t seed) {
  std::mt19937_64 rng(seed);
  FillUniform(softmax_weights.values,
              GlorotRange(softmax_weights.cols, softmax_weights.rows), rng);
  std::fill(softmax_bias.begin(), softmax_bias.end(), kBiasInit);
}

std::vector<std::span<double>> Parameters::Tensors() {
  std::vector<std::span<double>> out;
  for (Matrix &e : embeddings) out.emplace_back(e.values);
  for (size_t l = 0; l < hidden_weights.size(); ++l) {
    out.emplace_back(hidden_weights[l].values);
    out.emplace_back(hidden_biases[l]);
  }
  out.emplace_back(softmax_weights.values);
  out.emplace_back(softmax_bias);
  return out;
}

std::vector<std::span<const double>> Parameters::Tensors() const {
  std::vector<std::span<const double>> out;
  for (const Matrix &e : embeddings) out.emplace_back(e.values);
  for (size_t l = 0; l < hidden_weights.size(); ++l) {
    out.emplace_back(hidden_weights[l].values);
    out.emplace_back(hidden_biases[l]);
  }
  out.emplace_back(softmax_weights.values);
  out.emplace_back(softmax_bias);
  return out;
}

std::vector<TensorInfo> Parameters::TensorInfos() const {
  std::vector<TensorInfo> out;
  for (size_t g = 0; g < embeddings.size(); ++g) {
    out.push_back({TensorKind::kEmbedding, static_cast<int>(g),
                   absl::StrCat("embedding", g)});
  }
  for (size_t l = 0; l < hidden_weights.size(); ++l) {
    const int i = static_cast<int>(l);
    out.push_back({TensorKind::kHiddenWeights, i, absl::StrCat("W", l + 1)});
    out.push_back({TensorKind::kHiddenBias, i, absl::StrCat("b", l + 1)});
  }
  out.push_back({TensorKind::kSoftmaxWeights, 0, "theta_d"});
  out.push_back({TensorKind::kSoftmaxBias, 0, "theta_d_bias"});
  return out;
}

size_t Parameters::size() const {
  size_t n = 0;
  for (std::span<const double> t : Tensors()) n += t.size();
  return n;
}

bool Parameters::SameShape(const Parameters &other) const {
  auto a = Tensors();
  auto b = other.Tensors();
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) return false;
  }
  return embeddings.size() == other.embeddings.size();
}

void Parameters::SetZero() {
  for (std::span<double> t : Tensors()) std::fill(t.begin(), t.end(), 0.0);
}

void Parameters::Add(const Parameters &other, double scale) {
  auto dst = Tensors();
  auto src = other.Tensors();
  for (size_t t = 0; t < dst.size(); ++t) {
    for (size_t i = 0; i < dst[t].size(); ++i) dst[t][i] += scale * src[t][i];
  }
}

absl::Status FeedForwardNetwork::CheckParameters(
    const Parameters &params) const {
  if (!params.SameShape(Parameters::Zeros(shape_))) {
    return absl::InvalidArgumentError(
        "parameter shapes do not match the network");
  }
  return absl::OkStatus();
}

absl::Status FeedForwardNetwork::CheckFeatures(
    const FeatureVector &features) const {
  int slots = 0;
  for (int a : shape_.arities) slots += a;
  if (features.num_slots() != slots) {
    return absl::InvalidArgumentError(absl::StrCat(
        "feature vector has ", features.num_slots(), " slots, network expects ",
        slots));
  }
  int s = 0;
  for (size_t g = 0; g < shape_.arities.size(); ++g) {
    for (int k = 0; k < shape_.arities[g]; ++k, ++s) {
      for (int id : features.Slot(s)) {
        if (id < 0 || id >= shape_.vocab_sizes[g]) {
          return absl::InvalidArgumentError(
              absl::StrCat("feature id ", id, " out of range for group ", g));
        }
      }
    }
  }
  return absl::OkStatus();
}

std::vector<double> FeedForwardNetwork::Forward(const FeatureVector &features,
                                                const Parameters &params,
                                                ForwardCache *cache) const {
  ForwardCache local;
  ForwardCache &c = cache != nullptr ? *cache : local;
  c.params = &params;
  c.features = features;
  c.input.assign(shape_.InputWidth(), 0.0);

  int slot = 0;
  int offset = 0;
  for (size_t g = 0; g < shape_.dims.size(); ++g) {
    const Matrix &table = params.embeddings[g];
    const int dim = shape_.dims[g];
    for (int k = 0; k < shape_.arities[g]; ++k, ++slot, offset += dim) {
      std::span<const int> ids = features.Slot(slot);
      const double scale = 1.0 / static_cast<double>(ids.size());
      for (int id : ids) {
        std::span<const double> row = table.row(id);
        for (int j = 0; j < dim; ++j) c.input[offset + j] += row[j];
      }
      if (ids.size() > 1) {
        for (int j = 0; j < dim; ++j) c.input[offset + j] *= scale;
      }
    }
  }

  const size_t layers = shape_.hidden.size();
  c.pre_activations.resize(layers);
  c.activations.resize(layers);
  const std::vector<double> *below = &c.input;
  for (size_t l = 0; l < layers; ++l) {
    const Matrix &w = params.hidden_weights[l];
    std::vector<double> &pre = c.pre_activations[l];
    std::vector<double> &act = c.activations[l];
    pre.resize(w.rows);
    act.resize(w.rows);
    kernels::Affine(w.values, w.rows, w.cols, *below, params.hidden_biases[l],
                    pre);
    for (int i = 0; i < w.rows; ++i) {
      act[i] = activation_ == Activation::kRelu ? (pre[i] > 0.0 ? pre[i] : 0.0)
                                                : std::tanh(pre[i]);
    }
    below = &act;
  }

  const Matrix &out = params.softmax_weights;
  std::vector<double> scores(out.rows);
  kernels::Affine(out.values, out.rows, out.cols, *below, params.softmax_bias,
                  scores);
  return scores;
}

void FeedForwardNetwork::Backward(const ForwardCache &cache,
                                  std::span<const double> upstream,
                                  const Parameters &params,
                                  Gradients *grads) const {
  GNTP_CHECK(cache.params == &params, "stale forward cache");
  GNTP_CHECK(static_cast<int>(upstream.size()) == shape_.num_decisions,
             "upstream gradient has the wrong size");
  const size_t layers = shape_.hidden.size();
  GNTP_CHECK(cache.activations.size() == layers, "cache from another network");

  bool any = false;
  for (double u : upstream) any = any || u != 0.0;
  if (!any) return;

  const std::vector<double> &top = cache.activations.back();
  kernels::AccumulateOuter(upstream, top, grads->softmax_weights.values);
  for (size_t d = 0; d < upstream.size(); ++d) {
    grads->softmax_bias[d] += upstream[d];
  }

  const Matrix &out = params.softmax_weights;
  std::vector<double> delta(out.cols, 0.0);
  kernels::AccumulateTransposed(out.values, out.rows, out.cols, upstream,
                                delta);

  for (size_t l = layers; l-- > 0;) {
    const std::vector<double> &pre = cache.pre_activations[l];
    const std::vector<double> &act = cache.activations[l];
    for (size_t i = 0; i < delta.size(); ++i) {
      delta[i] *= activation_ == Activation::kRelu
                      ? (pre[i] > 0.0 ? 1.0 : 0.0)
                      : 1.0 - act[i] * act[i];
    }
    const std::vector<double> &below =
        l == 0 ? cache.input : cache.activations[l - 1];
    kernels::AccumulateOuter(delta, below, grads->hidden_weights[l].values);
    for (size_t i = 0; i < delta.size(); ++i) {
      grads->hidden_biases[l][i] += delta[i];
    }
    const Matrix &w = params.hidden_weights[l];
    std::vector<double> delta_below(w.cols, 0.0);
    kernels::AccumulateTransposed(w.values, w.rows, w.cols, delta,
                                  delta_below);
    delta = std::move(delta_below);
  }

  int slot = 0;
  int offset = 0;
  for (size_t g = 0; g < shape_.dims.size(); ++g) {
    Matrix &table = grads->embeddings[g];
    const int dim = shape_.dims[g];
    for (int k = 0; k < shape_.arities[g]; ++k, ++slot, offset += dim) {
      std::span<const int> ids = cache.features.Slot(slot);
      const double scale = 1.0 / static_cast<double>(ids.size());
      for (int id : ids) {
        std::span<double> row = table.row(id);
        for (int j = 0; j < dim; ++j) row[j] += scale * delta[offset + j];
      }
    }
  }
}

absl::string_view TrainableSubsetName(TrainableSubset subset) {
  switch (subset) {
    case TrainableSubset::kSoftmaxOnly:
      return "theta_d";
    case TrainableSubset::kTopHiddenAndSoftmax:
      return "w2_theta_d";
    case TrainableSubset::kAllHiddenAndSoftmax:
      return "w1_w2_theta_d";
    case TrainableSubset::kFull:
      return "full";
  }
  return "unknown";
}

absl::StatusOr<TrainableSubset> ParseTrainableSubset(absl::string_view name) {
  for (TrainableSubset s :
       {TrainableSubset::kSoftmaxOnly, TrainableSubset::kTopHiddenAndSoftmax,
        TrainableSubset::kAllHiddenAndSoftmax, TrainableSubset::kFull}) {
    if (name == TrainableSubsetName(s)) return s;
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown trainable subset '", name,
      "' (expected theta_d, w2_theta_d, w1_w2_theta_d or full)"));
}

bool IsTrainable(const TensorInfo &info, TrainableSubset subset,
                 int num_hidden_layers) {
  switch (info.kind) {
    case TensorKind::kSoftmaxWeights:
    case TensorKind::kSoftmaxBias:
      return true;
    case TensorKind::kEmbedding:
      return subset == TrainableSubset::kFull;
    case TensorKind::kHiddenWeights:
    case TensorKind::kHiddenBias:
      if (subset == TrainableSubset::kFull ||
          subset == TrainableSubset::kAllHiddenAndSoftmax) {
        return true;
      }
      return subset == TrainableSubset::kTopHiddenAndSoftmax &&
             info.index == 1 && num_hidden_layers >= 2;
  }
  return false;
}

absl::Status RestrictTrainable(Gradients *grads, TrainableSubset subset) {
  const int layers = static_cast<int>(grads->hidden_weights.size());
  if ((subset == TrainableSubset::kTopHiddenAndSoftmax ||
       subset == TrainableSubset::kAllHiddenAndSoftmax) &&
      layers < 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        "subset ", TrainableSubsetName(subset),
        " names W_2 but the network has ", layers, " hidden layer"));
  }
  std::vector<TensorInfo> infos = grads->TensorInfos();
  std::vector<std::span<double>> tensors = grads->Tensors();
  for (size_t t = 0; t < tensors.size(); ++t) {
    if (!IsTrainable(infos[t], subset, layers)) {
      std::fill(tensors[t].begin(), tensors[t].end(), 0.0);
    }
  }
  return absl::OkStatus();
}

}  // namespace gntp
