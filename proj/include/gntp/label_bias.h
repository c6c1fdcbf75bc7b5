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

#ifndef GNTP_LABEL_BIAS_H_
#define GNTP_LABEL_BIAS_H_

#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "gntp/inference.h"
#include "gntp/input.h"
#include "gntp/scorer.h"
#include "gntp/transition_system.h"

namespace gntp {

// Pairs of (words, gold tags) of equal length.
struct ToyDataset {
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>
      sentences;
};

// a b^{k+1} c / A B^{k+1} C and a b^{k+1} e / A D^{k+1} E.
ToyDataset LookaheadFamily(int k);

// Scores tag d_i for word x_i after tags d_{1:i-1}:
//   alpha * [(d_{i-1}, d_i) in T] + alpha * [(x_i, d_i) in E],
// with no transition term at i = 1.
struct ToyModel {
  double alpha = 0.0;
  std::set<std::pair<std::string, std::string>> transitions;
  std::set<std::pair<std::string, std::string>> emissions;
  std::vector<std::string> tags = {"A", "B", "C", "D", "E"};
  std::vector<std::string> words = {"a", "b", "c", "e"};

  // T = {(A,B), (B,C), (A,D), (D,E)}, E = {(a,A), (b,B), (c,C), (b,D), (e,E)}.
  static ToyModel Paper(double alpha);

  // T and E read off the gold bigrams and word/tag pairs of `data`.
  static ToyModel FromDataset(const ToyDataset &data, double alpha);

  double Score(std::span<const std::string> x,
               std::span<const std::string> d_prefix,
               const std::string &d) const;
};

// Tagging system over the toy tag set.
TaggingSystem ToySystem(const ToyModel &model);

class ToyScorer : public Scorer {
 public:
  ToyScorer(const ToyModel &model, const Input &input)
      : model_(model), input_(input) {}
  void Score(const State &state, std::span<double> scores) const override;

 private:
  const ToyModel &model_;
  const Input &input_;
};

// Exact p_G over every tag sequence for `words`.
absl::StatusOr<Enumeration> ToyGlobalDistribution(
    const ToyModel &model, const std::vector<std::string> &words);

// p_G(tags | words) by enumeration.
absl::StatusOr<double> ToyGlobalProbability(
    const ToyModel &model, const std::vector<std::string> &words,
    const std::vector<std::string> &tags);

struct LabelBiasRow {
  double alpha = 0.0;
  double p_first = 0.0;   // p_G(A B.. C | a b.. c)
  double p_second = 0.0;  // p_G(A D.. E | a b.. e)
  double sum() const { return p_first + p_second; }
};

absl::StatusOr<std::vector<LabelBiasRow>> LabelBiasTable(
    std::span<const double> alphas, int k);

// p(d_i | d_{1:i-1}, x) over the tag vocabulary. The generator receives the
// whole sentence; a valid local model reads no word after x_{i+lookahead},
// where i = d_prefix.size() + 1.
using LocalConditional = std::function<std::vector<double>(
    std::span<const std::string> x, std::span<const int> d_prefix)>;

using LocalModelGenerator = std::function<LocalConditional(uint64_t seed)>;

// Random local models whose conditionals depend only on the visible words
// and the tag prefix, with random sharpness.
LocalModelGenerator RandomLocalModels(int num_tags, int lookahead = 0);

struct AuditReport {
  int trials = 0;
  double max_sum = 0.0;
  bool bound_holds = true;  // max_sum <= 1 + 1e-9
};

// Samples `trials` local models and computes the summed probability of the
// two gold sequences of `data` under each. Fails when a model's conditionals
// change with words it may not read, or are not distributions.
absl::StatusOr<AuditReport> AuditLocalBound(
    const LocalModelGenerator &generator, const ToyDataset &data,
    const ToyModel &vocab, int trials, uint64_t seed, int lookahead = 0);

// p_L(tags | words) by the chain rule.
double LocalSequenceProbability(const LocalConditional &local,
                                std::span<const std::string> words,
                                std::span<const int> tags);

// Global scores rho'(d_{1:i-1}, d_i, x) = ln max(p_L(d_i | ...), floor).
class EmbeddedLocalScorer : public Scorer {
 public:
  EmbeddedLocalScorer(LocalConditional local, const Input &input, double floor)
      : local_(std::move(local)), input_(input), floor_(floor) {}
  void Score(const State &state, std::span<double> scores) const override;
  // Whether a zero probability was met with no floor to absorb it.
  bool saw_zero() const { return saw_zero_; }

 private:
  LocalConditional local_;
  const Input &input_;
  double floor_;
  mutable bool saw_zero_ = false;
};

// max over all tag sequences of |p_G - p_L| for the embedded model. Fails
// on a zero probability when `floor` is 0.
absl::StatusOr<double> EmbeddingGap(const LocalConditional &local,
                                    int num_tags,
                                    const std::vector<std::string> &words,
                                    double floor = 0.0);

}  // namespace gntp

#endif  // GNTP_LABEL_BIAS_H_
