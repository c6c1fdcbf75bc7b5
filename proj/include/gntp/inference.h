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

#ifndef GNTP_INFERENCE_H_
#define GNTP_INFERENCE_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "gntp/input.h"
#include "gntp/scorer.h"
#include "gntp/transition_system.h"

namespace gntp {

// Local mode ranks prefixes by summed log-softmax of each decision; global
// mode ranks by summed raw scores.
enum class NormalizationMode { kLocal, kGlobal };

absl::string_view NormalizationModeName(NormalizationMode mode);
absl::StatusOr<NormalizationMode> ParseNormalizationMode(
    absl::string_view name);

// Numerically stable log(sum(exp(values))); -inf for an empty span.
double LogSumExp(std::span<const double> values);

struct BeamItem {
  State state;
  double raw_score = 0.0;       // sum of rho over the prefix
  double local_log_prob = 0.0;  // sum of ln p(d_i | d_{1:i-1})
  std::vector<double> step_log_z;
  bool is_gold = false;
  int parent = -1;  // index into the previous step's beam

  double Score(NormalizationMode mode) const {
    return mode == NormalizationMode::kGlobal ? raw_score : local_log_prob;
  }
};

// Kept prefixes after `step` decisions, best first. Ties are broken towards
// the lexicographically smaller decision sequence.
struct Beam {
  NormalizationMode mode = NormalizationMode::kGlobal;
  int step = 0;
  std::vector<BeamItem> items;

  bool ContainsGold() const;
};

struct ScoredSequence {
  std::vector<int> decisions;
  double raw_score = 0.0;
  std::vector<double> local_log_z;  // ln Z_L at each step
  double log_p_local = 0.0;
  std::optional<double> log_z_global;
  std::optional<double> log_p_global;
};

ScoredSequence ToScoredSequence(const BeamItem &item);

// Picks argmax_d p(d | d_{1:j-1}) at every step, lowest id on ties.
ScoredSequence GreedyDecode(const TransitionSystem &system, const Input &input,
                            const Scorer &scorer);

// Beam search to the end of the sequence; returns the final beam.
Beam BeamSearch(const TransitionSystem &system, const Input &input,
                const Scorer &scorer, int beam_size, NormalizationMode mode);

struct Enumeration {
  std::vector<ScoredSequence> sequences;  // lexicographic order
  double log_z_global = 0.0;

  // Highest total raw score, lexicographically smallest on ties.
  const ScoredSequence &ArgmaxGlobal() const;
};

inline constexpr size_t kDefaultEnumerationCap = 1000000;

// Scores every complete decision sequence. Refuses with ResourceExhausted
// when there are more than `cap` sequences.
absl::StatusOr<Enumeration> EnumerateAll(const TransitionSystem &system,
                                         const Input &input,
                                         const Scorer &scorer,
                                         size_t cap = kDefaultEnumerationCap);

struct GoldTrace {
  // Final beam, or the kept beam at the fallout step.
  Beam beam;
  bool survived = true;
  // 1-based step at which the gold prefix left the beam.
  std::optional<int> fallout_step;
};

// Beam search that follows the gold sequence and stops at the first step
// whose kept items exclude the gold prefix.
GoldTrace TrackGold(const TransitionSystem &system, const Input &input,
                    const Scorer &scorer, int beam_size,
                    NormalizationMode mode, std::span<const int> gold);

}  // namespace gntp

#endif  // GNTP_INFERENCE_H_
