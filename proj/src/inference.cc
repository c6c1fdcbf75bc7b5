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

#include "gntp/inference.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "gntp/check.h"

namespace gntp {

absl::string_view NormalizationModeName(NormalizationMode mode) {
  return mode == NormalizationMode::kLocal ? "local" : "global";
}

absl::StatusOr<NormalizationMode> ParseNormalizationMode(
    absl::string_view name) {
  if (name == "local") return NormalizationMode::kLocal;
  if (name == "global") return NormalizationMode::kGlobal;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown normalization mode '", name, "'"));
}

double LogSumExp(std::span<const double> values) {
  if (values.empty()) return -std::numeric_limits<double>::infinity();
  const double max = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(max)) return max;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - max);
  return max + std::log(sum);
}

bool Beam::ContainsGold() const {
  return std::any_of(items.begin(), items.end(),
                     [](const BeamItem &i) { return i.is_gold; });
}

ScoredSequence ToScoredSequence(const BeamItem &item) {
  ScoredSequence seq;
  seq.decisions = item.state.history;
  seq.raw_score = item.raw_score;
  seq.local_log_z = item.step_log_z;
  seq.log_p_local = item.local_log_prob;
  return seq;
}

namespace {

// Scores of the allowed decisions in `state` plus their log normalizer.
struct StepScores {
  std::vector<int> allowed;
  std::vector<double> scores;  // full vocabulary
  double log_z = 0.0;
};

StepScores ScoreStep(const TransitionSystem &system, const Input &input,
                     const Scorer &scorer, const State &state) {
  StepScores step;
  step.allowed = system.Allowed(state, input);
  step.scores.assign(system.num_decisions(), 0.0);
  scorer.Score(state, step.scores);
  std::vector<double> allowed_scores;
  allowed_scores.reserve(step.allowed.size());
  for (int d : step.allowed) allowed_scores.push_back(step.scores[d]);
  step.log_z = LogSumExp(allowed_scores);
  return step;
}

struct Candidate {
  int parent;
  int decision;
  double raw;
  double local;
  double log_z;
  bool gold;
};

// Expands and prunes one step. `gold` is empty when gold is not tracked.
Beam Advance(const TransitionSystem &system, const Input &input,
             const Scorer &scorer, const Beam &beam, int beam_size,
             std::span<const int> gold) {
  std::vector<Candidate> candidates;
  for (size_t i = 0; i < beam.items.size(); ++i) {
    const BeamItem &item = beam.items[i];
    StepScores step = ScoreStep(system, input, scorer, item.state);
    for (int d : step.allowed) {
      const double rho = step.scores[d];
      candidates.push_back(
          {static_cast<int>(i), d, item.raw_score + rho,
           item.local_log_prob + (rho - step.log_z), step.log_z,
           item.is_gold && !gold.empty() && gold[beam.step] == d});
    }
  }
  const NormalizationMode mode = beam.mode;
  auto better = [&](const Candidate &a, const Candidate &b) {
    const double sa = mode == NormalizationMode::kGlobal ? a.raw : a.local;
    const double sb = mode == NormalizationMode::kGlobal ? b.raw : b.local;
    if (sa != sb) return sa > sb;
    if (a.parent != b.parent) {
      const auto &ha = beam.items[a.parent].state.history;
      const auto &hb = beam.items[b.parent].state.history;
      return std::lexicographical_compare(ha.begin(), ha.end(), hb.begin(),
                                          hb.end());
    }
    return a.decision < b.decision;
  };
  const size_t keep = std::min(candidates.size(), size_t(beam_size));
  std::partial_sort(candidates.begin(), candidates.begin() + keep,
                    candidates.end(), better);

  Beam next;
  next.mode = mode;
  next.step = beam.step + 1;
  next.items.reserve(keep);
  for (size_t k = 0; k < keep; ++k) {
    const Candidate &c = candidates[k];
    const BeamItem &parent = beam.items[c.parent];
    BeamItem item;
    item.state = parent.state;
    system.Advance(&item.state, c.decision, input);
    item.raw_score = c.raw;
    item.local_log_prob = c.local;
    item.step_log_z = parent.step_log_z;
    item.step_log_z.push_back(c.log_z);
    item.is_gold = c.gold;
    item.parent = c.parent;
    next.items.push_back(std::move(item));
  }
  return next;
}

Beam InitialBeam(const TransitionSystem &system, const Input &input,
                 NormalizationMode mode, bool track_gold) {
  absl::StatusOr<State> start = system.StartState(input);
  GNTP_CHECK(start.ok(), "beam search on an invalid input");
  Beam beam;
  beam.mode = mode;
  BeamItem root;
  root.state = std::move(*start);
  root.is_gold = track_gold;
  beam.items.push_back(std::move(root));
  return beam;
}

}  // namespace

ScoredSequence GreedyDecode(const TransitionSystem &system, const Input &input,
                            const Scorer &scorer) {
  absl::StatusOr<State> start = system.StartState(input);
  GNTP_CHECK(start.ok(), "greedy decode on an invalid input");
  State state = std::move(*start);
  ScoredSequence seq;
  while (!system.IsFinal(state, input)) {
    StepScores step = ScoreStep(system, input, scorer, state);
    int best = -1;
    double best_local = 0.0;
    for (int d : step.allowed) {
      const double local = seq.log_p_local + (step.scores[d] - step.log_z);
      if (best < 0 || local > best_local) {
        best = d;
        best_local = local;
      }
    }
    seq.raw_score += step.scores[best];
    seq.log_p_local = best_local;
    seq.local_log_z.push_back(step.log_z);
    system.Advance(&state, best, input);
  }
  seq.decisions = state.history;
  return seq;
}

Beam BeamSearch(const TransitionSystem &system, const Input &input,
                const Scorer &scorer, int beam_size, NormalizationMode mode) {
  GNTP_CHECK(beam_size >= 1, "beam size must be positive");
  Beam beam = InitialBeam(system, input, mode, false);
  const int n = system.SequenceLength(input);
  while (beam.step < n) {
    beam = Advance(system, input, scorer, beam, beam_size, {});
  }
  return beam;
}

GoldTrace TrackGold(const TransitionSystem &system, const Input &input,
                    const Scorer &scorer, int beam_size,
                    NormalizationMode mode, std::span<const int> gold) {
  GNTP_CHECK(beam_size >= 1, "beam size must be positive");
  const int n = system.SequenceLength(input);
  GNTP_CHECK(static_cast<int>(gold.size()) == n, "gold sequence length");
  GoldTrace trace;
  trace.beam = InitialBeam(system, input, mode, true);
  while (trace.beam.step < n) {
    trace.beam = Advance(system, input, scorer, trace.beam, beam_size, gold);
    if (!trace.beam.ContainsGold()) {
      trace.survived = false;
      trace.fallout_step = trace.beam.step;
      break;
    }
  }
  return trace;
}

const ScoredSequence &Enumeration::ArgmaxGlobal() const {
  size_t best = 0;
  for (size_t i = 1; i < sequences.size(); ++i) {
    if (sequences[i].raw_score > sequences[best].raw_score) best = i;
  }
  return sequences[best];
}

namespace {

bool Enumerate(const TransitionSystem &system, const Input &input,
               const Scorer &scorer, const State &state, double raw,
               double local, std::vector<double> &log_z, size_t cap,
               std::vector<ScoredSequence> *out) {
  if (system.IsFinal(state, input)) {
    if (out->size() >= cap) return false;
    ScoredSequence seq;
    seq.decisions = state.history;
    seq.raw_score = raw;
    seq.log_p_local = local;
    seq.local_log_z = log_z;
    out->push_back(std::move(seq));
    return true;
  }
  StepScores step = ScoreStep(system, input, scorer, state);
  log_z.push_back(step.log_z);
  for (int d : step.allowed) {
    State child = state;
    system.Advance(&child, d, input);
    const double rho = step.scores[d];
    if (!Enumerate(system, input, scorer, child, raw + rho,
                   local + (rho - step.log_z), log_z, cap, out)) {
      return false;
    }
  }
  log_z.pop_back();
  return true;
}

}  // namespace

absl::StatusOr<Enumeration> EnumerateAll(const TransitionSystem &system,
                                         const Input &input,
                                         const Scorer &scorer, size_t cap) {
  absl::StatusOr<State> start = system.StartState(input);
  if (!start.ok()) return start.status();
  Enumeration result;
  std::vector<double> log_z;
  if (!Enumerate(system, input, scorer, *start, 0.0, 0.0, log_z, cap,
                 &result.sequences)) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "more than ", cap, " complete decision sequences; refusing to "
        "enumerate"));
  }
  std::vector<double> totals;
  totals.reserve(result.sequences.size());
  for (const ScoredSequence &s : result.sequences) totals.push_back(s.raw_score);
  result.log_z_global = LogSumExp(totals);
  for (ScoredSequence &s : result.sequences) {
    s.log_z_global = result.log_z_global;
    s.log_p_global = s.raw_score - result.log_z_global;
  }
  return result;
}

}  // namespace gntp
