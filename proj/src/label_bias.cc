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

#include "gntp/label_bias.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "absl/strings/str_cat.h"
#include "gntp/check.h"

namespace gntp {

ToyDataset LookaheadFamily(int k) {
  GNTP_CHECK(k >= 0, "lookahead family needs k >= 0");
  ToyDataset data;
  for (const auto &[last_word, middle_tag, last_tag] :
       {std::tuple{"c", "B", "C"}, std::tuple{"e", "D", "E"}}) {
    std::vector<std::string> words = {"a"};
    std::vector<std::string> tags = {"A"};
    for (int i = 0; i <= k; ++i) {
      words.push_back("b");
      tags.push_back(middle_tag);
    }
    words.push_back(last_word);
    tags.push_back(last_tag);
    data.sentences.emplace_back(std::move(words), std::move(tags));
  }
  return data;
}

ToyModel ToyModel::Paper(double alpha) {
  ToyModel model;
  model.alpha = alpha;
  model.transitions = {{"A", "B"}, {"B", "C"}, {"A", "D"}, {"D", "E"}};
  model.emissions = {
      {"a", "A"}, {"b", "B"}, {"c", "C"}, {"b", "D"}, {"e", "E"}};
  return model;
}

ToyModel ToyModel::FromDataset(const ToyDataset &data, double alpha) {
  ToyModel model;
  model.alpha = alpha;
  for (const auto &[words, tags] : data.sentences) {
    for (size_t i = 0; i < words.size(); ++i) {
      model.emissions.emplace(words[i], tags[i]);
      if (i > 0) model.transitions.emplace(tags[i - 1], tags[i]);
    }
  }
  return model;
}

double ToyModel::Score(std::span<const std::string> x,
                       std::span<const std::string> d_prefix,
                       const std::string &d) const {
  const size_t i = d_prefix.size();
  double score = 0.0;
  if (i > 0 && transitions.contains({d_prefix.back(), d})) score += alpha;
  if (emissions.contains({x[i], d})) score += alpha;
  return score;
}

TaggingSystem ToySystem(const ToyModel &model) {
  return TaggingSystem(model.tags);
}

void ToyScorer::Score(const State &state, std::span<double> scores) const {
  std::vector<std::string> x;
  for (const Token &t : input_.tokens) x.push_back(t.form);
  std::vector<std::string> prefix;
  for (int d : state.history) prefix.push_back(model_.tags[d]);
  for (size_t d = 0; d < model_.tags.size(); ++d) {
    scores[d] = model_.Score(x, prefix, model_.tags[d]);
  }
}

absl::StatusOr<Enumeration> ToyGlobalDistribution(
    const ToyModel &model, const std::vector<std::string> &words) {
  TaggingSystem system = ToySystem(model);
  Input input = MakeInput(words);
  ToyScorer scorer(model, input);
  return EnumerateAll(system, input, scorer);
}

absl::StatusOr<double> ToyGlobalProbability(
    const ToyModel &model, const std::vector<std::string> &words,
    const std::vector<std::string> &tags) {
  std::vector<int> target;
  for (const std::string &t : tags) {
    auto it = std::find(model.tags.begin(), model.tags.end(), t);
    if (it == model.tags.end()) {
      return absl::InvalidArgumentError(absl::StrCat("unknown tag ", t));
    }
    target.push_back(static_cast<int>(it - model.tags.begin()));
  }
  absl::StatusOr<Enumeration> dist = ToyGlobalDistribution(model, words);
  if (!dist.ok()) return dist.status();
  for (const ScoredSequence &s : dist->sequences) {
    if (s.decisions == target) return std::exp(*s.log_p_global);
  }
  return absl::InvalidArgumentError("tag sequence has the wrong length");
}

absl::StatusOr<std::vector<LabelBiasRow>> LabelBiasTable(
    std::span<const double> alphas, int k) {
  if (k < 0) return absl::InvalidArgumentError("k must be >= 0");
  const ToyDataset data = LookaheadFamily(k);
  std::vector<LabelBiasRow> rows;
  for (double alpha : alphas) {
    ToyModel model = ToyModel::FromDataset(data, alpha);
    LabelBiasRow row;
    row.alpha = alpha;
    absl::StatusOr<double> p1 = ToyGlobalProbability(
        model, data.sentences[0].first, data.sentences[0].second);
    if (!p1.ok()) return p1.status();
    absl::StatusOr<double> p2 = ToyGlobalProbability(
        model, data.sentences[1].first, data.sentences[1].second);
    if (!p2.ok()) return p2.status();
    row.p_first = *p1;
    row.p_second = *p2;
    rows.push_back(row);
  }
  return rows;
}

namespace {

// Words the model may read when predicting tag i (0-based).
int VisibleEnd(int i, int lookahead, int length) {
  return std::min(length, i + 1 + lookahead);
}

double Uniform01(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

LocalModelGenerator RandomLocalModels(int num_tags, int lookahead) {
  return [num_tags, lookahead](uint64_t seed) -> LocalConditional {
    std::mt19937_64 model_rng(seed);
    // Sharpness spans near-uniform to near-deterministic conditionals.
    const double scale = std::exp(-2.0 + 7.0 * Uniform01(model_rng));
    return [num_tags, lookahead, seed, scale](
               std::span<const std::string> x,
               std::span<const int> d_prefix) {
      const int i = static_cast<int>(d_prefix.size());
      std::vector<uint32_t> key = {static_cast<uint32_t>(seed),
                                   static_cast<uint32_t>(seed >> 32),
                                   static_cast<uint32_t>(i)};
      const int end = VisibleEnd(i, lookahead, static_cast<int>(x.size()));
      for (int j = 0; j < end; ++j) {
        for (unsigned char c : x[j]) key.push_back(c);
        key.push_back(0x100);
      }
      for (int d : d_prefix) key.push_back(0x200 + d);
      std::seed_seq seq(key.begin(), key.end());
      std::mt19937_64 rng(seq);
      std::vector<double> logits(num_tags);
      for (double &l : logits) l = scale * (2.0 * Uniform01(rng) - 1.0);
      const double log_z = LogSumExp(logits);
      std::vector<double> p(num_tags);
      for (int d = 0; d < num_tags; ++d) p[d] = std::exp(logits[d] - log_z);
      return p;
    };
  };
}

double LocalSequenceProbability(const LocalConditional &local,
                                std::span<const std::string> words,
                                std::span<const int> tags) {
  double p = 1.0;
  for (size_t i = 0; i < tags.size(); ++i) {
    std::vector<double> dist = local(words, tags.subspan(0, i));
    p *= dist[tags[i]];
  }
  return p;
}

namespace {

absl::Status CheckDistribution(const std::vector<double> &p, int num_tags) {
  if (static_cast<int>(p.size()) != num_tags) {
    return absl::FailedPreconditionError(
        absl::StrCat("local model returned ", p.size(), " probabilities for ",
                     num_tags, " tags"));
  }
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) {
      return absl::FailedPreconditionError("negative or NaN probability");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    return absl::FailedPreconditionError(
        absl::StrCat("local conditional sums to ", sum));
  }
  return absl::OkStatus();
}

// Every tag prefix of length < n, shortest first.
std::vector<std::vector<int>> AllPrefixes(int num_tags, int n) {
  std::vector<std::vector<int>> out = {{}};
  for (size_t begin = 0; begin < out.size(); ++begin) {
    if (static_cast<int>(out[begin].size()) + 1 >= n) continue;
    for (int d = 0; d < num_tags; ++d) {
      std::vector<int> next = out[begin];
      next.push_back(d);
      out.push_back(std::move(next));
    }
  }
  return out;
}

// Checks that `local` is a distribution at every prefix of `words` and does
// not change when any word it may not read is replaced.
absl::Status CheckRestriction(const LocalConditional &local,
                              const std::vector<std::string> &words,
                              const ToyModel &vocab, int lookahead) {
  const int n = static_cast<int>(words.size());
  const int num_tags = static_cast<int>(vocab.tags.size());
  for (const std::vector<int> &prefix : AllPrefixes(num_tags, n)) {
    const int i = static_cast<int>(prefix.size());
    const std::vector<double> base = local(words, prefix);
    if (absl::Status s = CheckDistribution(base, num_tags); !s.ok()) return s;
    for (int j = VisibleEnd(i, lookahead, n); j < n; ++j) {
      for (const std::string &w : vocab.words) {
        if (w == words[j]) continue;
        std::vector<std::string> variant = words;
        variant[j] = w;
        if (local(variant, prefix) != base) {
          return absl::FailedPreconditionError(absl::StrCat(
              "local model reads word ", j + 1, " when predicting tag ",
              i + 1, " (lookahead ", lookahead, ")"));
        }
      }
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<AuditReport> AuditLocalBound(
    const LocalModelGenerator &generator, const ToyDataset &data,
    const ToyModel &vocab, int trials, uint64_t seed, int lookahead) {
  if (data.sentences.size() != 2) {
    return absl::InvalidArgumentError("audit needs exactly two sentences");
  }
  std::vector<std::vector<int>> gold;
  for (const auto &[words, tags] : data.sentences) {
    std::vector<int> ids;
    for (const std::string &t : tags) {
      auto it = std::find(vocab.tags.begin(), vocab.tags.end(), t);
      if (it == vocab.tags.end()) {
        return absl::InvalidArgumentError(absl::StrCat("unknown tag ", t));
      }
      ids.push_back(static_cast<int>(it - vocab.tags.begin()));
    }
    gold.push_back(std::move(ids));
  }
  std::mt19937_64 rng(seed);
  AuditReport report;
  for (int t = 0; t < trials; ++t) {
    LocalConditional local = generator(rng());
    double sum = 0.0;
    for (size_t s = 0; s < 2; ++s) {
      const std::vector<std::string> &words = data.sentences[s].first;
      if (absl::Status st = CheckRestriction(local, words, vocab, lookahead);
          !st.ok()) {
        return absl::FailedPreconditionError(absl::StrCat(
            "trial ", t + 1, " rejected: ", st.message()));
      }
      sum += LocalSequenceProbability(local, words, gold[s]);
    }
    report.max_sum = std::max(report.max_sum, sum);
    ++report.trials;
  }
  report.bound_holds = report.max_sum <= 1.0 + 1e-9;
  return report;
}

void EmbeddedLocalScorer::Score(const State &state,
                                std::span<double> scores) const {
  std::vector<std::string> x;
  for (const Token &t : input_.tokens) x.push_back(t.form);
  std::vector<double> p = local_(x, state.history);
  for (size_t d = 0; d < scores.size(); ++d) {
    if (p[d] <= 0.0 && floor_ <= 0.0) saw_zero_ = true;
    scores[d] = std::log(std::max(p[d], floor_));
  }
}

absl::StatusOr<double> EmbeddingGap(const LocalConditional &local,
                                    int num_tags,
                                    const std::vector<std::string> &words,
                                    double floor) {
  std::vector<std::string> names;
  for (int d = 0; d < num_tags; ++d) names.push_back(absl::StrCat("T", d));
  TaggingSystem system(names);
  Input input = MakeInput(words);
  EmbeddedLocalScorer scorer(local, input, floor);
  absl::StatusOr<Enumeration> dist = EnumerateAll(system, input, scorer);
  if (!dist.ok()) return dist.status();
  if (scorer.saw_zero()) {
    return absl::FailedPreconditionError(
        "local model assigns probability 0; embedding needs a floor");
  }
  double gap = 0.0;
  for (const ScoredSequence &s : dist->sequences) {
    const double p_local =
        LocalSequenceProbability(local, words, s.decisions);
    gap = std::max(gap, std::abs(std::exp(*s.log_p_global) - p_local));
  }
  return gap;
}

}  // namespace gntp
