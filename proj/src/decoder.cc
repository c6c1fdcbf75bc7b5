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

#include "gntp/decoder.h"

#include <omp.h>

#include "gntp/check.h"

namespace gntp {

Decoded Decode(const Model &model, const Input &input,
               const DecodeOptions &options) {
  const Parameters &params =
      options.use_averaged ? model.averaged() : model.params();
  NetworkScorer scorer(model, params, input);
  Decoded out;
  if (options.beam_size <= 1 && options.mode == NormalizationMode::kLocal) {
    out.sequence = GreedyDecode(model.system(), input, scorer);
  } else {
    Beam beam = BeamSearch(model.system(), input, scorer,
                           std::max(1, options.beam_size), options.mode);
    out.sequence = ToScoredSequence(beam.items.front());
  }
  absl::StatusOr<Annotation> structure =
      Reconstruct(model.system(), input, out.sequence.decisions);
  GNTP_CHECK(structure.ok(), "decoder produced an incomplete sequence");
  out.structure = std::move(*structure);
  return out;
}

std::vector<Decoded> DecodeCorpus(const Model &model,
                                  std::span<const Input> inputs,
                                  const DecodeOptions &options, int threads) {
  std::vector<Decoded> out(inputs.size());
  const int n = static_cast<int>(inputs.size());
  const int num_threads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(num_threads)
  for (int i = 0; i < n; ++i) out[i] = Decode(model, inputs[i], options);
  return out;
}

std::vector<Decoded> DecodeCorpusSerial(const Model &model,
                                        std::span<const Input> inputs,
                                        const DecodeOptions &options) {
  std::vector<Decoded> out;
  out.reserve(inputs.size());
  for (const Input &input : inputs) out.push_back(Decode(model, input, options));
  return out;
}

absl::StatusOr<Metrics> EvaluateDecoded(std::span<const Input> inputs,
                                        std::span<const Annotation> gold,
                                        std::span<const Decoded> decoded,
                                        const EvalOptions &eval_options) {
  if (inputs.size() != gold.size() || inputs.size() != decoded.size()) {
    return absl::InvalidArgumentError("corpus sizes differ");
  }
  Metrics total;
  if (!gold.empty()) total.kind = gold.front().kind;
  for (size_t i = 0; i < inputs.size(); ++i) {
    absl::StatusOr<Metrics> m =
        Evaluate(inputs[i], decoded[i].structure, gold[i], eval_options);
    if (!m.ok()) return m.status();
    total.Add(*m);
  }
  return total;
}

}  // namespace gntp
