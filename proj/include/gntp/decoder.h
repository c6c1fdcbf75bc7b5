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

#ifndef GNTP_DECODER_H_
#define GNTP_DECODER_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "gntp/inference.h"
#include "gntp/input.h"
#include "gntp/model.h"
#include "gntp/task_systems.h"

namespace gntp {

struct DecodeOptions {
  int beam_size = 1;
  NormalizationMode mode = NormalizationMode::kLocal;
  bool use_averaged = true;
};

struct Decoded {
  Annotation structure;
  ScoredSequence sequence;
};

// Greedy when beam_size is 1 in local mode, beam search otherwise.
Decoded Decode(const Model &model, const Input &input,
               const DecodeOptions &options);

// Decodes sentences in parallel; `threads` <= 0 uses the OpenMP default.
// Output is identical to DecodeCorpusSerial.
std::vector<Decoded> DecodeCorpus(const Model &model,
                                  std::span<const Input> inputs,
                                  const DecodeOptions &options, int threads);

std::vector<Decoded> DecodeCorpusSerial(const Model &model,
                                        std::span<const Input> inputs,
                                        const DecodeOptions &options);

// Decodes `inputs` and scores them against `gold`.
absl::StatusOr<Metrics> EvaluateDecoded(
    std::span<const Input> inputs, std::span<const Annotation> gold,
    std::span<const Decoded> decoded, const EvalOptions &eval_options = {});

}  // namespace gntp

#endif  // GNTP_DECODER_H_
