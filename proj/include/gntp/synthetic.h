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

#ifndef GNTP_SYNTHETIC_H_
#define GNTP_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "gntp/corpus_io.h"

namespace gntp {

// Generators:
//   separable-tagging  every word has one fixed tag; `size` sentences
//   lookahead          `size` pairs of the k-lookahead family; pair p uses
//                      words a<p> b<p> .. c<p> / a<p> b<p> .. e<p>, and pair 0
//                      plain a b .. c / a b .. e. Pairs are numbered from
//                      `offset`, so different offsets give disjoint pairs.
//   projective-trees   random projective dependency trees; `size` sentences
//   keep-drop          compression by word class; `size` sentences
struct SynthSpec {
  std::string generator;
  int size = 50;
  uint64_t seed = 1;
  int k = 1;
  int offset = 0;
};

std::vector<std::string> SyntheticGenerators();

TaskKind SyntheticTask(const std::string &generator);

absl::StatusOr<Corpus> GenerateSynthetic(const SynthSpec &spec);

}  // namespace gntp

#endif  // GNTP_SYNTHETIC_H_
